"""Standard normal primitives and the inverse Mills ratio.

Every function accepts a scalar or an array and returns the same shape
(a Python ``float`` for scalar input). The lower tail is handled through
``erfcx`` so that ``log Phi`` and ``phi / Phi`` stay finite far beyond the
point where ``Phi`` itself underflows.
"""

import math

import numpy as np
from scipy.special import erfcx

from .exceptions import ParameterError

__all__ = [
    "std_normal_pdf",
    "std_normal_logpdf",
    "std_normal_cdf",
    "std_normal_sf",
    "std_normal_logcdf",
    "std_normal_quantile",
    "inverse_mills",
    "inverse_mills_deriv",
]

INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_SQRT1_2 = 1.0 / math.sqrt(2.0)


def _finite(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ParameterError(f"{name} must be finite")
    return arr


def _out(arr, like):
    if np.ndim(like) == 0:
        return float(arr)
    return arr


def std_normal_pdf(x):
    """Standard normal density ``exp(-x**2 / 2) / sqrt(2 pi)``."""
    a = _finite(x)
    hi, lo = _half_square(a)
    return _out(INV_SQRT_2PI * np.exp(-hi) * (1.0 - lo), x)


def std_normal_logpdf(x):
    """``log phi(x)``; finite however large ``|x|`` is."""
    a = np.atleast_1d(_finite(x))
    return _out((-0.5 * a * a - LOG_SQRT_2PI).reshape(np.shape(x)), x)


_SPLITTER = 134217729.0  # 2**27 + 1


def _half_square(a):
    """Return ``(hi, lo)`` with ``hi + lo == a*a/2`` to about 2**-106 relative."""
    with np.errstate(over="ignore", invalid="ignore"):
        hi = a * a
        c = _SPLITTER * a
        ah = c - (c - a)
        al = a - ah
        lo = ((ah * ah - hi) + 2.0 * ah * al) + al * al
    # the split overflows beyond |a| ~ 1e146, where exp(-hi) is 0 anyway
    lo = np.where(np.isfinite(lo), lo, 0.0)
    return 0.5 * hi, 0.5 * lo


def _lower_tail(a):
    """Phi(a) for a < 0 as erfcx(-a/sqrt2) exp(-a^2/2) / 2.

    The square is carried in two parts because exp amplifies any rounding
    in ``a*a/2`` by a factor of ``a**2``.
    """
    hi, lo = _half_square(a)
    return 0.5 * erfcx(-a * _SQRT1_2) * np.exp(-hi) * (1.0 - lo)


def _cdf(a):
    out = np.empty_like(a)
    neg = a < 0
    out[neg] = _lower_tail(a[neg])
    out[~neg] = 1.0 - _lower_tail(-a[~neg])
    return out


def std_normal_cdf(x):
    """Standard normal distribution function Phi(x)."""
    a = np.atleast_1d(_finite(x))
    return _out(_cdf(a).reshape(np.shape(x)), x)


def std_normal_sf(x):
    """Upper tail ``1 - Phi(x)`` without cancellation."""
    a = np.atleast_1d(_finite(x))
    return _out(_cdf(-a).reshape(np.shape(x)), x)


def _logcdf(a):
    out = np.empty_like(a)
    neg = a < 0
    an = a[neg]
    hi, lo = _half_square(an)
    # no exp(), so nothing underflows however far into the tail
    out[neg] = np.log(0.5 * erfcx(-an * _SQRT1_2)) - (hi + lo)
    out[~neg] = np.log1p(-_lower_tail(-a[~neg]))
    return out


def std_normal_logcdf(x):
    """``log Phi(x)``, accurate in the far lower tail."""
    a = np.atleast_1d(_finite(x))
    return _out(_logcdf(a).reshape(np.shape(x)), x)


# Acklam's rational approximation, relative error about 1.15e-9 before polishing.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def _poly(coefs, x):
    acc = np.zeros_like(x)
    for c in coefs:
        acc = acc * x + c
    return acc


def _lower_quantile(p):
    """Quantile for p in (0, 0.5]; the caller reflects the upper half."""
    x = np.empty_like(p)
    tail = p < _P_LOW
    q = np.sqrt(-2.0 * np.log(p[tail]))
    x[tail] = _poly(_C, q) / (_poly(_D, q) * q + 1.0)
    q = p[~tail] - 0.5
    r = q * q
    x[~tail] = _poly(_A, r) * q / (_poly(_B, r) * r + 1.0)
    # Newton on log Phi: quadratic convergence, scale free in the tail
    logp = np.log(p)
    for _ in range(2):
        x = x - (_logcdf(x) - logp) / _mills(x)
    return x


def std_normal_quantile(p):
    """Inverse of the standard normal distribution function.

    Parameters
    ----------
    p : float or array_like
        Probabilities strictly inside (0, 1).

    Returns
    -------
    float or ndarray
        ``x`` with ``Phi(x) == p`` to within a few ulp of ``p``.
    """
    a = np.atleast_1d(np.asarray(p, dtype=float))
    if not np.all((a > 0.0) & (a < 1.0)):
        raise ParameterError("quantile argument must lie strictly inside (0, 1)")
    upper = a > 0.5
    # 1 - a is exact for a >= 0.5
    lo = np.where(upper, 1.0 - a, a)
    x = _lower_quantile(lo)
    x = np.where(upper, -x, x)
    return _out(x.reshape(np.shape(p)), p)


def _mills(a):
    out = np.empty_like(a)
    neg = a < 0
    out[neg] = SQRT_2_OVER_PI / erfcx(-a[neg] * _SQRT1_2)
    ap = a[~neg]
    hi, lo = _half_square(ap)
    out[~neg] = INV_SQRT_2PI * np.exp(-hi) * (1.0 - lo) / (1.0 - _lower_tail(-ap))
    return out


def inverse_mills(x):
    """Inverse Mills ratio ``m(x) = phi(x) / Phi(x)``.

    For negative arguments the ratio is taken as ``sqrt(2/pi) / erfcx(-x/sqrt2)``,
    which is the quotient with the common ``exp(-x**2/2)`` factor cancelled.
    Above roughly ``x = 38.5`` the true value is below the smallest subnormal
    and the result is 0.
    """
    a = np.atleast_1d(_finite(x))
    return _out(_mills(a).reshape(np.shape(x)), x)


def inverse_mills_deriv(x):
    """Derivative ``m'(x) = -m(x) (x + m(x))``; always in (-1, 0]."""
    a = np.atleast_1d(_finite(x))
    m = _mills(a)
    return _out((-m * (a + m)).reshape(np.shape(x)), x)
