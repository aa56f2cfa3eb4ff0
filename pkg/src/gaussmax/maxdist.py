"""Distribution of the maximum of an equicorrelated Gaussian vector.

Let ``Y0 ~ N(nu0, rho)`` and ``Yj ~ N(nu_j, 1 - rho)`` be independent. The
kernel of this module is

    G(nu0, nu) = P(max_j Yj < Y0)
               = integral phi(u) prod_j Phi((nu0 + sqrt(rho) u - nu_j) / sqrt(1 - rho)) du,

and the maximum ``X*`` of ``X ~ N(mu, rho 11' + (1 - rho) I)`` has
``F_{X*}(x) = G(x, mu)``. Every derivative of ``G`` used elsewhere in the
package is an integral of the same shape against ``phi(u)`` or
``u phi(u)``, so one composite Gauss-Legendre rule on ``[-radius, radius]``
serves them all.

The fixed window loses relative accuracy once ``F_{X*}`` or ``1 - F_{X*}``
falls far below the absolute tolerance. :func:`log_max_cdf`,
:func:`log_max_sf` and :func:`log_max_pdf` cover the tails: they locate
the peak of the log-integrand, integrate over a window around it and sum
in log space, so they stay accurate long after the probabilities underflow.
"""

import functools
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import logsumexp

from . import special
from .exceptions import ParameterError, QuadratureError

__all__ = [
    "EquicorrParams",
    "QuadratureSpec",
    "LocationArgs",
    "KernelValue",
    "DEFAULT_QUADRATURE",
    "NEG_INF_SURROGATE",
    "kernel_integral",
    "g_integral",
    "dG_dnu0",
    "dG_dnui",
    "d2G_dnu02",
    "d2G_dnu0_dnui",
    "max_cdf",
    "max_pdf",
    "max_quantile",
    "log_max_cdf",
    "log_max_sf",
    "log_max_pdf",
]

#: Finite stand-in for a mean sent to minus infinity. Phi((x + 40) / sqrt(1 - rho))
#: rounds to exactly 1 for every abscissa the package evaluates.
NEG_INF_SURROGATE = -40.0

_PANEL_POINTS = 16
_MAX_REFINE = 4  # nodes may double this many times before giving up
_CHUNK = 1 << 22  # elements per (batch, nodes, k) block

ArrayLike = Union[float, Sequence[float], np.ndarray]


def _finite_vector(values, name):
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise ParameterError(f"{name} must be a non-empty vector")
    if not np.all(np.isfinite(arr)):
        raise ParameterError(f"{name} must be finite")
    return arr


def _check_rho(rho):
    rho = float(rho)
    if not (0.0 < rho < 1.0):
        raise ParameterError(f"rho must lie strictly inside (0, 1), got {rho!r}")
    return rho


@dataclass(frozen=True)
class EquicorrParams:
    """Gaussian vector with unit variances and common correlation ``rho``.

    ``mu`` is stored as a tuple so instances are hashable; use ``mu_array``
    for arithmetic.
    """

    k: int
    rho: float
    mu: tuple

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ParameterError(f"k must be a positive integer, got {self.k!r}")
        mu = _finite_vector(self.mu, "mu")
        if mu.size != self.k:
            raise ParameterError(f"mu has {mu.size} entries but k = {self.k}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "rho", _check_rho(self.rho))
        object.__setattr__(self, "mu", tuple(float(m) for m in mu))

    @classmethod
    def from_means(cls, mu, rho):
        mu = tuple(np.atleast_1d(np.asarray(mu, dtype=float)).tolist())
        return cls(len(mu), rho, mu)

    @property
    def mu_array(self) -> np.ndarray:
        return np.asarray(self.mu, dtype=float)

    def shifted(self, c: float) -> "EquicorrParams":
        return EquicorrParams(self.k, self.rho, tuple(m + c for m in self.mu))


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls for the 1-D integrals.

    nodes
        Starting number of Gauss-Legendre nodes (16 per panel).
    radius
        Half-width of the integration window in units of the mixing variable.
    abs_tol
        Target absolute error; refinement doubles ``nodes`` up to 16 times the
        starting value before a :class:`QuadratureError` is raised.
    """

    nodes: int = 256
    radius: float = 9.0
    abs_tol: float = 1e-12

    def __post_init__(self):
        if int(self.nodes) != self.nodes or self.nodes < 16:
            raise ParameterError("nodes must be an integer >= 16")
        if not self.radius >= 6.0:
            raise ParameterError("radius must be >= 6")
        if not self.abs_tol > 0.0:
            raise ParameterError("abs_tol must be positive")

    @property
    def tail_bound(self) -> float:
        # every integrand is bounded by (a constant times) phi(u)
        return 2.0 * special.std_normal_sf(self.radius)


DEFAULT_QUADRATURE = QuadratureSpec()


@dataclass(frozen=True)
class LocationArgs:
    """Means ``nu0`` of ``Y0`` and ``nu`` of ``Y1..Yk``.

    ``nu0`` may be an array; kernel functions then vectorise over it.
    """

    nu0: ArrayLike
    nu: tuple = field(default=())

    def __post_init__(self):
        nu0 = np.asarray(self.nu0, dtype=float)
        if not np.all(np.isfinite(nu0)):
            raise ParameterError("nu0 must be finite")
        nu = _finite_vector(self.nu, "nu")
        object.__setattr__(self, "nu0", float(nu0) if nu0.ndim == 0 else nu0)
        object.__setattr__(self, "nu", tuple(nu.tolist()))

    @property
    def k(self) -> int:
        return len(self.nu)


class KernelValue(NamedTuple):
    value: Union[float, np.ndarray]
    error: float


@functools.lru_cache(maxsize=32)
def _rule(nodes: int, radius: float):
    """Composite Gauss-Legendre nodes on [-radius, radius] with phi(u) folded in."""
    pts = min(_PANEL_POINTS, nodes)
    panels = -(-nodes // pts)
    x, w = np.polynomial.legendre.leggauss(pts)
    edges = np.linspace(-radius, radius, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    u = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wu = (half[:, None] * w[None, :]).ravel()
    wphi = wu * special.std_normal_pdf(u)
    u.setflags(write=False)
    wphi.setflags(write=False)
    return u, wphi


_KINDS = ("G", "G0", "Gi", "G00", "G0i")


def _integrand(kind, nu0, nu, rho, u, i):
    """Integrand values without the phi(u) weight; shape (batch, nodes)."""
    s = math.sqrt(1.0 - rho)
    t = nu0[:, None] + math.sqrt(rho) * u[None, :]
    z = (t[:, :, None] - nu[None, None, :]) / s
    logcdf = special._logcdf(z.ravel()).reshape(z.shape)
    total = logcdf.sum(axis=2)
    if kind == "G":
        return np.exp(total)
    # phi(z_i) prod_{j != i} Phi(z_j), assembled in log space
    if kind in ("Gi", "G0i"):
        zi = z[:, :, i]
        a = np.exp(total - logcdf[:, :, i] - 0.5 * zi * zi - special.LOG_SQRT_2PI)
        vals = -a / s
    else:
        a = np.exp(total[:, :, None] - logcdf - 0.5 * z * z - special.LOG_SQRT_2PI)
        vals = a.sum(axis=2) / s
    if kind in ("G00", "G0i"):
        # d/dnu0 of E f(nu0 + sqrt(rho) U) is E[U f(...)] / sqrt(rho)
        vals = vals * (u[None, :] / math.sqrt(rho))
    return vals


def _apply_rule(kind, nu0, nu, rho, nodes, radius, i):
    u, wphi = _rule(nodes, radius)
    out = np.empty(nu0.size)
    step = max(1, _CHUNK // (u.size * nu.size))
    for start in range(0, nu0.size, step):
        block = nu0[start:start + step]
        out[start:start + step] = _integrand(kind, block, nu, rho, u, i) @ wphi
    return out


def kernel_integral(kind: str, args: LocationArgs, rho: float,
                    q: QuadratureSpec = DEFAULT_QUADRATURE,
                    i: Optional[int] = None) -> KernelValue:
    """Evaluate ``G`` or one of its derivatives with an error estimate.

    Parameters
    ----------
    kind : {"G", "G0", "Gi", "G00", "G0i"}
        ``G`` itself, ``dG/dnu0``, ``dG/dnu_i``, ``d2G/dnu0^2`` or
        ``d2G/dnu0 dnu_i``.
    args : LocationArgs
    rho : float
    q : QuadratureSpec
    i : int, optional
        1-based coordinate index, required for the ``*i`` kinds.

    Returns
    -------
    KernelValue
        ``value`` (float, or array matching ``args.nu0``) and the estimated
        absolute ``error``: the difference from the rule with half as many
        nodes plus the truncation bound.
    """
    if kind not in _KINDS:
        raise ParameterError(f"unknown kernel quantity {kind!r}")
    rho = _check_rho(rho)
    nu = np.asarray(args.nu, dtype=float)
    idx = None
    if kind in ("Gi", "G0i"):
        if i is None or int(i) != i or not (1 <= i <= nu.size):
            raise ParameterError(f"index i must be in 1..{nu.size}, got {i!r}")
        idx = int(i) - 1
    nu0 = np.atleast_1d(np.asarray(args.nu0, dtype=float)).ravel()

    nodes = q.nodes
    prev = _apply_rule(kind, nu0, nu, rho, max(8, nodes // 2), q.radius, idx)
    for _ in range(_MAX_REFINE + 1):
        cur = _apply_rule(kind, nu0, nu, rho, nodes, q.radius, idx)
        err = float(np.max(np.abs(cur - prev))) if cur.size else 0.0
        if err <= q.abs_tol:
            break
        prev = cur
        nodes *= 2
    else:
        raise QuadratureError(
            f"{kind} integral did not reach abs_tol={q.abs_tol:g} "
            f"(estimate {err:.3g} at {nodes // 2} nodes)")
    err += q.tail_bound
    if kind == "G":
        cur = np.clip(cur, 0.0, 1.0)
    value = float(cur[0]) if np.ndim(args.nu0) == 0 else cur.reshape(np.shape(args.nu0))
    return KernelValue(value, err)


def g_integral(args: LocationArgs, rho: float, q: QuadratureSpec = DEFAULT_QUADRATURE):
    """``G(nu0, nu) = P(max_j Yj < Y0)``."""
    return kernel_integral("G", args, rho, q).value


def dG_dnu0(args: LocationArgs, rho: float, q: QuadratureSpec = DEFAULT_QUADRATURE):
    """``dG/dnu0``; positive."""
    return kernel_integral("G0", args, rho, q).value


def dG_dnui(i: int, args: LocationArgs, rho: float,
            q: QuadratureSpec = DEFAULT_QUADRATURE):
    """``dG/dnu_i`` for the 1-based index ``i``; always negative."""
    return kernel_integral("Gi", args, rho, q, i).value


def d2G_dnu02(args: LocationArgs, rho: float, q: QuadratureSpec = DEFAULT_QUADRATURE):
    """``d2G/dnu0^2``."""
    return kernel_integral("G00", args, rho, q).value


def d2G_dnu0_dnui(i: int, args: LocationArgs, rho: float,
                  q: QuadratureSpec = DEFAULT_QUADRATURE):
    """Mixed second derivative ``d2G/dnu0 dnu_i``."""
    return kernel_integral("G0i", args, rho, q, i).value


def max_cdf(x, p: EquicorrParams, q: QuadratureSpec = DEFAULT_QUADRATURE):
    """``F_{X*}(x) = P(max_i X_i <= x)``; vectorised over ``x``."""
    return kernel_integral("G", LocationArgs(x, p.mu), p.rho, q).value


def max_pdf(x, p: EquicorrParams, q: QuadratureSpec = DEFAULT_QUADRATURE):
    """Density of ``X*``; vectorised over ``x``."""
    return kernel_integral("G0", LocationArgs(x, p.mu), p.rho, q).value


_MAX_DOUBLINGS = 60
_MAX_ITER = 200
_EPS = np.finfo(float).eps


def max_quantile(zeta, p: EquicorrParams, q: QuadratureSpec = DEFAULT_QUADRATURE):
    """Solve ``max_cdf(x) = zeta`` for ``x``; vectorised over ``zeta``.

    The search starts from ``[min mu + z - 1, max mu + z + sqrt(k) + 1]``
    with ``z = Phi^{-1}(zeta)`` and widens each side geometrically until it
    brackets the root. Newton steps using ``max_pdf`` then shrink the
    bracket, with a bisection whenever a step would leave it. All levels
    are solved together, so each iteration costs one quadrature sweep.
    """
    zeta_arr = np.asarray(zeta, dtype=float)
    zs = zeta_arr.ravel()
    if not np.all((zs > 0.0) & (zs < 1.0)):
        raise ParameterError(f"zeta must lie strictly inside (0, 1), got {zeta!r}")
    mu = p.mu_array
    z = special.std_normal_quantile(zs)

    def f(x):
        return np.asarray(max_cdf(x, p, q), dtype=float) - zs

    lo = mu.min() + z - 1.0
    hi = mu.max() + z + math.sqrt(p.k) + 1.0
    for bound, sign in ((lo, 1.0), (hi, -1.0)):
        step = np.ones_like(zs)
        for _ in range(_MAX_DOUBLINGS):
            need = sign * f(bound) > 0.0
            if not need.any():
                break
            bound[need] -= sign * step[need]
            step[need] *= 2.0
        else:
            raise ParameterError("quantile bracket did not converge")

    x = 0.5 * (lo + hi)
    done = np.zeros(zs.shape, dtype=bool)
    for _ in range(_MAX_ITER):
        fx = f(x)
        lo = np.where(fx < 0.0, x, lo)
        hi = np.where(fx > 0.0, x, hi)
        # F is only known to a few ulps of zeta
        done |= np.abs(fx) <= 8.0 * _EPS * zs
        dens = np.asarray(max_pdf(x, p, q), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = x - fx / dens
        inside = np.isfinite(newton) & (newton > lo) & (newton < hi)
        nxt = np.where(inside, newton, 0.5 * (lo + hi))
        tol = 1e-15 * np.maximum(1.0, np.abs(x))
        done |= (np.abs(nxt - x) <= tol) | (hi - lo <= tol)
        x = np.where(done, x, nxt)
        if done.all():
            break
    else:
        raise QuadratureError("quantile iteration did not converge")
    resid = np.abs(f(x))
    if np.any(resid > 1e-10):
        raise QuadratureError(f"quantile residual {resid.max():.3g} exceeds 1e-10")
    return float(x[0]) if zeta_arr.ndim == 0 else x.reshape(zeta_arr.shape)


# ---------------------------------------------------------------- log space

_LOG_DROP = 80.0  # integrand below exp(-80) of its peak is dropped
_LOG_TOL = 1e-13
_LOG_MAX_NODES = 8192
_TINY = 1e-280


def _log_integrand(kind, x, mu, rho, u):
    """Log of the integrand of F ("F"), 1 - F ("S") or the density ("f")."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    s = math.sqrt(1.0 - rho)
    z = (x + math.sqrt(rho) * u[:, None] - mu[None, :]) / s
    base = -0.5 * u * u - special.LOG_SQRT_2PI
    lc = special._logcdf(z.ravel()).reshape(z.shape)
    total = lc.sum(axis=1)
    if kind == "F":
        return base + total
    if kind == "f":
        # phi(z_i) prod_{j != i} Phi(z_j) = prod_j Phi(z_j) * m(z_i)
        log_m = -0.5 * z * z - special.LOG_SQRT_2PI - lc
        return base + total + logsumexp(log_m, axis=1) - math.log(s)
    # 1 - prod Phi(z_j); once that is below _TINY every Phi(-z_j) is tiny
    # too and the sum of the Phi(-z_j) is exact to working precision
    v = -np.expm1(total)
    out = np.empty_like(v)
    ok = v > _TINY
    out[ok] = np.log(v[ok])
    if not np.all(ok):
        lsf = special._logcdf(-z[~ok].ravel()).reshape(-1, mu.size)
        out[~ok] = logsumexp(lsf, axis=1)
    return base + out


def _log_rule(lo, hi, nodes):
    pts = _PANEL_POINTS
    panels = max(1, nodes // pts)
    x, w = np.polynomial.legendre.leggauss(pts)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    return (mid[:, None] + half[:, None] * x[None, :]).ravel(), np.log((half[:, None] * w[None, :]).ravel())


def _log_integral(kind, x, p):
    mu = p.mu_array
    rho = p.rho

    def ell(u):
        return _log_integrand(kind, x, mu, rho, u)

    # coarse scan for the peak; every mode lies within |x - mu| / sqrt(rho) of 0
    reach = 12.0 + (abs(x) + np.abs(mu).max()) / math.sqrt(rho)
    scan = np.linspace(-reach, reach, 2049)
    vals = ell(scan)
    j = int(np.argmax(vals))
    res = minimize_scalar(lambda t: -ell(t)[0], method="bounded",
                          bounds=(scan[max(j - 1, 0)], scan[min(j + 1, scan.size - 1)]),
                          options={"xatol": 1e-10})
    u_star, top = (float(res.x), -float(res.fun)) if -res.fun >= vals[j] else (scan[j], vals[j])
    if not np.isfinite(top):
        raise QuadratureError(f"log-integrand of {kind} has no finite peak at x = {x!r}")

    def edge(sign):
        d = 1e-2
        while ell(u_star + sign * d)[0] > top - _LOG_DROP:
            d *= 2.0
            if d > 4.0 * reach:
                break
        return u_star + sign * d

    lo, hi = edge(-1.0), edge(1.0)
    nodes = 64
    prev = None
    while nodes <= _LOG_MAX_NODES:
        u, logw = _log_rule(lo, hi, nodes)
        cur = float(logsumexp(ell(u) + logw))
        if prev is not None and abs(cur - prev) <= _LOG_TOL * max(1.0, abs(cur)):
            return cur
        prev = cur
        nodes *= 2
    raise QuadratureError(f"log-space {kind} integral at x = {x!r} did not converge")


def _log_kernel(kind, x, p):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ParameterError("x must be finite")
    out = np.array([_log_integral(kind, float(v), p) for v in x.ravel()]).reshape(x.shape)
    return float(out) if out.ndim == 0 else out


def log_max_cdf(x, p: EquicorrParams):
    """``log F_{X*}(x)``, relatively accurate however deep in the lower tail."""
    return _log_kernel("F", x, p)


def log_max_sf(x, p: EquicorrParams):
    """``log(1 - F_{X*}(x))``, relatively accurate however deep in the upper tail."""
    return _log_kernel("S", x, p)


def log_max_pdf(x, p: EquicorrParams):
    """``log f_{X*}(x)`` in either tail."""
    return _log_kernel("f", x, p)
