"""Single-crossing classification of ``F_{X*}`` against ``Phi``.

The quantile gap ``h(zeta) = Phi^{-1}(zeta) - g(zeta)`` is strictly
increasing, so its sign pattern over ``zeta`` decides everything:

* ``h < 0`` throughout: ``F_{X*} < Phi``, the maximum dominates;
* ``h > 0`` throughout: ``F_{X*} > Phi``, the standard normal dominates;
* one sign change at ``zeta*``: the CDFs cross once, at ``Phi^{-1}(zeta*)``.

Because ``F_{X*}`` is strictly increasing, ``sign h(zeta)`` equals
``sign(F_{X*}(x) - Phi(x))`` at ``x = Phi^{-1}(zeta)``, which needs no inner
quantile solve. Signs are read off log-space comparisons (``log F`` against
``log Phi`` for ``x <= 0``, ``log(1 - F)`` against ``log(1 - Phi)`` above),
so they stay reliable in both tails.

Two probes at ``zeta = 1e-6`` and ``1 - 1e-6`` do not settle the verdict on
their own when ``k >= 2``. The mean of the coordinates has variance
``(1 + (k - 1) rho) / k < 1``, so ``F_{X*} < Phi`` far enough left; and if
every ``mu_i < 0`` then ``1 - F_{X*} <= k (1 - Phi(x - max mu))`` is
eventually below ``1 - Phi(x)``. A crossing can therefore sit beyond either
probe, and the classifier follows the sign outwards before concluding that
one distribution dominates.
"""

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from . import special
from .exceptions import InconclusiveError, ParameterError, QuadratureError, TheoremViolation
from .maxdist import (
    DEFAULT_QUADRATURE,
    EquicorrParams,
    QuadratureSpec,
    log_max_cdf,
    log_max_pdf,
    log_max_sf,
    max_cdf,
    max_quantile,
)

__all__ = [
    "DominanceKind",
    "DominanceVerdict",
    "h_eval",
    "log_gap",
    "find_crossing",
    "default_grid",
    "count_sign_changes",
    "conditional_dominance_check",
]

PROBE_LO = 1e-6
PROBE_HI = 1.0 - 1e-6
LOG_GAP_RTOL = 1e-11  # log ratios this small relative to log Phi(-|x|) carry no sign
TAIL_LIMIT = 1e4  # outermost |x| examined when following a tail
CROSSING_TOL = 1e-9
SIGN_FLOOR = 1e-10
CONDITIONAL_SLACK = 1e-10


class DominanceKind(str, enum.Enum):
    MAX_DOMINATES = "MAX_DOMINATES"
    STD_DOMINATES = "STD_DOMINATES"
    SINGLE_CROSSING = "SINGLE_CROSSING"
    IDENTICAL = "IDENTICAL"


@dataclass(frozen=True)
class DominanceVerdict:
    """Outcome of :func:`find_crossing`.

    ``certificate_grid`` lists the ``(x, sign of F - Phi)`` pairs that were
    evaluated; for the fast paths it is empty. ``log_pdf_ratio`` is
    ``log f_{X*}(x0) - log phi(x0)``, which stays meaningful when a crossing
    far in a tail makes ``pdf_gap`` underflow to zero.
    """

    kind: DominanceKind
    x0: Optional[float] = None
    pdf_gap: Optional[float] = None
    certificate_grid: tuple = field(default=(), repr=False)
    log_pdf_ratio: Optional[float] = None

    def __post_init__(self):
        crossing = self.kind is DominanceKind.SINGLE_CROSSING
        if crossing != (self.x0 is not None):
            raise ParameterError("x0 must be given exactly for SINGLE_CROSSING")
        if self.log_pdf_ratio is not None and not self.log_pdf_ratio > 0:
            raise TheoremViolation(f"log density ratio at the crossing is {self.log_pdf_ratio!r}")
        if self.pdf_gap is not None:
            underflow = self.pdf_gap == 0.0 and self.log_pdf_ratio is not None
            if not (self.pdf_gap > 0 or underflow):
                raise TheoremViolation(f"density gap at the crossing is {self.pdf_gap!r}")

    def to_dict(self):
        return {"kind": self.kind.value, "x0": self.x0, "pdf_gap": self.pdf_gap}


def h_eval(zeta: float, p: EquicorrParams, q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """``Phi^{-1}(zeta) - g(zeta)`` where ``g`` is the quantile of the maximum."""
    return special.std_normal_quantile(zeta) - max_quantile(zeta, p, q)


def log_gap(x: float, p: EquicorrParams) -> float:
    """A log-ratio carrying the sign of ``F_{X*}(x) - Phi(x)``.

    ``log F - log Phi`` for ``x <= 0`` and ``log(1 - Phi) - log(1 - F)``
    for ``x > 0``. Both are relatively accurate however far out ``x`` is.
    """
    x = float(x)
    if x <= 0.0:
        return log_max_cdf(x, p) - special.std_normal_logcdf(x)
    return special.std_normal_logcdf(-x) - log_max_sf(x, p)


def _sign(x, p):
    d = log_gap(x, p)
    scale = max(1.0, abs(float(special.std_normal_logcdf(-abs(x)))))
    if abs(d) <= LOG_GAP_RTOL * scale:
        return 0
    return 1 if d > 0 else -1


def _follow_tail(p, x, direction, want, cert):
    """Step outwards from ``x`` until the sign becomes ``want``.

    Returns a bracket ``(inner, outer)`` or ``None`` if ``TAIL_LIMIT`` is
    reached first.
    """
    step = 1.0
    inner = x
    while abs(inner) < TAIL_LIMIT:
        outer = inner + direction * step
        s = _sign(outer, p)
        cert.append((outer, s))
        if s == 0:
            raise InconclusiveError(f"sign of F - Phi at x = {outer!r} is within rounding")
        if s == want:
            return inner, outer
        inner = outer
        step *= 2.0
    return None


def find_crossing(p: EquicorrParams, q: QuadratureSpec = DEFAULT_QUADRATURE) -> DominanceVerdict:
    """Classify ``p`` and locate the crossing point when there is one.

    Parameters
    ----------
    p : EquicorrParams
    q : QuadratureSpec
        Used for the final residual check ``|F(x0) - Phi(x0)| <= 1e-9``.

    Raises
    ------
    InconclusiveError
        A sign is lost in rounding, or a tail that must change sign has
        not done so by ``|x| = TAIL_LIMIT``.
    TheoremViolation
        ``h`` is found decreasing, or the density at the crossing does not
        exceed ``phi``.
    """
    mu = p.mu_array
    if mu.max() > 0.0:
        # F_{X*}(x) <= Phi(x - max mu) < Phi(x)
        return DominanceVerdict(DominanceKind.MAX_DOMINATES)
    if p.k == 1:
        # F_{X*}(x) = Phi(x - mu_1): a pure shift
        if mu[0] == 0.0:
            return DominanceVerdict(DominanceKind.IDENTICAL)
        return DominanceVerdict(DominanceKind.STD_DOMINATES)
    if mu.max() == 0.0:
        # the same bound, strict because a second coordinate can exceed x
        return DominanceVerdict(DominanceKind.MAX_DOMINATES)

    x_lo = special.std_normal_quantile(PROBE_LO)
    x_hi = special.std_normal_quantile(PROBE_HI)
    s_lo, s_hi = _sign(x_lo, p), _sign(x_hi, p)
    cert = [(x_lo, s_lo), (x_hi, s_hi)]
    if s_lo == 0 or s_hi == 0:
        raise InconclusiveError(
            f"sign of F - Phi at a probe is within rounding ({s_lo}, {s_hi})")
    if s_lo > 0 > s_hi:
        raise TheoremViolation(f"h decreases between the probes for {p}")

    if s_lo < 0 < s_hi:
        bracket = (x_lo, x_hi)
    elif s_lo > 0:
        bracket = _follow_tail(p, x_lo, -1.0, -1, cert)
        if bracket is None:
            # k >= 2 here, so the lower tail must eventually fall below Phi
            raise InconclusiveError(
                f"lower tail of {p} still above Phi at x = -{TAIL_LIMIT:g}")
    else:
        bracket = _follow_tail(p, x_hi, 1.0, 1, cert)
        if bracket is None:
            # max mu < 0 here, so the upper tail must eventually rise above Phi
            raise InconclusiveError(
                f"upper tail of {p} still below Phi at x = {TAIL_LIMIT:g}")

    a, b = sorted(bracket)
    x0 = brentq(lambda x: log_gap(x, p), a, b, xtol=1e-15,
                rtol=4.0 * np.finfo(float).eps, maxiter=200)
    resid = max_cdf(x0, p, q) - special.std_normal_cdf(x0)
    if abs(resid) > CROSSING_TOL:
        raise QuadratureError(f"crossing residual {resid:.3g} exceeds {CROSSING_TOL:g}")
    log_ratio = log_max_pdf(x0, p) - special.std_normal_logpdf(x0)
    if not log_ratio > 0:
        raise TheoremViolation(f"f_X*(x0) <= phi(x0) at x0 = {x0!r} (log ratio {log_ratio!r})")
    pdf_gap = special.std_normal_pdf(x0) * math.expm1(log_ratio)
    return DominanceVerdict(DominanceKind.SINGLE_CROSSING, float(x0), float(pdf_gap),
                            tuple(cert), float(log_ratio))


def default_grid(p: EquicorrParams, n: int = 1601) -> np.ndarray:
    """Evenly spaced grid over ``[min mu - 8, 8 + sqrt(2 log k)]``."""
    hi = 8.0 + math.sqrt(2.0 * math.log(p.k))
    return np.linspace(min(p.mu) - 8.0, hi, n)


def count_sign_changes(p: EquicorrParams, grid, q: QuadratureSpec = DEFAULT_QUADRATURE) -> int:
    """Count sign alternations of ``F_{X*} - Phi`` over ``grid``.

    Differences of magnitude at most 1e-10 carry no sign and are skipped.
    The grid should span ``[min mu - 8, 8 + sqrt(2 log k)]`` (see
    :func:`default_grid`); only its shape is enforced.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 100:
        raise ParameterError("grid needs at least 100 points")
    if not np.all(np.isfinite(grid)) or not np.all(np.diff(grid) > 0):
        raise ParameterError("grid must be finite and strictly increasing")
    d = max_cdf(grid, p, q) - special.std_normal_cdf(grid)
    signs = np.sign(d[np.abs(d) > SIGN_FLOOR])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def conditional_dominance_check(p: EquicorrParams, x0: float, n_grid: int = 200,
                                q: QuadratureSpec = DEFAULT_QUADRATURE,
                                width: float = 8.0) -> bool:
    """Check the conditional dominance statements on either side of ``x0``.

    Above ``x0`` the conditional CDF of ``X* | X* > x0`` must lie on or above
    that of ``Z | Z > x0``; below ``x0`` the conditional CDF of
    ``X* | X* < x0`` must lie on or below that of ``Z | Z < x0``.
    """
    x0 = float(x0)
    f0 = max_cdf(x0, p, q)
    phi0 = special.std_normal_cdf(x0)
    if abs(f0 - phi0) > 1e-8:
        raise ParameterError(f"x0 = {x0!r} is not a crossing (F - Phi = {f0 - phi0:.3g})")
    if n_grid < 1:
        raise ParameterError("n_grid must be positive")

    steps = np.linspace(0.0, width, n_grid + 1)[1:]
    up = x0 + steps
    down = x0 - steps
    f_up, f_down = max_cdf(up, p, q), max_cdf(down, p, q)
    ok_up = (f_up - f0) / (1.0 - f0) >= (special.std_normal_cdf(up) - phi0) / (1.0 - phi0) - CONDITIONAL_SLACK
    ok_down = f_down / f0 <= special.std_normal_cdf(down) / phi0 + CONDITIONAL_SLACK
    return bool(np.all(ok_up) and np.all(ok_down))
