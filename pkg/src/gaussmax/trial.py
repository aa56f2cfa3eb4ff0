"""Threshold calculator for k-treatments-versus-control designs.

If ``P(X_i < 0 for all i) >= kappa`` then for every ``zeta`` in ``(kappa, 1)``

    P(X_i < Phi^{-1}(zeta) - Phi^{-1}(kappa) for all i) > zeta.

Here ``X_i`` are the equicorrelated treatment-minus-control contrasts. The
bound is the single-crossing theorem applied to ``X + Phi^{-1}(kappa)``, so
it holds with equality exactly when that shifted vector is a single
standard normal: ``k = 1`` and ``kappa = Phi(-mu_1)``, the calibrated value.
For ``k = 1`` the attained probability is then ``zeta`` whatever ``mu_1`` is.
"""

from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Optional

from . import special
from .exceptions import GaussMaxError, HypothesisViolation, ParameterError, TheoremViolation
from .maxdist import DEFAULT_QUADRATURE, EquicorrParams, QuadratureSpec, max_cdf

__all__ = [
    "CorollaryResult",
    "SweepEntry",
    "threshold_shift",
    "calibrate_kappa",
    "corollary_check",
    "zeta_sweep",
    "write_results_csv",
]

DEGENERATE_TOL = 1e-10


@dataclass(frozen=True)
class CorollaryResult:
    kappa: float
    zeta: float
    shift: float
    attained: float
    margin: float

    def to_dict(self):
        return {"zeta": self.zeta, "kappa": self.kappa, "shift": self.shift,
                "attained": self.attained, "margin": self.margin}


def threshold_shift(kappa: float, zeta: float) -> float:
    """``Phi^{-1}(zeta) - Phi^{-1}(kappa)`` for ``0 < kappa < zeta < 1``."""
    kappa, zeta = float(kappa), float(zeta)
    if not (0.0 < kappa < zeta < 1.0):
        raise ParameterError(f"need 0 < kappa < zeta < 1, got kappa={kappa!r}, zeta={zeta!r}")
    return special.std_normal_quantile(zeta) - special.std_normal_quantile(kappa)


def calibrate_kappa(p: EquicorrParams, q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Largest admissible ``kappa``: ``P(X_i < 0 for all i) = F_{X*}(0)``."""
    return max_cdf(0.0, p, q)


def _degenerate(p, kappa, kappa_star, q):
    # X + Phi^{-1}(kappa) ~ N(0, 1) to within the quadrature tolerance
    return p.k == 1 and kappa >= kappa_star - q.abs_tol


def corollary_check(p: EquicorrParams, kappa: Optional[float], zeta: float,
                    q: QuadratureSpec = DEFAULT_QUADRATURE) -> CorollaryResult:
    """Evaluate the threshold bound and confirm its conclusion.

    ``kappa=None`` uses :func:`calibrate_kappa`.

    Raises
    ------
    HypothesisViolation
        ``P(X_i < 0 for all i) < kappa`` by more than ``q.abs_tol``.
    TheoremViolation
        The attained probability does not exceed ``zeta``.
    """
    kappa_star = calibrate_kappa(p, q)
    if kappa is None:
        kappa = kappa_star
    kappa = float(kappa)
    shift = threshold_shift(kappa, zeta)
    # kappa_star is only known to within the quadrature tolerance
    if kappa_star < kappa - q.abs_tol:
        raise HypothesisViolation(
            f"P(all X_i < 0) = {kappa_star:.17g} is below kappa = {kappa:.17g}")
    attained = max_cdf(shift, p, q)
    margin = attained - zeta
    if _degenerate(p, kappa, kappa_star, q):
        if abs(margin) > DEGENERATE_TOL:
            raise TheoremViolation(f"degenerate case margin {margin!r} is not 0")
    elif not margin > 0.0:
        raise TheoremViolation(
            f"attained {attained!r} <= zeta {zeta!r} for {p} with kappa {kappa!r}")
    return CorollaryResult(kappa, float(zeta), shift, attained, margin)


class SweepEntry(NamedTuple):
    zeta: float
    result: Optional[CorollaryResult]
    error: Optional[str]


def zeta_sweep(p: EquicorrParams, kappa: Optional[float], zetas: Iterable[float],
               q: QuadratureSpec = DEFAULT_QUADRATURE) -> List[SweepEntry]:
    """Tabulate :func:`corollary_check` over ``zetas``.

    Invalid entries are recorded with their error message and the sweep
    continues; a :class:`TheoremViolation` still propagates.
    """
    out = []
    for z in zetas:
        try:
            out.append(SweepEntry(float(z), corollary_check(p, kappa, z, q), None))
        except TheoremViolation:
            raise
        except GaussMaxError as exc:
            out.append(SweepEntry(float(z), None, str(exc)))
    return out


def write_results_csv(results: Iterable[CorollaryResult], stream) -> None:
    stream.write("zeta,kappa,shift,attained,margin\n")
    for r in results:
        stream.write(f"{r.zeta:.17g},{r.kappa:.17g},{r.shift:.17g},"
                     f"{r.attained:.17g},{r.margin:.17g}\n")
