"""Numerical probes of the quantities behind the single-crossing argument.

The chain is: ``z = dh/dzeta`` is positive because ``Q_i = G_i / G_0`` is
nondecreasing in ``nu0`` once the trailing means are sent to minus infinity.
That monotonicity reduces to ``Delta_i >= 0``, which follows from
``dH_i/dt >= 0``, which in turn rests on ``1 + m'(x) > 0``. Each link is
exposed as a function here and :func:`sweep_proof_chain` evaluates all of
them over a probe set, returning violations as data.

Indices ``i`` are 1-based, matching the coordinate labels ``nu_1 .. nu_k``.
Limits ``nu_j -> -inf`` for ``j > i`` are realised with
:data:`~gaussmax.maxdist.NEG_INF_SURROGATE`.
"""

import json
import math
from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Optional

import numpy as np

from . import special
from .exceptions import ParameterError
from .maxdist import (
    DEFAULT_QUADRATURE,
    NEG_INF_SURROGATE,
    EquicorrParams,
    LocationArgs,
    QuadratureSpec,
    _check_rho,
    _rule,
    kernel_integral,
    max_pdf,
    max_quantile,
)

__all__ = [
    "ProofProbe",
    "ProbeReport",
    "DeltaPair",
    "z_eval",
    "q_ratio",
    "dq_dnu0",
    "h_i_eval",
    "dh_i_dt",
    "delta_i",
    "limit_means",
    "default_probes",
    "sweep_proof_chain",
    "sampford_reports",
    "write_jsonl",
]

# tolerances of the falsification harness
Z_FLOOR = -1e-7
DQ_FLOOR = -1e-7
DH_FLOOR = -1e-10
DELTA_FLOOR = -1e-7
DELTA_RTOL = 1e-5
DELTA_ATOL = 1e-12
QSUM_TOL = 1e-8
SPREAD_STRICT = 0.1
DELTA_NODES = 128


def _index(i, k):
    if int(i) != i or not (1 <= i <= k):
        raise ParameterError(f"index i must be in 1..{k}, got {i!r}")
    return int(i)


def _sorted_nonincreasing(nu):
    nu = np.asarray(nu, dtype=float)
    if np.any(np.diff(nu) > 0):
        raise ParameterError("nu must be sorted nonincreasing")
    return nu


def z_eval(zeta: float, p: EquicorrParams, q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """``dh/dzeta = 1 / phi(Phi^{-1}(zeta)) - 1 / f_{X*}(g(zeta))``."""
    zeta = float(zeta)
    if not (1e-4 < zeta < 1.0 - 1e-4):
        raise ParameterError("zeta must lie in (1e-4, 1 - 1e-4) for a stable z")
    g = max_quantile(zeta, p, q)
    return 1.0 / special.std_normal_pdf(special.std_normal_quantile(zeta)) - 1.0 / max_pdf(g, p, q)


def q_ratio(i: int, args: LocationArgs, rho: float,
            q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """``Q_i = (dG/dnu_i) / (dG/dnu0)``; always negative."""
    _index(i, args.k)
    return (kernel_integral("Gi", args, rho, q, i).value
            / kernel_integral("G0", args, rho, q).value)


def dq_dnu0(i: int, args: LocationArgs, rho: float,
            q: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """``dQ_i/dnu0 = (G_0i G_0 - G_00 G_i) / G_0**2`` for sorted ``nu``."""
    _index(i, args.k)
    _sorted_nonincreasing(args.nu)
    g0 = kernel_integral("G0", args, rho, q).value
    gi = kernel_integral("Gi", args, rho, q, i).value
    g00 = kernel_integral("G00", args, rho, q).value
    g0i = kernel_integral("G0i", args, rho, q, i).value
    return (g0i * g0 - g00 * gi) / (g0 * g0)


def h_i_eval(i: int, t: float, nu, rho: float) -> float:
    """``H_i(t) = sum_j m(z_j) / m(z_i) / sqrt(1 - rho)``, ``z_j = (t - nu_j)/sqrt(1 - rho)``."""
    nu = np.asarray(nu, dtype=float)
    i = _index(i, nu.size)
    s = math.sqrt(1.0 - _check_rho(rho))
    z = (float(t) - nu) / s
    m = special.inverse_mills(z)
    return float(np.sum(m) / m[i - 1] / s)


def dh_i_dt(i: int, t: float, nu, rho: float) -> float:
    """Closed-form ``dH_i/dt`` for nonincreasing ``nu``.

    Each summand is ``(m(z_j)/m(z_i)) * integral_{z_j}^{z_i} (1 + m'(x)) dx``,
    evaluated as ``(nu_j - nu_i)/s + m(z_i) - m(z_j)``.
    """
    nu = _sorted_nonincreasing(nu)
    i = _index(i, nu.size)
    s = math.sqrt(1.0 - _check_rho(rho))
    z = (float(t) - nu) / s
    m = special.inverse_mills(z)
    mi = m[i - 1]
    return float(np.sum(m / mi * ((nu - nu[i - 1]) / s + mi - m)) / (s * s))


class DeltaPair(NamedTuple):
    derivative_form: float
    double_integral_form: float
    agree: bool


def _delta_double_integral(i, nu0, nu, rho, nodes, radius):
    u, wphi = _rule(nodes, radius)
    s = math.sqrt(1.0 - rho)
    pts = nu0 + math.sqrt(rho) * u
    z = (pts[:, None] - nu[None, :]) / s
    logcdf = special._logcdf(z.ravel()).reshape(z.shape)
    zi = z[:, i - 1]
    # phi(z_i) prod_{j != i} Phi(z_j)
    a = np.exp(logcdf.sum(axis=1) - logcdf[:, i - 1] - 0.5 * zi * zi - special.LOG_SQRT_2PI)
    logm = -0.5 * z * z - special.LOG_SQRT_2PI - logcdf
    with np.errstate(over="ignore", invalid="ignore"):
        H = np.exp(logm - logm[:, [i - 1]]).sum(axis=1) / s
    # where the weight underflows the point carries no mass
    H = np.where((a > 0) & np.isfinite(H), H, 0.0)
    v = wphi * a
    kernel = (u[:, None] - u[None, :]) * (H[:, None] - H[None, :])
    return float(v @ kernel @ v) / (2.0 * math.sqrt(rho * (1.0 - rho)))


def delta_i(i: int, args: LocationArgs, rho: float,
            q: QuadratureSpec = DEFAULT_QUADRATURE,
            nodes: int = DELTA_NODES) -> DeltaPair:
    """``Delta_i = G_0i G_0 - G_00 G_i`` computed two independent ways.

    ``derivative_form`` combines the four kernel integrals;
    ``double_integral_form`` evaluates the symmetrised double integral with
    the ``(s - t)(H_i(s) - H_i(t))`` kernel on a tensor Gauss-Legendre grid.
    ``agree`` is their relative agreement at 1e-5 (absolute floor 1e-12
    for the equal-means case, where both vanish).
    """
    _index(i, args.k)
    nu = _sorted_nonincreasing(args.nu)
    rho = _check_rho(rho)
    g0 = kernel_integral("G0", args, rho, q).value
    gi = kernel_integral("Gi", args, rho, q, i).value
    g00 = kernel_integral("G00", args, rho, q).value
    g0i = kernel_integral("G0i", args, rho, q, i).value
    a = g0i * g0 - g00 * gi
    b = _delta_double_integral(i, float(args.nu0), nu, rho, nodes, q.radius)
    agree = abs(a - b) <= DELTA_RTOL * max(abs(a), abs(b)) + DELTA_ATOL
    return DeltaPair(float(a), b, bool(agree))


def limit_means(nu, i: int) -> tuple:
    """``nu`` with every coordinate after the ``i``-th sent to the surrogate."""
    nu = list(map(float, nu))
    return tuple(nu[:i] + [NEG_INF_SURROGATE] * (len(nu) - i))


@dataclass(frozen=True)
class ProofProbe:
    rho: float
    nu0: float
    nu: tuple
    t: float
    zeta: float

    def __post_init__(self):
        _check_rho(self.rho)
        object.__setattr__(self, "nu", tuple(_sorted_nonincreasing(self.nu).tolist()))


@dataclass(frozen=True)
class ProbeReport:
    quantity: str
    value: float
    lower_bound_ok: bool
    context: ProofProbe

    def to_dict(self):
        c = self.context
        return {
            "quantity": self.quantity,
            "k": len(c.nu),
            "rho": c.rho,
            "nu0": c.nu0,
            "nu": list(c.nu),
            "t": c.t,
            "zeta": c.zeta,
            "value": self.value,
            "ok": self.lower_bound_ok,
        }


def default_probes(n: int = 500, seed: int = 7, k_max: int = 4) -> List[ProofProbe]:
    """Random probes: ``k <= k_max``, ``rho`` in {.1,.3,.5,.7,.9}, sorted means in [-3, 1].

    ``nu0`` is drawn within one unit of the mean range, ``t`` in [-4, 4] and
    ``zeta`` in [0.01, 0.99].
    """
    rng = np.random.default_rng(seed)
    rhos = (0.1, 0.3, 0.5, 0.7, 0.9)
    probes = []
    for _ in range(n):
        k = int(rng.integers(1, k_max + 1))
        nu = np.sort(rng.uniform(-3.0, 1.0, k))[::-1]
        probes.append(ProofProbe(
            rho=float(rng.choice(rhos)),
            nu0=float(rng.uniform(nu[-1] - 1.0, nu[0] + 1.0)),
            nu=tuple(nu.tolist()),
            t=float(rng.uniform(-4.0, 4.0)),
            zeta=float(rng.uniform(0.01, 0.99)),
        ))
    return probes


def _spread(nu):
    return max(nu) - min(nu) if nu else 0.0


def _probe_reports(pr: ProofProbe, q: QuadratureSpec) -> List[ProbeReport]:
    out = []
    k = len(pr.nu)
    add = lambda name, value, ok: out.append(ProbeReport(name, float(value), bool(ok), pr))

    z = z_eval(pr.zeta, EquicorrParams(k, pr.rho, pr.nu), q)
    add("z", z, z >= Z_FLOOR)

    full = LocationArgs(pr.nu0, pr.nu)
    qsum = sum(q_ratio(i, full, pr.rho, q) for i in range(1, k + 1))
    add("q_sum", qsum, abs(qsum + 1.0) <= QSUM_TOL)

    for i in range(1, k + 1):
        nu_i = limit_means(pr.nu, i)
        strict = _spread(pr.nu[:i]) > SPREAD_STRICT
        args = LocationArgs(pr.nu0, nu_i)

        v = dq_dnu0(i, args, pr.rho, q)
        add(f"dq_dnu0[{i}]", v, v > 0.0 if strict else v >= DQ_FLOOR)

        v = dh_i_dt(i, pr.t, nu_i, pr.rho)
        add(f"dh_dt[{i}]", v, v > 0.0 if strict else v >= DH_FLOOR)

        d = delta_i(i, args, pr.rho, q)
        add(f"delta[{i}]", d.derivative_form,
            d.derivative_form > 0.0 if strict else d.derivative_form >= DELTA_FLOOR)
        scale = max(abs(d.derivative_form), abs(d.double_integral_form))
        rel = abs(d.derivative_form - d.double_integral_form) / scale if scale > 0 else 0.0
        add(f"delta_agreement[{i}]", rel, d.agree)
    return out


def sweep_proof_chain(probes: Iterable[ProofProbe],
                      q: QuadratureSpec = DEFAULT_QUADRATURE) -> List[ProbeReport]:
    """Evaluate every proof quantity at every probe.

    Returns one :class:`ProbeReport` per (quantity, probe); a violated bound
    shows up as ``lower_bound_ok = False`` and never as an exception.
    """
    reports = []
    for pr in probes:
        reports.extend(_probe_reports(pr, q))
    return reports


def sampford_reports(lo: float = -40.0, hi: float = 40.0, n: int = 8001) -> List[ProbeReport]:
    """``1 + m'(x) > 0`` on an even grid, one report per point."""
    x = np.linspace(lo, hi, n)
    vals = 1.0 + special.inverse_mills_deriv(x)
    return [ProbeReport("one_plus_mills_deriv", float(v), bool(v > 0.0),
                        ProofProbe(rho=0.5, nu0=0.0, nu=(), t=float(xi), zeta=0.5))
            for xi, v in zip(x, vals)]


def write_jsonl(reports: Iterable[ProbeReport], stream) -> None:
    for r in reports:
        stream.write(json.dumps(r.to_dict()) + "\n")
