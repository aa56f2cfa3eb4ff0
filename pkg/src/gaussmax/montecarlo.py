"""Seeded Monte Carlo oracle for the distribution of the maximum.

Draws follow the random-effects construction
``X_i = mu_i + sqrt(rho) Y_0 + sqrt(1 - rho) Y_i`` with independent standard
normal ``Y_0..Y_k``. The normal for coordinate ``c`` of draw ``d`` is a pure
function of ``(seed, d, c)``: Philox4x32-10 keyed by the seed, counter
``(d mod 2**32, d div 2**32, c div 2, 0)``, each block yielding two uniforms,
mapped through the package's own normal quantile. Any draw range can
therefore be produced independently and the result does not depend on how
the work is chunked.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import special
from ._philox import uniform_pair
from .exceptions import ParameterError
from .maxdist import DEFAULT_QUADRATURE, EquicorrParams, QuadratureSpec, max_cdf

__all__ = [
    "McSample",
    "DkwBand",
    "AgreementReport",
    "draw_maxima",
    "sample_maxima",
    "ecdf_at",
    "dkw_band",
    "default_mc_grid",
    "kernel_agreement",
    "two_sample_distance",
    "write_sample_csv",
]

_U32 = 0xFFFFFFFF
_CHUNK = 1 << 15


def _check_seed(seed):
    if int(seed) != seed or not (0 <= seed < 2**64):
        raise ParameterError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def _normals(idx, n_coords, seed):
    """Standard normals of shape (len(idx), n_coords) for draw indices ``idx``."""
    blocks = np.arange((n_coords + 1) // 2, dtype=np.uint64)
    d = idx.astype(np.uint64)[:, None]
    ua, ub = uniform_pair(d & np.uint64(_U32), d >> np.uint64(32), blocks[None, :], 0,
                          seed & _U32, seed >> 32)
    u = np.empty((idx.size, 2 * blocks.size))
    u[:, 0::2] = ua
    u[:, 1::2] = ub
    return special.std_normal_quantile(u[:, :n_coords])


def draw_maxima(p: EquicorrParams, n: int, seed: int, start: int = 0) -> np.ndarray:
    """Realised maxima for draws ``start .. start + n - 1``, in draw order."""
    if int(n) != n or n < 1:
        raise ParameterError("n must be a positive integer")
    seed = _check_seed(seed)
    mu = p.mu_array
    a, b = math.sqrt(p.rho), math.sqrt(1.0 - p.rho)
    out = np.empty(int(n))
    for lo in range(0, int(n), _CHUNK):
        idx = np.arange(start + lo, start + min(lo + _CHUNK, int(n)), dtype=np.int64)
        y = _normals(idx, p.k + 1, seed)
        out[lo:lo + idx.size] = (mu[None, :] + b * y[:, 1:]).max(axis=1) + a * y[:, 0]
    return out


@dataclass(frozen=True, eq=False)
class McSample:
    seed: int
    n: int
    maxima: np.ndarray
    params: EquicorrParams


def sample_maxima(p: EquicorrParams, n: int, seed: int) -> McSample:
    """Draw ``n`` maxima and keep them sorted for fast ECDF lookup."""
    x = np.sort(draw_maxima(p, n, seed))
    x.setflags(write=False)
    return McSample(_check_seed(seed), int(n), x, p)


def ecdf_at(s: McSample, x):
    """Fraction of sampled maxima ``<= x``; vectorised over ``x``."""
    counts = np.searchsorted(s.maxima, np.asarray(x, dtype=float), side="right")
    out = counts / s.n
    return float(out) if np.ndim(x) == 0 else out


@dataclass(frozen=True)
class DkwBand:
    epsilon: float
    alpha: float


def dkw_band(n: int, alpha: float) -> DkwBand:
    """Dvoretzky-Kiefer-Wolfowitz half-width ``sqrt(log(2/alpha) / (2n))``."""
    if not (0.0 < alpha < 1.0):
        raise ParameterError("alpha must lie in (0, 1)")
    if n < 1:
        raise ParameterError("n must be positive")
    return DkwBand(math.sqrt(math.log(2.0 / alpha) / (2.0 * n)), float(alpha))


class AgreementReport(NamedTuple):
    worst_gap: float
    worst_x: float
    epsilon: float
    passed: bool


def default_mc_grid(p: EquicorrParams, n_points: int = 50) -> np.ndarray:
    mu = p.mu_array
    return np.linspace(mu.min() - 3.0, mu.max() + 3.0 + math.sqrt(2.0 * math.log(p.k)), n_points)


def kernel_agreement(p: EquicorrParams, n: int, seed: int, grid=None, alpha: float = 0.001,
                     q: QuadratureSpec = DEFAULT_QUADRATURE,
                     kernel_params: Optional[EquicorrParams] = None,
                     sample: Optional[McSample] = None) -> AgreementReport:
    """Compare the empirical CDF with ``max_cdf`` over ``grid`` inside a DKW band.

    ``kernel_params`` lets the quadrature side use different parameters
    from the sampler, which is how the harness checks that it can fail.
    """
    if sample is None:
        sample = sample_maxima(p, n, seed)
    if grid is None:
        grid = default_mc_grid(p)
    grid = np.asarray(grid, dtype=float)
    band = dkw_band(sample.n, alpha)
    gaps = np.abs(ecdf_at(sample, grid) - max_cdf(grid, kernel_params or p, q))
    j = int(np.argmax(gaps))
    return AgreementReport(float(gaps[j]), float(grid[j]), band.epsilon,
                           bool(gaps[j] <= band.epsilon))


def two_sample_distance(a: McSample, b: McSample) -> float:
    """Kolmogorov-Smirnov distance between two samples."""
    pts = np.concatenate([a.maxima, b.maxima])
    return float(np.max(np.abs(ecdf_at(a, pts) - ecdf_at(b, pts))))


def write_sample_csv(maxima, stream) -> None:
    """CSV with header ``index,x_star`` and one row per draw."""
    stream.write("index,x_star\n")
    for i, v in enumerate(np.asarray(maxima, dtype=float)):
        stream.write(f"{i},{v:.17g}\n")
