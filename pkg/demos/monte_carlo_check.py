"""Compare the quadrature distribution function with seeded simulation."""

from gaussmax import EquicorrParams, dkw_band, kernel_agreement, sample_maxima
from gaussmax.montecarlo import two_sample_distance

p = EquicorrParams(50, 0.3, tuple(-1.5 + 0.03 * i for i in range(50)))
n = 200_000
r = kernel_agreement(p, n, seed=5, alpha=0.001)
print(f"k=50: worst |ecdf - F| = {r.worst_gap:.2e} at x={r.worst_x:.3f}, "
      f"band {r.epsilon:.2e}, passed={r.passed}")

wrong = EquicorrParams(50, 0.35, p.mu)
r = kernel_agreement(p, n, seed=5, alpha=0.001, kernel_params=wrong)
print(f"same sample against rho=0.35: worst gap {r.worst_gap:.2e}, passed={r.passed}")

q = EquicorrParams(3, 0.6, (0.0, -0.5, -1.0))
a, b = sample_maxima(q, 50_000, seed=1), sample_maxima(q, 50_000, seed=2)
print(f"two seeds, KS distance {two_sample_distance(a, b):.4f} "
      f"(one-sample band {dkw_band(50_000, 0.001).epsilon:.4f})")
