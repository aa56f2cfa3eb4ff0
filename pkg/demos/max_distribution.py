"""Distribution of the maximum of an equicorrelated Gaussian vector.

Prints the bivariate orthant check, a few quantiles and a comparison of the
maximum's tails with its coordinates.
"""

import math

import numpy as np

from gaussmax import EquicorrParams, max_cdf, max_pdf, max_quantile, std_normal_cdf

for rho in (0.2, 0.5, 0.8):
    p = EquicorrParams(2, rho, (0.0, 0.0))
    exact = 0.25 + math.asin(rho) / (2 * math.pi)
    print(f"rho={rho}: P(X1<=0, X2<=0) = {max_cdf(0.0, p):.15f}  (closed form {exact:.15f})")

p = EquicorrParams(4, 0.3, (-0.5, -0.2, -1.0, -0.8))
print("\nquantiles of the maximum for", p)
zetas = np.array([0.01, 0.25, 0.5, 0.75, 0.99])
for z, x in zip(zetas, max_quantile(zetas, p)):
    print(f"  zeta={z:<5} x={x: .6f}  density={max_pdf(x, p):.6f}")

print("\nF(x) against the smallest coordinate bound min_i Phi(x - mu_i)")
for x in (-2.0, 0.0, 2.0):
    bound = min(std_normal_cdf(x - m) for m in p.mu)
    print(f"  x={x: .1f}  F={max_cdf(x, p):.6f}  bound={bound:.6f}")
