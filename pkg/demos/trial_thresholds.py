"""Decision thresholds for a design with several treatments against one control.

If every contrast is below zero with probability at least kappa, then
lowering the threshold from 0 to Phi^-1(zeta) - Phi^-1(kappa) keeps the joint
probability above zeta.
"""

from gaussmax import EquicorrParams, calibrate_kappa, zeta_sweep

p = EquicorrParams(3, 0.5, (-1.2, -1.0, -1.5))
kappa = calibrate_kappa(p)
print(f"P(all X_i < 0) = {kappa:.6f}")
print(f"{'zeta':>8}{'shift':>12}{'attained':>12}{'margin':>12}")
for e in zeta_sweep(p, kappa, [0.9, 0.95, 0.99, 0.999]):
    r = e.result
    print(f"{r.zeta:>8}{r.shift:>12.6f}{r.attained:>12.6f}{r.margin:>12.2e}")

print("\nwith a more conservative kappa = 0.5:")
for e in zeta_sweep(p, 0.5, [0.4, 0.9]):
    print(f"  zeta={e.zeta}: " + (e.error or f"margin {e.result.margin:.3e}"))
