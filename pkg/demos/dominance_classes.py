"""Classify how the maximum compares with a standard normal.

Either one distribution function lies above the other everywhere, or the
two cross exactly once; the crossing is located and the density there is
compared.
"""

from gaussmax import EquicorrParams, count_sign_changes, default_grid, find_crossing, h_eval

cases = [
    EquicorrParams(2, 0.5, (0.5, -1.0)),
    EquicorrParams(1, 0.5, (-1.0,)),
    EquicorrParams(1, 0.5, (0.0,)),
    EquicorrParams(4, 0.3, (0.0, 0.0, 0.0, 0.0)),
    EquicorrParams(2, 0.5, (-0.5, -0.5)),
    EquicorrParams(3, 0.5, (-0.05, -0.05, -0.05)),
]
for p in cases:
    v = find_crossing(p)
    line = f"{str(p.mu):<28} rho={p.rho}: {v.kind.value}"
    if v.x0 is not None:
        line += f"  x0={v.x0:.6f}  log f/phi at x0={v.log_pdf_ratio:.3e}"
    print(line)

p = cases[4]
print("\nsign changes of F - Phi on a 1601-point grid:", count_sign_changes(p, default_grid(p)))
print("h(zeta) = Phi^-1(zeta) - quantile(zeta) increases:")
for z in (0.05, 0.25, 0.5, 0.75, 0.95):
    print(f"  h({z}) = {h_eval(z, p): .6f}")
