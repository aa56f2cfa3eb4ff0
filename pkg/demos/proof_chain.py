"""Evaluate the inequalities behind the single-crossing theorem at random points."""

from collections import defaultdict

from gaussmax import verifier

probes = verifier.default_probes(60, seed=11, k_max=4)
reports = verifier.sweep_proof_chain(probes) + verifier.sampford_reports()
summary = defaultdict(lambda: [0, float("inf"), 0])
for r in reports:
    s = summary[r.quantity.split("[")[0]]
    s[0] += 1
    s[1] = min(s[1], r.value)
    s[2] += not r.lower_bound_ok

print(f"{'quantity':<22}{'count':>7}{'minimum':>16}{'violations':>12}")
for name, (n, lo, bad) in summary.items():
    print(f"{name:<22}{n:>7}{lo:>16.4e}{bad:>12}")
