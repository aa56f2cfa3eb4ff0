import math

import numpy as np
import pytest

from gaussmax import EquicorrParams


def orthant(rho):
    """P(X1 <= 0, X2 <= 0) for a standard bivariate normal with correlation rho."""
    return 0.25 + math.asin(rho) / (2.0 * math.pi)


def random_params(n, seed, k_max=6, rho_lo=0.05, rho_hi=0.95, mu_lo=-3.0, mu_hi=1.0):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        k = int(rng.integers(1, k_max + 1))
        rho = float(rng.uniform(rho_lo, rho_hi))
        mu = rng.uniform(mu_lo, mu_hi, size=k)
        out.append(EquicorrParams(k, rho, tuple(float(m) for m in mu)))
    return out


@pytest.fixture
def crossing_params():
    return EquicorrParams(2, 0.5, (-0.5, -0.5))


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Collect one summary line per acceptance criterion for the terminal report."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def log(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append(line)
        print(line)

    return log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
