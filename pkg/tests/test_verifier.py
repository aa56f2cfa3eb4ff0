import io
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussmax import EquicorrParams, LocationArgs, max_cdf, max_quantile, special
from gaussmax.exceptions import ParameterError
from gaussmax.maxdist import dG_dnu0
from gaussmax.verifier import (
    ProofProbe,
    default_probes,
    delta_i,
    dh_i_dt,
    dq_dnu0,
    h_i_eval,
    limit_means,
    q_ratio,
    sampford_reports,
    sweep_proof_chain,
    write_jsonl,
    z_eval,
)


# ---------------------------------------------------------------- z

def test_z_vanishes_at_k1():
    for mu in (-2.0, 0.0, 0.7):
        assert abs(z_eval(0.4, EquicorrParams(1, 0.5, (mu,)))) <= 1e-8


def test_z_positive_examples():
    assert z_eval(1 / 3, EquicorrParams(2, 0.5, (0.0, 0.0))) > 0
    assert z_eval(0.6, EquicorrParams(3, 0.3, (-0.2, -0.7, -1.5))) > 0


def test_z_matches_derivative_of_h():
    p = EquicorrParams(3, 0.4, (-0.3, -0.6, -0.9))
    zeta, d = 0.45, 1e-5

    def h(z):
        return special.std_normal_quantile(z) - max_quantile(z, p)

    fd = (h(zeta + d) - h(zeta - d)) / (2 * d)
    assert z_eval(zeta, p) == pytest.approx(fd, rel=1e-5)


def test_z_rejects_extreme_levels():
    with pytest.raises(ParameterError):
        z_eval(1e-5, EquicorrParams(2, 0.5, (0.0, 0.0)))


@pytest.mark.parametrize("far", [-20.0, -40.0])
def test_z_tends_to_zero_at_surrogate_limit(far):
    p = EquicorrParams(3, 0.5, (-0.4, far, far))
    assert abs(z_eval(0.3, p)) <= 1e-8


# ---------------------------------------------------------------- Q

def test_q_k1_is_minus_one():
    assert q_ratio(1, LocationArgs(0.3, (-0.2,)), 0.6) == pytest.approx(-1.0, abs=1e-9)


def test_q_symmetric_and_sums_to_minus_one():
    a = LocationArgs(0.0, (0.0, 0.0))
    q1, q2 = q_ratio(1, a, 0.5), q_ratio(2, a, 0.5)
    assert q1 == pytest.approx(q2, abs=1e-12)
    assert q1 + q2 == pytest.approx(-1.0, abs=1e-8)


def test_q_nearer_coordinate_carries_more_mass():
    a = LocationArgs(0.0, (0.0, -2.0))
    assert abs(q_ratio(1, a, 0.5)) > abs(q_ratio(2, a, 0.5))


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(-3, 2),
       st.lists(st.floats(-3, 1), min_size=1, max_size=4))
def test_q_sum_property(rho, nu0, nu):
    a = LocationArgs(nu0, tuple(nu))
    qs = [q_ratio(i, a, rho) for i in range(1, len(nu) + 1)]
    assert all(v < 0 for v in qs)
    assert sum(qs) == pytest.approx(-1.0, abs=1e-8)


# ---------------------------------------------------------------- dQ/dnu0

def test_dq_k1_zero():
    assert abs(dq_dnu0(1, LocationArgs(0.4, (0.0,)), 0.5)) <= 1e-8


@pytest.mark.parametrize("nu0", [-1.0, 0.0, 2.0])
def test_dq_equal_means_equality_case(nu0):
    for i in (1, 2):
        assert abs(dq_dnu0(i, LocationArgs(nu0, (0.0, 0.0)), 0.5)) <= 1e-7


def test_dq_distinct_means_positive():
    # for k = 2 the full vector is already the limit point nu^2
    assert dq_dnu0(2, LocationArgs(0.5, (0.0, -1.0)), 0.5) > 0
    assert dq_dnu0(3, LocationArgs(-0.2, (0.4, 0.0, -1.0)), 0.3) > 0


def test_dq_first_index_only_holds_at_the_limit():
    # at nu^1 a single coordinate is left and Q_1 is constant
    assert abs(dq_dnu0(1, LocationArgs(0.5, limit_means((0.0, -1.0), 1)), 0.5)) <= 1e-10
    # before the limit the inequality is not guaranteed, and here it fails
    assert dq_dnu0(1, LocationArgs(0.5, (0.0, -1.0)), 0.5) < 0


def test_dq_matches_finite_difference():
    nu, rho, h = (0.0, -1.0), 0.5, 1e-5
    fd = (q_ratio(2, LocationArgs(0.5 + h, nu), rho) - q_ratio(2, LocationArgs(0.5 - h, nu), rho)) / (2 * h)
    assert dq_dnu0(2, LocationArgs(0.5, nu), rho) == pytest.approx(fd, rel=1e-6)


def test_dq_requires_sorted_means():
    with pytest.raises(ParameterError):
        dq_dnu0(1, LocationArgs(0.0, (-1.0, 0.0)), 0.5)


# ---------------------------------------------------------------- H and dH/dt

def test_h_single_term():
    # the sum has the one term m(z_1) / m(z_1)
    assert h_i_eval(1, 0.2, (-0.5,), 0.4) == pytest.approx(1 / math.sqrt(0.6), rel=1e-15)


def test_h_equal_means():
    assert h_i_eval(2, -0.3, (0.1, 0.1, 0.1), 0.3) == pytest.approx(3 / math.sqrt(0.7), rel=1e-15)


def test_h_matches_log_derivative_definition():
    # H_i = Phi(z_i)/phi(z_i) * d/dt log prod_j Phi(z_j)
    nu, rho, t, i = (0.4, -0.1, -1.3), 0.45, 0.2, 2
    s = math.sqrt(1 - rho)

    def log_prod(tt):
        return float(np.sum(special.std_normal_logcdf((tt - np.array(nu)) / s)))

    h = 1e-6
    dlog = (log_prod(t + h) - log_prod(t - h)) / (2 * h)
    zi = (t - nu[i - 1]) / s
    assert h_i_eval(i, t, nu, rho) == pytest.approx(dlog / special.inverse_mills(zi), rel=1e-8)


def test_h_ratio_identity():
    s = math.sqrt(0.5)
    z1, z2 = 0.3 / s, 1.3 / s
    ratio = h_i_eval(1, 0.3, (0.0, -1.0), 0.5) / h_i_eval(2, 0.3, (0.0, -1.0), 0.5)
    assert ratio == pytest.approx(special.inverse_mills(z2) / special.inverse_mills(z1), rel=1e-13)


def test_dh_equal_means_zero():
    assert abs(dh_i_dt(1, 0.5, (-0.2, -0.2, -0.2), 0.4)) <= 1e-12


@pytest.mark.parametrize("t", [-2.0, 0.0, 3.0])
def test_dh_distinct_positive(t):
    assert dh_i_dt(2, t, (0.0, -1.0), 0.5) > 0
    assert dh_i_dt(3, t, (0.5, 0.0, -1.0), 0.5) > 0


def test_dh_first_index_vanishes_at_the_limit():
    assert abs(dh_i_dt(1, 0.3, limit_means((0.0, -1.0), 1), 0.5)) <= 1e-12
    assert dh_i_dt(1, 0.3, (0.0, -1.0), 0.5) < 0


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(-6, 6),
       st.lists(st.floats(-3, 1), min_size=2, max_size=5))
def test_dh_nonnegative_at_limit_property(rho, t, nu):
    nu = sorted(nu, reverse=True)
    for i in range(1, len(nu) + 1):
        assert dh_i_dt(i, t, limit_means(nu, i), rho) >= -1e-10


def test_dh_matches_finite_difference():
    nu, rho = (0.3, -0.4, -1.2), 0.35
    for i in (1, 2, 3):
        for t in np.linspace(-3, 3, 13):
            h = 1e-5
            fd = (h_i_eval(i, t + h, nu, rho) - h_i_eval(i, t - h, nu, rho)) / (2 * h)
            assert dh_i_dt(i, t, nu, rho) == pytest.approx(fd, rel=1e-6)


def test_dh_rejects_unsorted():
    with pytest.raises(ParameterError):
        dh_i_dt(1, 0.0, (-1.0, 0.0), 0.5)


# ---------------------------------------------------------------- Delta

def test_delta_equal_means_vanishes():
    for nu0 in (-1.0, 0.4):
        d = delta_i(1, LocationArgs(nu0, (0.0, 0.0)), 0.5)
        assert abs(d.derivative_form) <= 1e-8 and abs(d.double_integral_form) <= 1e-8


def test_delta_two_forms_agree():
    d = delta_i(2, LocationArgs(0.0, (0.0, -1.0)), 0.5)
    assert d.derivative_form > 0
    assert d.agree
    assert d.double_integral_form == pytest.approx(d.derivative_form, rel=1e-5)


def test_delta_k3_middle_index():
    d = delta_i(2, LocationArgs(-0.2, (0.0, -0.5, -1.0)), 0.3)
    assert d.derivative_form > 0 and d.agree


def test_delta_is_dq_times_density_squared():
    a, rho = LocationArgs(0.1, (0.2, -0.9)), 0.6
    g0 = dG_dnu0(a, rho)
    assert delta_i(2, a, rho).derivative_form == pytest.approx(dq_dnu0(2, a, rho) * g0 * g0, rel=1e-12)


# ---------------------------------------------------------------- sweep

def test_limit_means():
    assert limit_means((0.5, 0.0, -1.0), 1) == (0.5, -40.0, -40.0)
    assert limit_means((0.5, 0.0, -1.0), 3) == (0.5, 0.0, -1.0)


def test_probe_validation():
    with pytest.raises(ParameterError):
        ProofProbe(0.5, 0.0, (-1.0, 0.3), 0.0, 0.5)
    with pytest.raises(ParameterError):
        ProofProbe(1.0, 0.0, (0.0,), 0.0, 0.5)


def test_default_probes_deterministic():
    a, b = default_probes(20, seed=3), default_probes(20, seed=3)
    assert a == b
    assert all(1 <= len(p.nu) <= 4 and p.rho in (0.1, 0.3, 0.5, 0.7, 0.9) for p in a)


def test_sweep_empty():
    assert sweep_proof_chain([]) == []


def test_sweep_equal_means_equality_case():
    reports = sweep_proof_chain([ProofProbe(0.5, 0.2, (-0.3, -0.3), 0.1, 0.4)])
    assert all(r.lower_bound_ok for r in reports)
    by_name = {r.quantity: r.value for r in reports}
    # at the limit nu^1 only one coordinate is left, and every quantity vanishes
    for name in ("dq_dnu0[1]", "dh_dt[1]", "delta[1]", "dq_dnu0[2]", "dh_dt[2]", "delta[2]"):
        assert abs(by_name[name]) <= 1e-7


def test_sweep_small_random_set_clean():
    reports = sweep_proof_chain(default_probes(25, seed=99))
    assert reports and all(r.lower_bound_ok for r in reports)


def test_sampford_reports():
    reps = sampford_reports(-40, 40, 801)
    assert len(reps) == 801 and all(r.lower_bound_ok for r in reps)


def test_jsonl_fields():
    buf = io.StringIO()
    write_jsonl(sweep_proof_chain([ProofProbe(0.5, 0.0, (0.0, -1.0), 0.0, 0.5)]), buf)
    rows = [json.loads(line) for line in buf.getvalue().splitlines()]
    assert rows
    assert all(list(r) == ["quantity", "k", "rho", "nu0", "nu", "t", "zeta", "value", "ok"] for r in rows)
