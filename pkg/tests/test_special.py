import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussmax import special
from gaussmax.exceptions import ParameterError

mpmath.mp.dps = 50


def mp_cdf(x):
    return float(mpmath.ncdf(x))


def mp_mills(x):
    x = mpmath.mpf(x)
    return float(mpmath.npdf(x) / mpmath.ncdf(x))


def test_pdf_closed_forms():
    assert special.std_normal_pdf(0.0) == pytest.approx(0.3989422804014327, rel=1e-15)
    assert special.std_normal_pdf(1.0) == pytest.approx(0.24197072451914337, rel=1e-15)


@pytest.mark.parametrize("x", [0.5, 3.0, 7.0])
def test_pdf_symmetric(x):
    assert special.std_normal_pdf(-x) == special.std_normal_pdf(x)


def test_pdf_deep_tail_matches_mpmath():
    for x in (10.0, 25.0, 37.5):
        assert special.std_normal_pdf(x) == pytest.approx(float(mpmath.npdf(x)), rel=1e-14)


def test_cdf_examples():
    assert special.std_normal_cdf(0.0) == 0.5
    assert special.std_normal_cdf(1.959963984540054) == pytest.approx(0.975, rel=1e-15)
    assert special.std_normal_cdf(-8.0) == pytest.approx(6.22096057427178e-16, rel=2.3e-16)


@pytest.mark.parametrize("x", [-37.0, -30.0, -20.0, -12.5, -8.0, -3.3, -1.0, 0.3, 2.0, 6.0])
def test_cdf_relative_accuracy_vs_mpmath(x):
    assert special.std_normal_cdf(x) == pytest.approx(mp_cdf(x), rel=1e-14)


@pytest.mark.parametrize("x", [1.0, 5.0, 9.0, 20.0, 37.0])
def test_sf_upper_tail_relative(x):
    assert special.std_normal_sf(x) == pytest.approx(mp_cdf(-x), rel=1e-14)


def test_cdf_vectorised_and_monotone():
    x = np.linspace(-38, 9, 5001)
    c = special.std_normal_cdf(x)
    assert c.shape == x.shape
    assert np.all(np.diff(c) >= 0)


def test_cdf_central_difference_matches_pdf():
    x = np.arange(-37.0, 8.0 + 1e-9, 0.01)
    h = 1e-5
    fd = (special.std_normal_cdf(x + h) - special.std_normal_cdf(x - h)) / (2 * h)
    pdf = special.std_normal_pdf(x)
    assert np.all(np.abs(fd - pdf) <= 1e-8 * np.maximum(1.0, pdf))


@pytest.mark.parametrize("x", [-45.0, -12.0, -2.0, 0.0, 4.0])
def test_logcdf_matches_mpmath(x):
    assert special.std_normal_logcdf(x) == pytest.approx(float(mpmath.log(mpmath.ncdf(x))), rel=1e-14)


@pytest.mark.parametrize("bad", [float("nan"), float("inf"), -float("inf")])
def test_non_finite_rejected(bad):
    for fn in (special.std_normal_pdf, special.std_normal_cdf, special.inverse_mills,
               special.inverse_mills_deriv):
        with pytest.raises(ParameterError):
            fn(bad)


def test_quantile_examples():
    assert special.std_normal_quantile(0.5) == 0.0
    assert special.std_normal_quantile(0.975) == pytest.approx(1.959963984540054, rel=1e-15)
    for p in (0.01, 0.2):
        assert special.std_normal_quantile(p) == -special.std_normal_quantile(1 - p)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5, float("nan")])
def test_quantile_rejects_outside_unit_interval(p):
    with pytest.raises(ParameterError):
        special.std_normal_quantile(p)


def test_quantile_roundtrip_log_spaced():
    lo = np.logspace(-12, math.log10(0.5), 200)
    p = np.concatenate([lo, 1.0 - lo[::-1]])
    back = special.std_normal_cdf(special.std_normal_quantile(p))
    assert np.all(np.abs(back - p) <= 1e-13 * np.maximum(p, 1 - p))


def test_quantile_matches_mpmath_deep_tail():
    # relative error in p is |x| * (relative error in x), so judge it in p-space
    for p in (1e-300, 1e-100, 1e-20, 1e-8):
        x = special.std_normal_quantile(p)
        back = mpmath.ncdf(x)
        assert abs(back - p) / p <= 1e-13


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-15, max_value=1 - 1e-15))
def test_quantile_roundtrip_property(p):
    x = special.std_normal_quantile(p)
    assert abs(special.std_normal_cdf(x) - p) <= 1e-14 * max(p, 1 - p) + 1e-300


def test_mills_examples():
    assert special.inverse_mills(0.0) == pytest.approx(0.7978845608028654, rel=1e-15)
    assert special.inverse_mills(-30.0) == pytest.approx(mp_mills(-30.0), rel=1e-14)
    assert special.inverse_mills(-30.0) == pytest.approx(-(-30.0) + 1.0 / 30.0, abs=1e-4)
    assert special.inverse_mills(5.0) == pytest.approx(1.48672e-06, rel=1e-5)
    assert special.inverse_mills(5.0) == pytest.approx(mp_mills(5.0), rel=1e-14)


def test_mills_far_left_has_no_nan():
    x = np.array([-1e5, -500.0, -40.0, -38.5])
    m = special.inverse_mills(x)
    assert np.all(np.isfinite(m))
    assert m[0] == pytest.approx(1e5, rel=1e-9)


def test_mills_deriv_examples():
    assert special.inverse_mills_deriv(0.0) == pytest.approx(-2.0 / math.pi, rel=1e-15)
    d = special.inverse_mills_deriv(-40.0)
    assert -1.0 < d < -0.999
    d = special.inverse_mills_deriv(10.0)
    assert -1e-20 < d < 0.0


def test_mills_deriv_bounds_on_grid():
    # m underflows to 0 beyond x ~ 38.5, so strict negativity is checked below that
    x = np.linspace(-40.0, 38.0, 7801)
    d = special.inverse_mills_deriv(x)
    assert np.all(d > -1.0)
    assert np.all(d < 0.0)
    full = special.inverse_mills_deriv(np.linspace(-40.0, 40.0, 8001))
    assert np.all(full > -1.0) and np.all(full <= 0.0)


def test_mills_exceeds_max_of_zero_and_minus_x():
    x = np.linspace(-40.0, 38.0, 4001)
    m = special.inverse_mills(x)
    assert np.all(m > np.maximum(0.0, -x))


def test_mills_deriv_matches_finite_difference():
    x = np.linspace(-30.0, 10.0, 801)
    h = 1e-5 * np.maximum(1.0, np.abs(x))
    fd = (special.inverse_mills(x + h) - special.inverse_mills(x - h)) / (2 * h)
    d = special.inverse_mills_deriv(x)
    assert np.all(np.abs(fd - d) <= 1e-6 * np.abs(d))


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=-40.0, max_value=38.0))
def test_mills_identity_property(x):
    m = special.inverse_mills(x)
    assert special.inverse_mills_deriv(x) == pytest.approx(-m * (x + m), rel=1e-12, abs=1e-300)
    assert -1.0 < special.inverse_mills_deriv(x) < 0.0
