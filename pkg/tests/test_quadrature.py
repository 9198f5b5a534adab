import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from cavity_echo.errors import QuadratureError
from cavity_echo.model import QuadratureSettings
from cavity_echo.quadrature import adaptive_simpson, integrate_real_line


def test_polynomial_exact():
    value, err = adaptive_simpson(lambda x: x**3 - 2 * x, 0.0, 2.0)
    assert value == pytest.approx(0.0, abs=1e-13)
    value, _ = adaptive_simpson(lambda x: x**2, 0.0, 3.0)
    assert value == pytest.approx(9.0, rel=1e-14)


def test_smooth_function_against_closed_form():
    value, err = adaptive_simpson(np.sin, 0.0, math.pi)
    assert value == pytest.approx(2.0, rel=1e-9)
    assert err < 1e-7


@settings(max_examples=60, deadline=None)
@given(rel_width=st.floats(1e-4, 1e4), centre=st.floats(-50, 50))
def test_lorentzian_normalisation(rel_width, centre):
    width = rel_width * max(1.0, abs(centre))

    def f(x):
        return width / math.pi / (width**2 + (x - centre) ** 2)

    value, _ = integrate_real_line(f, max(width, abs(centre)), features=(centre,))
    assert value == pytest.approx(1.0, rel=1e-7)


def test_peak_below_sample_precision_is_reported():
    # x - 40 carries ~1e-11 relative noise at this width, so 1e-8 cannot be certified
    w, c = 1e-6, 40.0

    def f(x):
        return w / math.pi / (w**2 + (x - c) ** 2)

    with pytest.raises(QuadratureError) as err:
        integrate_real_line(f, c, features=(c,))
    assert err.value.value == pytest.approx(1.0, rel=1e-6)


@settings(max_examples=40, deadline=None)
@given(sigma=st.floats(1e-3, 1e3))
def test_gaussian_normalisation(sigma):
    def f(x):
        return np.exp(-0.5 * (x / sigma) ** 2) / (math.sqrt(2 * math.pi) * sigma)

    value, _ = integrate_real_line(f, sigma, features=(0.0, -sigma, sigma))
    assert value == pytest.approx(1.0, rel=1e-7)


def test_agrees_with_scipy_on_two_scale_integrand():
    def f(x):
        return 1.0 / (1.0 + x**2) / (1.0 + (x - 3.0) ** 2 / 0.01)

    ours, _ = integrate_real_line(f, 1.0, features=(0.0, 3.0))
    ref = quad(f, -np.inf, 3.0, epsabs=0, epsrel=1e-12)[0] + quad(f, 3.0, np.inf, epsabs=0, epsrel=1e-12)[0]
    assert ours == pytest.approx(ref, rel=1e-8)


def test_depth_limit_raises():
    tight = QuadratureSettings(rel_tolerance=1e-14, abs_tolerance=1e-300, max_refinement_depth=2)
    with pytest.raises(QuadratureError) as err:
        adaptive_simpson(lambda x: 1.0 / (1e-6 + x**2), -1.0, 1.0, tight)
    assert math.isfinite(err.value.value)
