import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdment.errors import NonFiniteIntegrand
from pdment.quad import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    integrate_box,
    integrate_interval,
    integrate_line,
    level_nodes,
)
from pdment.states import StateId, StateModel, build_state

_trapezoid = getattr(np, "trapezoid", None) or np.trapz

# scipy.integrate.quad on [-10, 10], epsabs 1e-14
LOG_GAUSS_BOX = 0.5866187465823504


def test_gaussian_line():
    res = integrate_line(lambda x: np.exp(-x * x))
    assert res.converged
    assert res.value == pytest.approx(math.sqrt(math.pi), abs=1e-14)
    assert res.error_estimate <= max(DEFAULT_CONFIG.abs_tol, DEFAULT_CONFIG.rel_tol * res.value)


def test_odd_integrand_vanishes():
    assert abs(integrate_line(lambda x: x * np.exp(-x * x)).value) < DEFAULT_CONFIG.abs_tol


def test_scaled_gaussian_density():
    A = 3.5
    res = integrate_line(lambda x: (A / math.pi) * np.exp(-A * x * x))
    assert res.value == pytest.approx(math.sqrt(A / math.pi), abs=1e-12)
    # plain trapezoid on a fine grid as an independent check
    x = np.linspace(-12, 12, 200_001)
    assert res.value == pytest.approx(_trapezoid((A / math.pi) * np.exp(-A * x * x), x), abs=1e-10)


def test_box_gaussian_has_no_tail():
    res = integrate_box(lambda x: np.exp(-x * x), 10.0)
    assert res.value == pytest.approx(math.sqrt(math.pi), abs=1e-12)
    assert res.tail_fraction < 1e-15


def test_box_log_divergent_tail():
    res = integrate_box(lambda x: 1.0 / np.sqrt(1.0 + x * x), 10.0)
    assert res.value == pytest.approx(2.0 * math.asinh(10.0), abs=1e-10)
    assert res.tail_fraction > 0.1


def test_box_log_gaussian():
    res = integrate_box(lambda x: np.exp(-x * x) * np.log1p(x * x), 10.0)
    assert res.converged
    assert res.value == pytest.approx(LOG_GAUSS_BOX, abs=1e-12)


def test_non_finite_integrand_raises():
    def f(x):
        return np.where(x == 0, np.nan, np.exp(-x * x))

    with pytest.raises(NonFiniteIntegrand) as info:
        integrate_line(f)
    assert info.value.x == 0.0


def test_not_converged_is_flagged_not_raised():
    cfg = QuadratureConfig(abs_tol=1e-300, rel_tol=1e-300, max_refinement_level=4)
    res = integrate_line(lambda x: np.exp(-x * x), cfg)
    assert not res.converged
    assert res.value == pytest.approx(math.sqrt(math.pi), rel=1e-8)


@pytest.mark.parametrize("kw", [
    {"abs_tol": 0}, {"rel_tol": -1}, {"max_refinement_level": 0}, {"box_halfwidth_L": 0},
    {"max_refinement_level": 2.5},
])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        QuadratureConfig(**kw)


def test_nodes_are_nested_and_read_only():
    x0, _ = level_nodes("line", 0)
    x1, _ = level_nodes("line", 1)
    assert np.intersect1d(x0, x1).size == 0
    with pytest.raises(ValueError):
        x1[0] = 1.0


def test_interval_rejects_bad_L():
    with pytest.raises(ValueError):
        integrate_interval(np.exp, 0.0)


widths = st.floats(min_value=0.2, max_value=5.0)
coeffs = st.floats(min_value=-3.0, max_value=3.0)


@given(a=widths, b=widths, alpha=coeffs, beta=coeffs, shift=st.floats(-2, 2))
def test_linearity(a, b, alpha, beta, shift):
    f = lambda x: np.exp(-a * x * x)
    g = lambda x: np.exp(-b * (x - shift) ** 2)
    lhs = integrate_line(lambda x: alpha * f(x) + beta * g(x)).value
    rhs = alpha * integrate_line(f).value + beta * integrate_line(g).value
    assert abs(lhs - rhs) < 10 * DEFAULT_CONFIG.abs_tol


@given(a=widths, p=st.integers(0, 3), c=st.floats(0.1, 3.0))
def test_odd_symmetry(a, p, c):
    f = lambda x: x ** (2 * p + 1) * np.exp(-a * x * x) / (1.0 + c * x * x)
    assert abs(integrate_line(f).value) < DEFAULT_CONFIG.abs_tol


@given(L=st.floats(min_value=8.0, max_value=60.0))
def test_box_consistency(L):
    f = lambda x: np.exp(-x * x)
    assert abs(integrate_box(f, L).value - integrate_line(f).value) < 1e-10


def test_monotone_regularisation_of_quartic_pdm_density():
    psi = build_state(StateModel(StateId.QUARTIC_PDM, A=1.0))
    values = [integrate_box(psi.density, L).value for L in (10.0, 20.0, 40.0)]
    assert values[0] < values[1] < values[2]
