import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdment.errors import InvalidParams
from pdment.fourier import (
    Provenance,
    analytic_phi,
    numeric_ft,
    numeric_ft_batch,
    numeric_momentum_state,
    transform_residual,
)
from pdment.quad import integrate_line
from pdment.states import SYMWELL_NORM, Amplitude, NormalizationMode, StateId, StateModel, build_state

UNIT_GAUSS = Amplitude(func=lambda x: math.pi**-0.25 * np.exp(-0.5 * x * x),
                       deriv=lambda x: -x * math.pi**-0.25 * np.exp(-0.5 * x * x))
NORMALIZABLE = [
    StateModel(StateId.QUARTIC_CONST, A=3.5, mode=NormalizationMode.RENORMALIZED),
    StateModel(StateId.SYMWELL_CONST, lam=0.2, mode=NormalizationMode.RENORMALIZED),
    StateModel(StateId.SYMWELL_PDM, lam=0.05, mode=NormalizationMode.RENORMALIZED),
    StateModel(StateId.SYMWELL_PDM, lam=0.5, mode=NormalizationMode.RENORMALIZED),
]


def test_gaussian_transform_at_zero_and_one():
    assert numeric_ft(UNIT_GAUSS, 0.0) == pytest.approx(math.pi**-0.25, abs=1e-12)
    assert numeric_ft(UNIT_GAUSS, 1.0) == pytest.approx(math.pi**-0.25 * math.exp(-0.5), abs=1e-12)


def test_gaussian_is_its_own_transform():
    ks = np.linspace(-6.0, 6.0, 20)
    res = numeric_ft_batch(UNIT_GAUSS, ks)
    assert np.all(res.converged)
    assert np.max(np.abs(res.values - UNIT_GAUSS(ks))) < 1e-10
    # the k-derivative comes from the same sums
    assert np.max(np.abs(res.derivs - UNIT_GAUSS.derivative(ks))) < 1e-10


def test_gaussian_transform_equals_printed_phi():
    model = StateModel(StateId.QUARTIC_CONST, A=3.5)
    value = numeric_ft(build_state(model), 1.0)
    printed = analytic_phi(model)(1.0)
    assert value.real == pytest.approx(printed, abs=1e-12)
    assert abs(value.imag) < 1e-14


@pytest.mark.parametrize("model", NORMALIZABLE[1:], ids=lambda m: f"{m.id.value}")
def test_hermitian_symmetry(model):
    psi = build_state(model)
    for k in (0.5, 1.0, 2.0):
        a, b = numeric_ft(psi, k), numeric_ft(psi, -k)
        assert abs(a - np.conj(b)) < 1e-10


@pytest.mark.parametrize("model", NORMALIZABLE, ids=lambda m: f"{m.id.value}-{m.parameter}")
def test_plancherel(model):
    phi = numeric_momentum_state(build_state(model))
    assert integrate_line(phi.density).value == pytest.approx(1.0, abs=1e-6)


def test_k_window_enforced():
    with pytest.raises(InvalidParams):
        numeric_ft(UNIT_GAUSS, 50.5)
    with pytest.raises(InvalidParams):
        numeric_momentum_state(UNIT_GAUSS, k_support=60.0)
    phi = numeric_momentum_state(UNIT_GAUSS, k_support=5.0)
    assert phi(np.array([6.0]))[0] == 0
    assert phi.provenance is Provenance.NUMERIC_FT


def test_complex_amplitude_transform():
    # e^{i x} psi shifts the transform by one unit of k
    shifted = Amplitude(func=lambda x: np.exp(1j * x) * UNIT_GAUSS(x))
    value = numeric_ft(shifted, 1.0)
    assert value == pytest.approx(math.pi**-0.25, abs=1e-12)


def test_printed_phi_values_at_origin():
    assert abs(analytic_phi(StateModel(StateId.QUARTIC_CONST, A=math.pi))(0.0)) ** 2 == \
        pytest.approx(1 / math.pi)
    assert abs(analytic_phi(StateModel(StateId.QUARTIC_PDM, A=1.0))(0.0)) ** 2 == pytest.approx(0.5)
    sw = analytic_phi(StateModel(StateId.SYMWELL_CONST, lam=1.0))(0.0)
    assert sw**2 == pytest.approx(SYMWELL_NORM**0.5 * (1.174 - 0.348) ** 2, rel=1e-14)


@given(k=st.floats(-10.0, 10.0), A=st.floats(0.1, 3.0))
def test_phase_drops_out_of_pdm_density(k, A):
    phi = analytic_phi(StateModel(StateId.QUARTIC_PDM, A=A))
    assert phi.density(np.array([k]))[0] == pytest.approx(0.5 * A * A * math.exp(-k * k), rel=1e-13)


@given(k=st.floats(0.0, 10.0))
def test_momentum_densities_even(k):
    for model in (StateModel(StateId.SYMWELL_CONST, lam=0.2), StateModel(StateId.SYMWELL_PDM, lam=0.3),
                  StateModel(StateId.QUARTIC_PDM, A=1.0)):
        phi = analytic_phi(model)
        rho = phi.density(np.array([k, -k]))
        assert rho[0] >= 0 and rho[0] == pytest.approx(rho[1], rel=1e-14, abs=1e-300)


def test_renormalised_printed_phi_has_unit_norm():
    phi = analytic_phi(StateModel(StateId.SYMWELL_PDM, lam=0.5, mode=NormalizationMode.RENORMALIZED))
    assert integrate_line(phi.density).value == pytest.approx(1.0, abs=1e-10)


def test_transform_residuals():
    assert transform_residual(StateModel(StateId.QUARTIC_CONST, A=3.5)) < 1e-8
    assert transform_residual(StateModel(StateId.SYMWELL_CONST, lam=0.2)) < 1e-8
    # printed momentum forms that are not the transform of the printed position forms
    pdm = transform_residual(StateModel(StateId.QUARTIC_PDM, A=1.0))
    sym = transform_residual(StateModel(StateId.SYMWELL_PDM, lam=0.5))
    assert pdm == pytest.approx(0.962, abs=5e-3)
    assert sym > 0.01
