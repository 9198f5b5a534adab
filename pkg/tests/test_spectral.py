import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from cavity_echo.errors import SingularEvaluationError
from cavity_echo.model import (
    CavityParams,
    EnsembleParams,
    ModeSpec,
    ModeTrain,
    Shape,
    derive_rates,
    fig1_config,
)
from cavity_echo.spectral import (
    decoherence_factors,
    echo_spectral_amplitude,
    memory_efficiency_total,
    retrieval_efficiency_mode,
    storage_efficiency_mode,
    storage_efficiency_narrowband,
    storage_efficiency_total,
    transfer_function,
    z_filter,
)


def absorbed_fraction(nu, gamma1, gamma2, csq, delta):
    """Independent route: power drained by the atoms for a drive at ``nu``.

    A Lorentzian ensemble of half-width ``delta`` responds with the
    self-energy ``csq / (delta - i nu)``; the cavity amplitude per unit
    input is ``sqrt(gamma1) / (kappa - i nu + self-energy)`` and the atoms
    absorb ``2 Re(self-energy) |a|^2``.
    """
    sigma = csq / (delta - 1j * nu)
    a = math.sqrt(gamma1) / ((gamma1 + gamma2) / 2 - 1j * nu + sigma)
    return 2.0 * sigma.real * abs(a) ** 2


@pytest.mark.parametrize("nu", [-30.0, -3.0, 0.0, 0.4, 7.0, 250.0])
@pytest.mark.parametrize("gamma1, gamma2, csq, delta", [
    (80.0, 0.8, 400.0, 10.0),
    (1.0, 0.0, 0.5, 1.0),
    (5.0, 2.0, 30.0, 0.3),
])
def test_z_filter_equals_resolvent_absorption(nu, gamma1, gamma2, csq, delta):
    z = z_filter(nu, delta, 2 * csq / delta, CavityParams(gamma1, gamma2))
    assert z == pytest.approx(absorbed_fraction(nu, gamma1, gamma2, csq, delta), rel=1e-12)


def test_z_filter_photon_budget():
    # reflected + absorbed + cavity loss = 1 at every frequency
    cav = CavityParams(3.0, 0.7)
    ens = EnsembleParams(12.0, 2.0)
    nu = np.linspace(-20, 20, 81)
    f = transfer_function(-1j * nu, cav, ens)
    reflected = np.abs(cav.gamma1 * f - 1.0) ** 2
    lost = cav.gamma1 * cav.gamma2 * np.abs(f) ** 2
    z = z_filter(nu, ens.delta_in, ens.gamma_in, cav)
    np.testing.assert_allclose(reflected + lost + z, 1.0, atol=1e-13)


def test_transfer_function_no_atoms_and_poles():
    cav = CavityParams(2.0, 0.0)
    empty = EnsembleParams(0.0, 1.0)
    assert transfer_function(0.0, cav, empty) == pytest.approx(1.0)
    with pytest.raises(SingularEvaluationError):
        transfer_function(-1.0, cav, empty)
    ens = EnsembleParams(1.0, 2.0)
    with pytest.raises(SingularEvaluationError):
        transfer_function(-2.0, cav, ens)


rate = st.floats(1e-3, 1e3)


@settings(max_examples=200, deadline=None)
@given(nu=st.floats(-1e4, 1e4), delta=rate, gamma=st.floats(0, 1e3), g1=rate, g2=st.floats(0, 1e3))
def test_z_bounded_and_even(nu, delta, gamma, g1, g2):
    cav = CavityParams(g1, g2)
    z = z_filter(nu, delta, gamma, cav)
    assert -1e-15 <= z <= 1.0 + 1e-12
    assert z == pytest.approx(z_filter(-nu, delta, gamma, cav), rel=1e-12, abs=1e-300)


def test_narrowband_matched_point_is_unity():
    ens = EnsembleParams(5.0, 2.0)
    cav = CavityParams(derive_rates(ens).gamma_tot, 0.0)
    assert abs(storage_efficiency_narrowband(cav, ens) - 1.0) <= 1e-12


def test_narrowband_by_hand():
    ens = EnsembleParams(4.0, 2.0)  # Gamma_tot = 4
    cav = CavityParams(1.0, 1.0)
    # gamma1 / (g1 + g2) * 4 r / (1 + r)^2 with r = 2
    assert storage_efficiency_narrowband(cav, ens) == pytest.approx(0.5 * 8 / 9, rel=1e-15)


def test_storage_against_independent_quad():
    cav = CavityParams(80.0, 0.8)
    ens = EnsembleParams(400.0, 10.0, 1e-4)
    mode = ModeSpec(0.0, 1.0)
    d = ens.delta_in + ens.gamma21
    lor = lambda x: 1.0 / (math.pi * (1 + x * x))
    ref = quad(lambda x: absorbed_fraction(x, 80.0, 0.8, 400.0, d) * lor(x), -np.inf, np.inf,
               epsabs=0, epsrel=1e-11, limit=500)[0]
    assert storage_efficiency_mode(mode, cav, ens) == pytest.approx(ref, rel=1e-7)


def test_narrow_mode_wide_ensemble_against_trapezoid():
    # Delta_tot = 100 gamma1, Gamma_tot = gamma1, bandwidth = 0.1 gamma1.  The
    # filter is then close to a Lorentzian of half-width gamma1, so the result
    # sits near 1/1.1 rather than the narrowband value 1.
    ens = EnsembleParams(50.0, 100.0)
    cav = CavityParams(1.0, 0.0)
    w = 1e-3 * derive_rates(ens).delta_tot
    th = np.linspace(-math.pi / 2, math.pi / 2, 200001)[1:-1]
    x = w * np.tan(th)
    sigma = 50.0 / (100.0 - 1j * x)
    z = 2 * sigma.real * np.abs(1.0 / (0.5 - 1j * x + sigma)) ** 2
    ref = np.trapezoid(z, th) / math.pi
    q = storage_efficiency_mode(ModeSpec(0.0, w), cav, ens)
    assert q == pytest.approx(ref, rel=5e-3)
    assert q == pytest.approx(1 / 1.1, abs=2e-3)
    assert storage_efficiency_narrowband(cav, ens) == pytest.approx(1.0)


def test_retrieval_at_matched_point():
    ens = EnsembleParams(0.5, 1.0)  # Gamma_in = Delta_in = 1
    cav = CavityParams(1.0, 0.0)
    mode = ModeSpec(0.0, 1e-3)
    lor = lambda x: 1e-3 / (math.pi * (1e-6 + x * x))
    ref = quad(lambda x: absorbed_fraction(x, 1.0, 0.0, 0.5, 1.0) ** 2 * lor(x), -np.inf, np.inf,
               epsabs=0, epsrel=1e-10, limit=500)[0]
    q = retrieval_efficiency_mode(mode, cav, ens)
    assert q == pytest.approx(ref, rel=1e-6)
    assert q == pytest.approx(1.0, rel=5e-3)


def test_retrieval_below_storage_when_no_decoherence():
    cav = CavityParams(3.0, 0.3)
    for bw in (0.01, 0.3, 3.0):
        for shape in Shape:
            mode = ModeSpec(0.0, bw, 1.0, shape)
            ens = EnsembleParams(20.0, 2.0)
            assert retrieval_efficiency_mode(mode, cav, ens) <= storage_efficiency_mode(mode, cav, ens)


def test_narrowband_limit():
    ens = EnsembleParams(0.5, 1.0)
    cav = CavityParams(1.0, 0.0)
    closed = storage_efficiency_narrowband(cav, ens)
    for x, tol in ((1e-3, 1e-2), (1e-4, 1e-3)):
        q = storage_efficiency_mode(ModeSpec(0.0, x * derive_rates(ens).delta_tot), cav, ens)
        assert abs(q - closed) <= tol


def test_fig1_single_mode_values():
    cfg = fig1_config()
    rep = memory_efficiency_total(cfg.train, cfg.cavity, cfg.ensemble)
    assert rep.total_memory >= 0.9
    assert rep.total_memory == pytest.approx(0.921206, abs=2e-6)
    assert rep.warnings == ()


def test_decoherence_factors_by_hand():
    train = ModeTrain.uniform(100, 1.0)
    ens = EnsembleParams(400.0, 10.0, 1e-4)
    f = decoherence_factors(train, ens)
    # tau = 99 * 5 + 5 = 500; the first mode waits 500, the last 5
    assert f[0] == pytest.approx(math.exp(-0.2), rel=1e-14)
    assert f[-1] == pytest.approx(math.exp(-0.002), rel=1e-14)
    assert np.all(np.diff(f) > 0)


def test_total_is_photon_weighted():
    modes = (ModeSpec(0.0, 1.0, 1.0), ModeSpec(10.0, 3.0, 3.0))
    train = ModeTrain(modes, flip_time=20.0)
    cav, ens = CavityParams(40.0), EnsembleParams(400.0, 10.0)
    q = [storage_efficiency_mode(m, cav, ens) for m in modes]
    assert storage_efficiency_total(train, cav, ens) == pytest.approx((q[0] + 3 * q[1]) / 4, rel=1e-14)


def test_regime_warning():
    train = ModeTrain.uniform(1, 1.0)
    rep = memory_efficiency_total(train, CavityParams(10.0), EnsembleParams(50.0, 10.0, 0.5))
    assert rep.warnings and "gamma21" in rep.warnings[0]


def test_zero_photon_train_rejected():
    train = ModeTrain.uniform(1, 1.0, mean_photons=0.0)
    with pytest.raises(ValueError):
        storage_efficiency_total(train, CavityParams(1.0), EnsembleParams(1.0, 1.0))


def test_echo_amplitude_energy_matches_retrieval():
    cfg = fig1_config()
    nu = np.linspace(-200, 200, 400001)
    amp = echo_spectral_amplitude(nu, 0, cfg.train, cfg.cavity, cfg.ensemble)
    energy = np.trapezoid(np.abs(amp) ** 2, nu)
    q = retrieval_efficiency_mode(cfg.train.modes[0], cfg.cavity, cfg.ensemble)
    assert energy == pytest.approx(q, rel=2e-3)
