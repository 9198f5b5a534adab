import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavity_echo.errors import ConfigError
from cavity_echo.model import (
    CavityParams,
    EnsembleParams,
    ModeSpec,
    ModeTrain,
    OracleSettings,
    Shape,
    SimConfig,
    derive_rates,
    dump_config,
    fig1_config,
    load_config,
    mode_spectral_density,
    validate_config,
)

BASE = """
[cavity]
gamma1 = 80.0
gamma2 = 0.8

[ensemble]
coupling_strength_sq = 400.0
delta_in = 10.0
gamma21 = 1e-4

[train]
mode_count = 3
bandwidth = 1.0
"""


def test_derived_rates_by_hand():
    ens = EnsembleParams(coupling_strength_sq=400.0, delta_in=10.0, gamma21=1e-4)
    r = derive_rates(ens)
    assert r.delta_tot == pytest.approx(10.0001, rel=1e-15)
    assert r.gamma_tot == pytest.approx(800.0 / 10.0001, rel=1e-15)
    assert r.gamma_in == pytest.approx(80.0, rel=1e-15)
    assert r.m_max == pytest.approx(1e5)


def test_no_decoherence_gives_unbounded_mode_budget():
    r = derive_rates(EnsembleParams(coupling_strength_sq=1.0, delta_in=1.0))
    assert math.isinf(r.m_max)
    assert r.gamma_tot == r.gamma_in


def test_from_atoms():
    ens = EnsembleParams.from_atoms(n_atoms=100, coupling=2.0, delta_in=10.0)
    assert ens.coupling_strength_sq == 400.0


@pytest.mark.parametrize("kwargs, fragment", [
    (dict(coupling_strength_sq=1.0, delta_in=0.0), "delta_in > 0"),
    (dict(coupling_strength_sq=-1.0, delta_in=1.0), "coupling_strength_sq"),
    (dict(coupling_strength_sq=1.0, delta_in=1.0, gamma21=-1e-3), "gamma21"),
    (dict(coupling_strength_sq=1.0, delta_in=1.0, gamma21=1.0), "gamma21"),
])
def test_ensemble_invariants(kwargs, fragment):
    with pytest.raises(ConfigError) as err:
        EnsembleParams(**kwargs)
    assert any(fragment in e for e in err.value.errors)


def test_cavity_invariants():
    with pytest.raises(ConfigError):
        CavityParams(0.0)
    with pytest.raises(ConfigError):
        CavityParams(1.0, -0.1)
    with pytest.raises(ConfigError):
        CavityParams(float("nan"))


def test_uniform_train_spacing_and_flip():
    train = ModeTrain.uniform(4, 1.0)
    assert [m.arrival_time for m in train.modes] == [0.0, 5.0, 10.0, 15.0]
    assert train.flip_time == 20.0
    assert train.spacing == 5.0
    assert train.total_photons == 4.0


def test_train_rejects_close_spacing_and_early_flip():
    modes = (ModeSpec(0.0, 1.0), ModeSpec(2.0, 1.0))
    with pytest.raises(ConfigError, match="spacing"):
        ModeTrain(modes, flip_time=20.0)
    with pytest.raises(ConfigError, match="flip"):
        ModeTrain((ModeSpec(0.0, 1.0),), flip_time=0.5)
    with pytest.raises(ConfigError, match="ascending"):
        ModeTrain((ModeSpec(5.0, 1.0), ModeSpec(0.0, 1.0)), flip_time=20.0)


def test_with_mode_count_keeps_first_mode_and_spacing():
    train = ModeTrain.uniform(3, 0.5, first_arrival=1.0)
    longer = train.with_mode_count(7)
    assert len(longer) == 7
    assert longer.modes[0] == train.modes[0]
    assert longer.spacing == train.spacing
    assert longer.flip_time == pytest.approx(longer.modes[-1].arrival_time + train.spacing)
    assert len(ModeTrain.uniform(1, 2.0).with_mode_count(2)) == 2


def test_spectral_density_normalised():
    from scipy.integrate import quad

    for shape in Shape:
        mode = ModeSpec(0.0, 0.7, 2.5, shape, carrier_offset=1.3)
        total, _ = quad(lambda x: mode_spectral_density(mode, x), -math.inf, math.inf)
        assert total == pytest.approx(2.5, rel=1e-8)


def test_validate_config_generator_form():
    cfg = validate_config(BASE)
    assert len(cfg.train) == 3
    assert cfg.cavity.gamma1 == 80.0
    assert cfg.oracle == OracleSettings()


def test_validate_collects_every_error():
    bad = BASE.replace("gamma1 = 80.0", "gamma1 = -1.0").replace("delta_in = 10.0", "delta_in = 0")
    with pytest.raises(ConfigError) as err:
        validate_config(bad + "\n[oracle]\nn_bins = 2\nbogus = 1\n")
    text = "\n".join(err.value.errors)
    for fragment in ("cavity.gamma1", "ensemble.delta_in", "oracle.n_bins", "oracle.bogus"):
        assert fragment in text


def test_overrides_use_same_validation():
    cfg = validate_config(BASE, ["cavity.gamma1=40", "train.mode_count=2"])
    assert cfg.cavity.gamma1 == 40.0
    assert len(cfg.train) == 2
    with pytest.raises(ConfigError, match="unknown"):
        validate_config(BASE, ["cavity.kappa=1"])
    with pytest.raises(ConfigError, match="gamma1"):
        validate_config(BASE, ["cavity.gamma1=0"])
    with pytest.raises(ConfigError, match="form"):
        validate_config(BASE, ["cavity.gamma1"])


def test_explicit_modes_and_mode_override():
    text = dump_config(fig1_config(mode_count=2))
    cfg = validate_config(text, ["train.modes.1.mean_photons=3"])
    assert cfg.train.modes[1].mean_photons == 3.0
    with pytest.raises(ConfigError, match="does not exist"):
        validate_config(text, ["train.modes.5.bandwidth=1"])


def test_n_atoms_form():
    text = BASE.replace("coupling_strength_sq = 400.0", "n_atoms = 1e4\ncoupling = 0.2")
    cfg = validate_config(text)
    assert cfg.ensemble.coupling_strength_sq == pytest.approx(400.0)


def test_syntax_error_is_config_error():
    with pytest.raises(ConfigError, match="syntax"):
        validate_config("[cavity\n")


def test_load_config(tmp_path):
    path = tmp_path / "c.toml"
    path.write_text(BASE)
    assert load_config(path).cavity.gamma2 == 0.8


def test_fig1_config_values():
    cfg = fig1_config(mode_count=3, ratio=2.0)
    assert math.sqrt(cfg.ensemble.coupling_strength_sq) == 20.0
    assert cfg.ensemble.delta_in == 10.0
    assert cfg.cavity.gamma1 == pytest.approx(40.0)
    assert cfg.cavity.gamma2 / cfg.cavity.gamma1 == pytest.approx(0.01)
    assert cfg.train.spacing == 5.0


positive = st.floats(1e-3, 1e3, allow_nan=False)


@settings(max_examples=40, deadline=None)
@given(g1=positive, g2=st.floats(0, 10), csq=positive, delta=positive,
       m=st.integers(1, 5), bw=positive, shape=st.sampled_from(list(Shape)))
def test_dump_validate_round_trip(g1, g2, csq, delta, m, bw, shape):
    cfg = SimConfig(
        CavityParams(g1, g2),
        EnsembleParams(csq, delta, 0.5 * delta * 1e-3),
        ModeTrain.uniform(m, bw, shape=shape),
    )
    assert validate_config(dump_config(cfg)) == cfg
