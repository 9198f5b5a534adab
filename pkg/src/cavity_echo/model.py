"""Domain records, derived rates and configuration loading.

Every rate is dimensionless, measured in units of a reference bandwidth
(normally the spectral width of a signal mode); times are in units of the
inverse reference bandwidth.  The optical-depth helper in
:mod:`cavity_echo.optimize` is the only place physical units appear.
"""

from __future__ import annotations

import copy
import math
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any, Sequence

import numpy as np
try:
    import tomllib as tomli
except ModuleNotFoundError:  # Python < 3.11
    import tomli

from .errors import ConfigError

__all__ = [
    "Shape",
    "CavityParams",
    "EnsembleParams",
    "DerivedRates",
    "ModeSpec",
    "ModeTrain",
    "QuadratureSettings",
    "OracleSettings",
    "SimConfig",
    "derive_rates",
    "mode_spectral_density",
    "validate_config",
    "load_config",
    "dump_config",
    "fig1_config",
]

# relative slack for the spacing/ordering comparisons on user-supplied times
_TIME_SLACK = 1e-9


def _raise_if(errors):
    if errors:
        raise ConfigError(errors)


def _finite(x):
    return isinstance(x, (int, float, np.floating, np.integer)) and math.isfinite(x)


class Shape(str, Enum):
    LORENTZIAN = "lorentzian"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class CavityParams:
    """Coupling rate of the signal port (``gamma1``) and of the loss port (``gamma2``)."""

    gamma1: float
    gamma2: float = 0.0

    def __post_init__(self):
        _raise_if(self.violations())

    def violations(self, path="cavity"):
        errors = []
        if not (_finite(self.gamma1) and self.gamma1 > 0):
            errors.append(f"{path}.gamma1 > 0 violated (got {self.gamma1!r})")
        if not (_finite(self.gamma2) and self.gamma2 >= 0):
            errors.append(f"{path}.gamma2 >= 0 violated (got {self.gamma2!r})")
        return errors

    @property
    def total_rate(self):
        return self.gamma1 + self.gamma2


@dataclass(frozen=True)
class EnsembleParams:
    """Inhomogeneously broadened ensemble.

    ``coupling_strength_sq`` is the collective coupling N|g|^2.  Zero is
    accepted and describes an empty cavity.
    """

    coupling_strength_sq: float
    delta_in: float
    gamma21: float = 0.0

    def __post_init__(self):
        _raise_if(self.violations())

    @classmethod
    def from_atoms(cls, n_atoms, coupling, delta_in, gamma21=0.0):
        return cls(n_atoms * abs(coupling) ** 2, delta_in, gamma21)

    def violations(self, path="ensemble"):
        errors = []
        if not (_finite(self.coupling_strength_sq) and self.coupling_strength_sq >= 0):
            errors.append(
                f"{path}.coupling_strength_sq >= 0 violated (got {self.coupling_strength_sq!r})"
            )
        if not (_finite(self.delta_in) and self.delta_in > 0):
            errors.append(f"{path}.delta_in > 0 violated (got {self.delta_in!r})")
        if not (_finite(self.gamma21) and self.gamma21 >= 0):
            errors.append(f"{path}.gamma21 >= 0 violated (got {self.gamma21!r})")
        elif _finite(self.delta_in) and not self.gamma21 < self.delta_in:
            errors.append(
                f"{path}.gamma21 < {path}.delta_in violated "
                f"(got {self.gamma21!r} >= {self.delta_in!r})"
            )
        return errors

    @property
    def delta_tot(self):
        return self.delta_in + self.gamma21

    @property
    def gamma_tot(self):
        return 2.0 * self.coupling_strength_sq / self.delta_tot

    @property
    def gamma_in(self):
        return 2.0 * self.coupling_strength_sq / self.delta_in


@dataclass(frozen=True)
class DerivedRates:
    delta_tot: float
    gamma_tot: float
    gamma_in: float
    m_max: float  # math.inf when gamma21 == 0


def derive_rates(ensemble: EnsembleParams) -> DerivedRates:
    """Total linewidth, absorption rates and the mode-capacity estimate."""
    delta_tot = ensemble.delta_in + ensemble.gamma21
    gamma_tot = 2.0 * ensemble.coupling_strength_sq / delta_tot
    gamma_in = 2.0 * ensemble.coupling_strength_sq / ensemble.delta_in
    if ensemble.gamma21 > 0:
        m_max = float(math.floor(ensemble.delta_in / ensemble.gamma21))
    else:
        m_max = math.inf
    return DerivedRates(delta_tot, gamma_tot, gamma_in, m_max)


@dataclass(frozen=True)
class ModeSpec:
    """One temporal mode of the signal field.

    ``carrier_offset`` shifts the spectrum away from the cavity carrier; it is
    zero for every mode in the standard scenarios and exists so that
    asymmetric inputs can be studied.
    """

    arrival_time: float
    bandwidth: float
    mean_photons: float = 1.0
    shape: Shape = Shape.LORENTZIAN
    carrier_offset: float = 0.0

    def __post_init__(self):
        try:
            object.__setattr__(self, "shape", Shape(self.shape))
        except ValueError:
            raise ConfigError(
                [f"mode.shape must be one of {[s.value for s in Shape]} (got {self.shape!r})"]
            ) from None
        _raise_if(self.violations())

    def violations(self, path="mode"):
        errors = []
        if not _finite(self.arrival_time):
            errors.append(f"{path}.arrival_time finite violated (got {self.arrival_time!r})")
        if not (_finite(self.bandwidth) and self.bandwidth > 0):
            errors.append(f"{path}.bandwidth > 0 violated (got {self.bandwidth!r})")
        if not (_finite(self.mean_photons) and self.mean_photons >= 0):
            errors.append(f"{path}.mean_photons >= 0 violated (got {self.mean_photons!r})")
        if not _finite(self.carrier_offset):
            errors.append(f"{path}.carrier_offset finite violated (got {self.carrier_offset!r})")
        return errors


def _train_violations(arrivals, bandwidths, flip_time, spacing_factor, path="train"):
    errors = []
    if len(arrivals) == 0:
        errors.append(f"{path}.modes non-empty violated")
        return errors
    if not (_finite(spacing_factor) and spacing_factor >= 0):
        errors.append(f"{path}.spacing_factor >= 0 violated (got {spacing_factor!r})")
        spacing_factor = 0.0
    gaps = np.diff(np.asarray(arrivals, dtype=float))
    if np.any(gaps <= 0):
        errors.append(f"{path}.modes arrival_time strictly ascending violated")
    elif len(gaps):
        required = spacing_factor / min(bandwidths)
        if gaps.min() < required * (1 - _TIME_SLACK):
            errors.append(
                f"{path}.modes spacing >= spacing_factor / min bandwidth violated "
                f"(min spacing {gaps.min():.6g} < {required:.6g})"
            )
    last = int(np.argmax(arrivals))
    if not _finite(flip_time):
        errors.append(f"{path}.flip_time finite violated (got {flip_time!r})")
    else:
        earliest = arrivals[last] + 1.0 / bandwidths[last]
        if not flip_time > earliest:
            errors.append(
                f"{path}.flip_time > last arrival_time + 1/bandwidth violated "
                f"(got {flip_time!r} <= {earliest:.6g})"
            )
    return errors


@dataclass(frozen=True)
class ModeTrain:
    """Ordered signal modes followed by the detuning flip at ``flip_time``."""

    modes: tuple[ModeSpec, ...]
    flip_time: float
    spacing_factor: float = 5.0

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        _raise_if(self.violations())

    def violations(self, path="train"):
        return _train_violations(
            [m.arrival_time for m in self.modes],
            [m.bandwidth for m in self.modes],
            self.flip_time,
            self.spacing_factor,
            path,
        )

    @classmethod
    def uniform(
        cls,
        mode_count,
        bandwidth=1.0,
        *,
        spacing_factor=5.0,
        spacing=None,
        first_arrival=0.0,
        mean_photons=1.0,
        shape=Shape.LORENTZIAN,
        carrier_offset=0.0,
        flip_time=None,
    ):
        """Equally spaced identical modes; the flip follows one spacing after the last."""
        if spacing is None:
            spacing = spacing_factor / bandwidth
        modes = tuple(
            ModeSpec(first_arrival + k * spacing, bandwidth, mean_photons, shape, carrier_offset)
            for k in range(mode_count)
        )
        if flip_time is None:
            flip_time = modes[-1].arrival_time + spacing
        return cls(modes, flip_time, spacing_factor)

    def __len__(self):
        return len(self.modes)

    @property
    def total_photons(self):
        return sum(m.mean_photons for m in self.modes)

    @property
    def spacing(self):
        """Smallest gap between consecutive arrivals (``inf`` for a single mode)."""
        if len(self.modes) < 2:
            return math.inf
        return float(np.min(np.diff([m.arrival_time for m in self.modes])))

    def with_mode_count(self, mode_count):
        """Truncate or extend to ``mode_count`` copies of the first mode.

        Spacing follows the existing train (or ``spacing_factor / bandwidth``
        for a single mode) and the flip is placed one spacing after the last
        mode.
        """
        first = self.modes[0]
        spacing = self.spacing
        if not math.isfinite(spacing):
            spacing = self.spacing_factor / first.bandwidth
        return ModeTrain.uniform(
            mode_count,
            first.bandwidth,
            spacing_factor=self.spacing_factor,
            spacing=spacing,
            first_arrival=first.arrival_time,
            mean_photons=first.mean_photons,
            shape=first.shape,
            carrier_offset=first.carrier_offset,
        )


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tolerance: float = 1e-8
    abs_tolerance: float = 1e-12
    max_refinement_depth: int = 40

    def __post_init__(self):
        _raise_if(self.violations())

    def violations(self, path="quadrature"):
        errors = []
        if not (_finite(self.rel_tolerance) and self.rel_tolerance > 0):
            errors.append(f"{path}.rel_tolerance > 0 violated (got {self.rel_tolerance!r})")
        if not (_finite(self.abs_tolerance) and self.abs_tolerance > 0):
            errors.append(f"{path}.abs_tolerance > 0 violated (got {self.abs_tolerance!r})")
        if not (isinstance(self.max_refinement_depth, (int, np.integer))
                and self.max_refinement_depth >= 1):
            errors.append(
                f"{path}.max_refinement_depth >= 1 violated (got {self.max_refinement_depth!r})"
            )
        return errors


@dataclass(frozen=True)
class OracleSettings:
    """Controls for the time-domain integration.

    ``dt`` and ``t_end`` default to values derived from the configuration
    (see :func:`cavity_echo.timedomain.simulate`).  With ``error_control`` the
    run is repeated at half the step until the efficiencies change by less
    than ``step_tolerance`` (at most ``max_halvings`` times).
    """

    n_bins: int = 2001
    quantile_low: float = 1e-3
    quantile_high: float = 1.0 - 1e-3
    dt: float | None = None
    t_end: float | None = None
    error_control: bool = True
    step_tolerance: float = 1e-4
    max_halvings: int = 3
    audit_tolerance: float = 1e-6

    def __post_init__(self):
        _raise_if(self.violations())

    def violations(self, path="oracle"):
        errors = []
        n = self.n_bins
        if not (isinstance(n, (int, np.integer)) and n >= 3 and n % 2 == 1):
            errors.append(f"{path}.n_bins >= 3 and odd violated (got {n!r})")
        lo, hi = self.quantile_low, self.quantile_high
        if not (_finite(lo) and _finite(hi) and 0 < lo < 0.5 < hi < 1):
            errors.append(f"{path}.0 < quantile_low < 0.5 < quantile_high < 1 violated")
        elif not math.isclose(lo, 1 - hi, rel_tol=1e-9, abs_tol=1e-15):
            errors.append(f"{path}.quantile_low == 1 - quantile_high violated (symmetric clipping)")
        if self.dt is not None and not (_finite(self.dt) and self.dt > 0):
            errors.append(f"{path}.dt > 0 violated (got {self.dt!r})")
        if self.t_end is not None and not _finite(self.t_end):
            errors.append(f"{path}.t_end finite violated (got {self.t_end!r})")
        if not (_finite(self.step_tolerance) and self.step_tolerance > 0):
            errors.append(f"{path}.step_tolerance > 0 violated")
        if not (isinstance(self.max_halvings, (int, np.integer)) and self.max_halvings >= 0):
            errors.append(f"{path}.max_halvings >= 0 violated")
        if not (_finite(self.audit_tolerance) and self.audit_tolerance > 0):
            errors.append(f"{path}.audit_tolerance > 0 violated")
        return errors


@dataclass(frozen=True)
class SimConfig:
    cavity: CavityParams
    ensemble: EnsembleParams
    train: ModeTrain
    quadrature: QuadratureSettings = field(default_factory=QuadratureSettings)
    oracle: OracleSettings = field(default_factory=OracleSettings)

    @property
    def rates(self):
        return derive_rates(self.ensemble)

    def replace(self, **changes):
        return replace(self, **changes)


def mode_spectral_density(mode: ModeSpec, nu):
    """Photon-number spectral density of ``mode`` at detuning ``nu`` from the carrier.

    Integrates to ``mode.mean_photons`` over the real line.
    """
    x = np.asarray(nu, dtype=float) - mode.carrier_offset
    w = mode.bandwidth
    if mode.shape is Shape.LORENTZIAN:
        out = mode.mean_photons * w / (math.pi * (w * w + x * x))
    else:
        out = mode.mean_photons / (math.sqrt(2 * math.pi) * w) * np.exp(-0.5 * (x / w) ** 2)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# configuration documents

_MODE_KEYS = {"arrival_time", "bandwidth", "mean_photons", "shape", "carrier_offset"}
_TRAIN_GENERATOR_KEYS = {
    "mode_count", "bandwidth", "mean_photons", "shape", "first_arrival", "spacing",
    "carrier_offset",
}
_SCHEMA = {
    "cavity": {"gamma1", "gamma2"},
    "ensemble": {"coupling_strength_sq", "n_atoms", "coupling", "delta_in", "gamma21"},
    "train": {"modes", "flip_time", "spacing_factor"} | _TRAIN_GENERATOR_KEYS,
    "quadrature": {"rel_tolerance", "abs_tolerance", "max_refinement_depth"},
    "oracle": {
        "n_bins", "quantile_low", "quantile_high", "dt", "t_end", "error_control",
        "step_tolerance", "max_halvings", "audit_tolerance",
    },
}


def _parse_value(text):
    try:
        return tomli.loads(f"v = {text}")["v"]
    except tomli.TOMLDecodeError:
        return text


def _apply_override(doc, assignment, errors):
    if "=" not in assignment:
        errors.append(f"override {assignment!r} must have the form section.field=value")
        return
    key, raw = assignment.split("=", 1)
    parts = key.strip().split(".")
    value = _parse_value(raw.strip())
    section = parts[0]
    if section not in _SCHEMA or len(parts) < 2:
        errors.append(f"override {key!r} addresses an unknown config field")
        return
    if section == "train" and parts[1] == "modes":
        if len(parts) != 4 or not parts[2].isdigit() or parts[3] not in _MODE_KEYS:
            errors.append(f"override {key!r} addresses an unknown config field")
            return
        modes = doc.get("train", {}).get("modes")
        idx = int(parts[2])
        if not isinstance(modes, list) or idx >= len(modes):
            errors.append(f"override {key!r} addresses a mode that does not exist")
            return
        modes[idx][parts[3]] = value
        return
    if len(parts) != 2 or parts[1] not in _SCHEMA[section]:
        errors.append(f"override {key!r} addresses an unknown config field")
        return
    doc.setdefault(section, {})[parts[1]] = value


def _unknown_keys(doc, errors):
    for section, body in doc.items():
        if section not in _SCHEMA:
            errors.append(f"unknown section {section!r}")
            continue
        if not isinstance(body, Mapping):
            errors.append(f"{section} must be a table")
            continue
        for key in body:
            if key not in _SCHEMA[section]:
                errors.append(f"unknown key {section}.{key}")
        modes = body.get("modes") if section == "train" else None
        if modes is not None:
            if not isinstance(modes, list) or not all(isinstance(m, Mapping) for m in modes):
                errors.append("train.modes must be an array of tables")
                continue
            for i, m in enumerate(modes):
                for key in m:
                    if key not in _MODE_KEYS:
                        errors.append(f"unknown key train.modes[{i}].{key}")


def _number(body, key, path, errors, default=None, integer=False):
    if key not in body:
        if default is None:
            errors.append(f"{path}.{key} missing")
        return default
    v = body[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        errors.append(f"{path}.{key} must be a number (got {v!r})")
        return default
    if integer:
        if isinstance(v, float) and not v.is_integer():
            errors.append(f"{path}.{key} must be an integer (got {v!r})")
            return default
        return int(v)
    return float(v)


def _build(errors, build, old_prefix=None, new_prefix=None):
    try:
        return build()
    except ConfigError as exc:
        for msg in exc.errors:
            if old_prefix and msg.startswith(old_prefix + "."):
                msg = new_prefix + msg[len(old_prefix):]
            errors.append(msg)
        return None


def _build_train(body, errors):
    spacing_factor = _number(body, "spacing_factor", "train", errors, default=5.0)
    if "modes" in body:
        for key in _TRAIN_GENERATOR_KEYS & set(body):
            errors.append(f"train.{key} cannot be combined with explicit train.modes")
        raw_modes = body["modes"]
        modes, arrivals, bandwidths = [], [], []
        for i, m in enumerate(raw_modes):
            path = f"train.modes[{i}]"
            arrival = _number(m, "arrival_time", path, errors)
            bw = _number(m, "bandwidth", path, errors)
            n = _number(m, "mean_photons", path, errors, default=1.0)
            offset = _number(m, "carrier_offset", path, errors, default=0.0)
            shape = m.get("shape", Shape.LORENTZIAN.value)
            if arrival is None or bw is None:
                continue
            arrivals.append(arrival)
            bandwidths.append(bw)
            modes.append(
                _build(errors, lambda: ModeSpec(arrival, bw, n, shape, offset), "mode", path)
            )
        if not arrivals:
            errors.append("train.modes non-empty violated")
            return None
        default_flip = max(arrivals) + spacing_factor / min(bandwidths)
        flip = _number(body, "flip_time", "train", errors, default=default_flip)
        if None in modes or len(modes) != len(raw_modes):
            # still report the train-level invariants on the raw numbers
            if all(b > 0 for b in bandwidths):
                errors.extend(_train_violations(arrivals, bandwidths, flip, spacing_factor))
            return None
        return _build(errors, lambda: ModeTrain(tuple(modes), flip, spacing_factor))

    count = _number(body, "mode_count", "train", errors, default=1, integer=True)
    bw = _number(body, "bandwidth", "train", errors, default=1.0)
    n = _number(body, "mean_photons", "train", errors, default=1.0)
    first = _number(body, "first_arrival", "train", errors, default=0.0)
    offset = _number(body, "carrier_offset", "train", errors, default=0.0)
    shape = body.get("shape", Shape.LORENTZIAN.value)
    spacing = body.get("spacing")
    if spacing is not None:
        spacing = _number(body, "spacing", "train", errors)
    if count is None or count < 1:
        errors.append(f"train.mode_count >= 1 violated (got {count!r})")
        return None
    template = _build(errors, lambda: ModeSpec(first, bw, n, shape, offset), "mode", "train")
    if template is None:
        return None
    if spacing is None:
        spacing = spacing_factor / bw
    arrivals = [first + k * spacing for k in range(count)]
    flip = _number(body, "flip_time", "train", errors, default=arrivals[-1] + spacing)
    problems = _train_violations(arrivals, [bw] * count, flip, spacing_factor)
    if problems:
        errors.extend(problems)
        return None
    return ModeTrain.uniform(
        count, bw, spacing_factor=spacing_factor, spacing=spacing, first_arrival=first,
        mean_photons=n, shape=template.shape, carrier_offset=offset, flip_time=flip,
    )


def validate_config(source: str | Mapping[str, Any], overrides: Sequence[str] = ()) -> SimConfig:
    """Build a :class:`SimConfig` from TOML text or an already-parsed mapping.

    ``overrides`` are ``section.field=value`` assignments applied before
    validation (``train.modes.<i>.<field>`` addresses an explicit mode).
    Every violated invariant is collected; a :class:`ConfigError` carrying
    the full list is raised if there is at least one.
    """
    if isinstance(source, str):
        try:
            doc = tomli.loads(source)
        except tomli.TOMLDecodeError as exc:
            raise ConfigError([f"syntax: {exc}"]) from None
    else:
        doc = copy.deepcopy(dict(source))

    errors: list[str] = []
    for assignment in overrides:
        _apply_override(doc, assignment, errors)
    _unknown_keys(doc, errors)
    if any(not isinstance(body, Mapping) for body in doc.values()):
        raise ConfigError(errors)

    cav = doc.get("cavity", {})
    g1 = _number(cav, "gamma1", "cavity", errors)
    g2 = _number(cav, "gamma2", "cavity", errors, default=0.0)
    cavity = None
    if g1 is not None:
        cavity = _build(errors, lambda: CavityParams(g1, g2))

    ens = doc.get("ensemble", {})
    ensemble = None
    if "coupling_strength_sq" in ens and ("n_atoms" in ens or "coupling" in ens):
        errors.append("ensemble.coupling_strength_sq cannot be combined with n_atoms/coupling")
    else:
        if "coupling_strength_sq" in ens or not ("n_atoms" in ens or "coupling" in ens):
            csq = _number(ens, "coupling_strength_sq", "ensemble", errors)
        else:
            n_atoms = _number(ens, "n_atoms", "ensemble", errors)
            coupling = _number(ens, "coupling", "ensemble", errors)
            csq = None if n_atoms is None or coupling is None else n_atoms * coupling**2
        delta_in = _number(ens, "delta_in", "ensemble", errors)
        gamma21 = _number(ens, "gamma21", "ensemble", errors, default=0.0)
        if csq is not None and delta_in is not None:
            ensemble = _build(errors, lambda: EnsembleParams(csq, delta_in, gamma21))

    train = _build_train(doc.get("train", {}), errors)

    q = doc.get("quadrature", {})
    quadrature = _build(
        errors,
        lambda: QuadratureSettings(
            _number(q, "rel_tolerance", "quadrature", errors, default=1e-8),
            _number(q, "abs_tolerance", "quadrature", errors, default=1e-12),
            _number(q, "max_refinement_depth", "quadrature", errors, default=40, integer=True),
        ),
    )

    o = doc.get("oracle", {})
    error_control = o.get("error_control", True)
    if not isinstance(error_control, bool):
        errors.append(f"oracle.error_control must be a boolean (got {error_control!r})")
        error_control = True
    dt = _number(o, "dt", "oracle", errors) if "dt" in o else None
    t_end = _number(o, "t_end", "oracle", errors) if "t_end" in o else None
    oracle = _build(
        errors,
        lambda: OracleSettings(
            n_bins=_number(o, "n_bins", "oracle", errors, default=2001, integer=True),
            quantile_low=_number(o, "quantile_low", "oracle", errors, default=1e-3),
            quantile_high=_number(o, "quantile_high", "oracle", errors, default=1 - 1e-3),
            dt=dt,
            t_end=t_end,
            error_control=error_control,
            step_tolerance=_number(o, "step_tolerance", "oracle", errors, default=1e-4),
            max_halvings=_number(o, "max_halvings", "oracle", errors, default=3, integer=True),
            audit_tolerance=_number(o, "audit_tolerance", "oracle", errors, default=1e-6),
        ),
    )

    if errors:
        raise ConfigError(errors)
    return SimConfig(cavity, ensemble, train, quadrature, oracle)


def load_config(path, overrides: Sequence[str] = ()) -> SimConfig:
    return validate_config(Path(path).read_text(encoding="utf-8"), overrides)


def _toml_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Enum):
        return f'"{v.value}"'
    if isinstance(v, str):
        return f'"{v}"'
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def dump_config(config: SimConfig) -> str:
    """Serialise ``config`` as TOML that :func:`validate_config` reads back unchanged."""
    lines = [
        "[cavity]",
        f"gamma1 = {_toml_value(config.cavity.gamma1)}",
        f"gamma2 = {_toml_value(config.cavity.gamma2)}",
        "",
        "[ensemble]",
        f"coupling_strength_sq = {_toml_value(config.ensemble.coupling_strength_sq)}",
        f"delta_in = {_toml_value(config.ensemble.delta_in)}",
        f"gamma21 = {_toml_value(config.ensemble.gamma21)}",
        "",
        "[train]",
        f"flip_time = {_toml_value(config.train.flip_time)}",
        f"spacing_factor = {_toml_value(config.train.spacing_factor)}",
    ]
    for m in config.train.modes:
        lines += [
            "",
            "[[train.modes]]",
            f"arrival_time = {_toml_value(m.arrival_time)}",
            f"bandwidth = {_toml_value(m.bandwidth)}",
            f"mean_photons = {_toml_value(m.mean_photons)}",
            f"shape = {_toml_value(m.shape)}",
            f"carrier_offset = {_toml_value(m.carrier_offset)}",
        ]
    q, o = config.quadrature, config.oracle
    lines += [
        "",
        "[quadrature]",
        f"rel_tolerance = {_toml_value(q.rel_tolerance)}",
        f"abs_tolerance = {_toml_value(q.abs_tolerance)}",
        f"max_refinement_depth = {_toml_value(q.max_refinement_depth)}",
        "",
        "[oracle]",
        f"n_bins = {_toml_value(o.n_bins)}",
        f"quantile_low = {_toml_value(o.quantile_low)}",
        f"quantile_high = {_toml_value(o.quantile_high)}",
    ]
    if o.dt is not None:
        lines.append(f"dt = {_toml_value(o.dt)}")
    if o.t_end is not None:
        lines.append(f"t_end = {_toml_value(o.t_end)}")
    lines += [
        f"error_control = {_toml_value(o.error_control)}",
        f"step_tolerance = {_toml_value(o.step_tolerance)}",
        f"max_halvings = {_toml_value(o.max_halvings)}",
        f"audit_tolerance = {_toml_value(o.audit_tolerance)}",
    ]
    return "\n".join(lines) + "\n"


def fig1_config(mode_count=1, ratio=1.0, gamma2_ratio=0.01, **oracle_overrides) -> SimConfig:
    """The reference ``fig1`` scenario.

    sqrt(N)|g| = 20, Delta_in = 10, gamma21 = 1e-4, unit-bandwidth Lorentzian
    modes with one photon each spaced by 5, gamma2 = 0.01 gamma1 and
    gamma1 = Gamma_in / ratio.
    """
    ensemble = EnsembleParams(coupling_strength_sq=400.0, delta_in=10.0, gamma21=1e-4)
    gamma1 = ensemble.gamma_in / ratio
    cavity = CavityParams(gamma1, gamma2_ratio * gamma1)
    train = ModeTrain.uniform(mode_count, 1.0, spacing_factor=5.0)
    return SimConfig(cavity, ensemble, train, oracle=OracleSettings(**oracle_overrides))
