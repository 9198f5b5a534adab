"""Frequency-domain efficiencies of the cavity photon-echo memory.

Storage of a mode is the overlap of its normalised spectrum with the
single-pass absorption filter ``Z``; retrieval applies the filter twice.
Storage uses the total linewidth and absorption rate (inhomogeneous plus
homogeneous), retrieval the inhomogeneous ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import SingularEvaluationError
from .model import (
    CavityParams,
    EnsembleParams,
    ModeSpec,
    ModeTrain,
    QuadratureSettings,
    derive_rates,
    mode_spectral_density,
)
from .quadrature import integrate_real_line

__all__ = [
    "EfficiencyReport",
    "transfer_function",
    "z_filter",
    "storage_efficiency_mode",
    "storage_efficiency_narrowband",
    "storage_efficiency_total",
    "retrieval_efficiency_mode",
    "memory_efficiency_total",
    "decoherence_factors",
    "echo_spectral_amplitude",
]

# retrieval assumes gamma21 * (1 / bandwidth) << 1; flag when this exceeds
REGIME_THRESHOLD = 0.1


@dataclass(frozen=True)
class EfficiencyReport:
    per_mode_storage: tuple[float, ...]
    per_mode_retrieval: tuple[float, ...]
    per_mode_decoherence_factor: tuple[float, ...]
    total_storage: float
    total_memory: float
    mean_photons: tuple[float, ...] = ()
    warnings: tuple[str, ...] = field(default=())


def transfer_function(p, cavity: CavityParams, ensemble: EnsembleParams, abs_tolerance=1e-12):
    """Cavity response ``f(p)`` to a drive at Laplace variable ``p``.

    Raises :class:`SingularEvaluationError` within ``abs_tolerance`` of a pole.
    """
    p = np.asarray(p, dtype=complex)
    atoms_den = p + ensemble.delta_in + ensemble.gamma21
    if ensemble.coupling_strength_sq == 0:
        den = p + 0.5 * cavity.total_rate
    else:
        if np.any(np.abs(atoms_den) < abs_tolerance):
            raise SingularEvaluationError("p coincides with the atomic pole of f(p)")
        den = p + 0.5 * cavity.total_rate + ensemble.coupling_strength_sq / atoms_den
    if np.any(np.abs(den) < abs_tolerance):
        raise SingularEvaluationError(f"|denominator of f(p)| below {abs_tolerance:g}")
    out = 1.0 / den
    return complex(out) if out.ndim == 0 else out


def z_filter(nu, delta, gamma_abs, cavity: CavityParams):
    """Fraction of the input at detuning ``nu`` absorbed by the ensemble.

    ``delta`` is the atomic linewidth and ``gamma_abs`` the absorption rate
    the ensemble presents to the cavity.
    """
    nu = np.asarray(nu, dtype=float)
    x = nu / delta
    lorentz = 1.0 / (1.0 + x * x)
    # Gamma / (1 - i x) written out to keep the real and imaginary parts explicit
    den_re = cavity.total_rate + gamma_abs * lorentz
    den_im = gamma_abs * x * lorentz - 2.0 * nu
    out = lorentz * 4.0 * cavity.gamma1 * gamma_abs / (den_re * den_re + den_im * den_im)
    return out if out.ndim else float(out)


def _normalised_density(mode, nu):
    unit = ModeSpec(0.0, mode.bandwidth, 1.0, mode.shape, mode.carrier_offset)
    return mode_spectral_density(unit, nu)


def _features(mode):
    c, w = mode.carrier_offset, mode.bandwidth
    return (c, c - w, c + w, c - 10 * w, c + 10 * w)


@lru_cache(maxsize=4096)
def _filtered_overlap(power, delta, gamma_abs, cavity, shape, bandwidth, offset, quad):
    mode = ModeSpec(0.0, bandwidth, 1.0, shape, offset)
    if gamma_abs == 0:
        return 0.0

    def integrand(nu):
        return z_filter(nu, delta, gamma_abs, cavity) ** power * _normalised_density(mode, nu)

    scale = max(delta, cavity.total_rate + gamma_abs, bandwidth)
    value, _ = integrate_real_line(integrand, scale, quad, features=_features(mode))
    return min(max(value, 0.0), 1.0)


def storage_efficiency_mode(mode: ModeSpec, cavity: CavityParams, ensemble: EnsembleParams,
                            quad: QuadratureSettings = QuadratureSettings()) -> float:
    """Fraction of mode ``mode`` transferred into the atoms."""
    rates = derive_rates(ensemble)
    return _filtered_overlap(
        1, rates.delta_tot, rates.gamma_tot, cavity, mode.shape, mode.bandwidth,
        mode.carrier_offset, quad,
    )


def retrieval_efficiency_mode(mode: ModeSpec, cavity: CavityParams, ensemble: EnsembleParams,
                              quad: QuadratureSettings = QuadratureSettings()) -> float:
    """Storage-plus-echo efficiency of ``mode`` before storage-time decoherence."""
    rates = derive_rates(ensemble)
    return _filtered_overlap(
        2, ensemble.delta_in, rates.gamma_in, cavity, mode.shape, mode.bandwidth,
        mode.carrier_offset, quad,
    )


def storage_efficiency_narrowband(cavity: CavityParams, ensemble: EnsembleParams) -> float:
    """Closed-form storage efficiency for a mode much narrower than the atomic line."""
    g = cavity.total_rate
    r = derive_rates(ensemble).gamma_tot / g
    return cavity.gamma1 / g * 4.0 * r / (1.0 + r) ** 2


def _weighted_mean(values, weights):
    weights = np.asarray(weights, dtype=float)
    total = weights.sum()
    if total <= 0:
        raise ValueError("the mode train carries no photons")
    return float(np.dot(values, weights) / total)


def storage_efficiency_total(train: ModeTrain, cavity: CavityParams, ensemble: EnsembleParams,
                             quad: QuadratureSettings = QuadratureSettings()) -> float:
    q = [storage_efficiency_mode(m, cavity, ensemble, quad) for m in train.modes]
    return _weighted_mean(q, [m.mean_photons for m in train.modes])


def decoherence_factors(train: ModeTrain, ensemble: EnsembleParams):
    """``exp(-4 gamma21 (tau - tau_k))`` for every mode of ``train``."""
    waits = np.array([train.flip_time - m.arrival_time for m in train.modes])
    return np.exp(-4.0 * ensemble.gamma21 * waits)


def memory_efficiency_total(train: ModeTrain, cavity: CavityParams, ensemble: EnsembleParams,
                            quad: QuadratureSettings = QuadratureSettings()) -> EfficiencyReport:
    """Per-mode and total storage and retrieval efficiencies of ``train``."""
    storage = [storage_efficiency_mode(m, cavity, ensemble, quad) for m in train.modes]
    retrieval = [retrieval_efficiency_mode(m, cavity, ensemble, quad) for m in train.modes]
    factors = decoherence_factors(train, ensemble)
    n = np.array([m.mean_photons for m in train.modes])
    warnings = []
    for k, m in enumerate(train.modes):
        if ensemble.gamma21 / m.bandwidth > REGIME_THRESHOLD:
            warnings.append(
                f"mode {k}: gamma21 / bandwidth = {ensemble.gamma21 / m.bandwidth:.3g} is not small; "
                "retrieval efficiency is outside its validity regime"
            )
    return EfficiencyReport(
        per_mode_storage=tuple(storage),
        per_mode_retrieval=tuple(retrieval),
        per_mode_decoherence_factor=tuple(float(f) for f in factors),
        total_storage=_weighted_mean(storage, n),
        total_memory=_weighted_mean(factors * np.asarray(retrieval), n),
        mean_photons=tuple(float(x) for x in n),
        warnings=tuple(warnings),
    )


def echo_spectral_amplitude(nu, k: int, train: ModeTrain, cavity: CavityParams,
                            ensemble: EnsembleParams):
    """Spectral amplitude of the echo of mode ``k`` at input detuning ``nu``.

    The input amplitude is the square root of the mode's spectral density
    (zero spectral phase).  The echo carries the component at ``nu`` to
    ``-nu`` (time reversal) and the phase ``exp(i nu (tau_k - 2 tau))``
    places it at ``t = 2 tau - tau_k``.
    """
    mode = train.modes[k]
    rates = derive_rates(ensemble)
    nu = np.asarray(nu, dtype=float)
    amp = np.sqrt(mode_spectral_density(mode, nu))
    z = z_filter(nu, ensemble.delta_in, rates.gamma_in, cavity)
    out = -z * amp * np.exp(1j * nu * (mode.arrival_time - 2.0 * train.flip_time))
    return complex(out) if out.ndim == 0 else out
