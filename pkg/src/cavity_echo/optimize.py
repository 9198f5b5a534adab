"""Parameter scans and impedance-matching search.

The reference ``fig1`` surface is a grid over (mode count, Gamma_in / gamma1).  Every
mode of a uniform train has the same spectrum, so each grid column needs
one quadrature and the mode count only enters through the decoherence
factors.  Work is therefore split by ratio.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import constants, optimize

from .errors import NumericalError
from .model import (
    CavityParams,
    EnsembleParams,
    ModeSpec,
    QuadratureSettings,
    Shape,
    SimConfig,
    derive_rates,
)
from .spectral import (
    memory_efficiency_total,
    retrieval_efficiency_mode,
    storage_efficiency_mode,
    storage_efficiency_narrowband,
)

__all__ = [
    "ScanRow",
    "ScanResult",
    "MatchReport",
    "scan_ratio_modes",
    "fig1_grids",
    "find_optimal_gamma1",
    "optical_depth",
    "SPEED_OF_LIGHT",
]

SPEED_OF_LIGHT = constants.c  # m/s

OBJECTIVES = ("retrieval", "storage", "narrowband")


@dataclass(frozen=True)
class ScanRow:
    mode_count: int
    ratio: float
    q_me: float
    q_min_mode: float
    error: Optional[str] = None


@dataclass(frozen=True)
class ScanResult:
    """Rows in grid order: mode count outer, ratio inner."""

    rows: tuple[ScanRow, ...]
    m_grid: tuple[int, ...]
    ratio_grid: tuple[float, ...]
    gamma2_ratio: float

    def surface(self):
        """``q_me`` as an array indexed ``[m, ratio]``."""
        return np.array([r.q_me for r in self.rows]).reshape(len(self.m_grid), len(self.ratio_grid))

    def row(self, mode_count, ratio):
        i = self.m_grid.index(mode_count)
        j = int(np.argmin(np.abs(np.asarray(self.ratio_grid) - ratio)))
        return self.rows[i * len(self.ratio_grid) + j]

    def argmax_ratio(self, mode_count):
        i = self.m_grid.index(mode_count)
        return self.ratio_grid[int(np.nanargmax(self.surface()[i]))]

    @property
    def errors(self):
        return [r for r in self.rows if r.error is not None]


def fig1_grids():
    """Mode counts 1..100 and 61 log-spaced ratios from 0.1 to 10."""
    return tuple(range(1, 101)), tuple(float(x) for x in np.logspace(-1.0, 1.0, 61))


def _with_ratio(base: SimConfig, ratio, gamma2_ratio):
    gamma1 = derive_rates(base.ensemble).gamma_in / ratio
    return base.replace(cavity=CavityParams(gamma1, gamma2_ratio * gamma1))


def _ratio_column(base, ratio, gamma2_ratio, m_grid):
    """All rows for one ratio, one per mode count."""
    config = _with_ratio(base, ratio, gamma2_ratio)
    rows = []
    for m in m_grid:
        train = config.train.with_mode_count(m)
        try:
            report = memory_efficiency_total(train, config.cavity, config.ensemble, config.quadrature)
        except NumericalError as exc:
            rows.append(ScanRow(m, ratio, math.nan, math.nan, f"{type(exc).__name__}: {exc}"))
            continue
        per_mode = np.asarray(report.per_mode_retrieval) * np.asarray(report.per_mode_decoherence_factor)
        rows.append(ScanRow(m, ratio, report.total_memory, float(per_mode.min())))
    return rows


def scan_ratio_modes(base: SimConfig, ratio_grid, m_grid, gamma2_ratio=None,
                     workers: int | None = None) -> ScanResult:
    """Total memory efficiency over a grid of ratios and mode counts.

    For each ratio ``gamma1 = Gamma_in / ratio`` and ``gamma2`` follows
    ``gamma1`` at a fixed proportion (``gamma2_ratio``, by default the one
    in ``base``).  Each mode count rebuilds the train from its first mode
    with the base spacing and the flip one spacing after the last mode.
    Numerical failures mark the affected row instead of aborting the scan.
    ``workers > 1`` evaluates ratio columns in separate processes; the
    result does not depend on it.
    """
    ratio_grid = tuple(float(r) for r in ratio_grid)
    m_grid = tuple(int(m) for m in m_grid)
    if not ratio_grid or not m_grid:
        raise ValueError("ratio_grid and m_grid must be non-empty")
    if any(not (r > 0 and math.isfinite(r)) for r in ratio_grid):
        raise ValueError("ratios must be positive and finite")
    if any(m < 1 for m in m_grid):
        raise ValueError("mode counts must be at least 1")
    if gamma2_ratio is None:
        gamma2_ratio = base.cavity.gamma2 / base.cavity.gamma1

    args = [(base, r, gamma2_ratio, m_grid) for r in ratio_grid]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            columns = list(pool.map(_ratio_column, *zip(*args)))
    else:
        columns = [_ratio_column(*a) for a in args]

    rows = [columns[j][i] for i in range(len(m_grid)) for j in range(len(ratio_grid))]
    return ScanResult(tuple(rows), m_grid, ratio_grid, float(gamma2_ratio))


@dataclass(frozen=True)
class MatchReport:
    objective: str
    gamma1: float
    gamma2: float
    gamma_tot: float
    gamma1_narrowband: float
    ratio: float
    q: float
    q_narrowband: float
    slope: float
    curvature: float
    unimodal: bool
    evaluations: int
    optical_depth: Optional[float] = None
    warnings: tuple[str, ...] = field(default=())


def _objective(kind, ensemble, gamma2, mode, quad):
    if kind == "retrieval":
        def q(gamma1):
            return retrieval_efficiency_mode(mode, CavityParams(gamma1, gamma2), ensemble, quad)
    elif kind == "storage":
        def q(gamma1):
            return storage_efficiency_mode(mode, CavityParams(gamma1, gamma2), ensemble, quad)
    elif kind == "narrowband":
        def q(gamma1):
            return storage_efficiency_narrowband(CavityParams(gamma1, gamma2), ensemble)
    else:
        raise ValueError(f"objective must be one of {OBJECTIVES}, got {kind!r}")
    return q


def _reference_rate(kind, ensemble):
    rates = derive_rates(ensemble)
    return rates.gamma_in if kind == "retrieval" else rates.gamma_tot


def find_optimal_gamma1(ensemble: EnsembleParams, gamma2: float, bandwidth: float,
                        shape: Shape = Shape.LORENTZIAN, objective: str = "retrieval",
                        quad: QuadratureSettings = QuadratureSettings(),
                        rate_unit_hz: float | None = None, length_m: float | None = None,
                        grid_points: int = 41, xtol: float = 1e-10) -> MatchReport:
    """Cavity coupling ``gamma1`` that maximises a single-mode efficiency.

    ``objective`` is ``"retrieval"`` (storage and echo of one mode, finite
    bandwidth), ``"storage"`` (storage only) or ``"narrowband"`` (the
    closed form, no bandwidth).  A log grid over ``gamma1`` in
    ``[Gamma / 100, 100 Gamma]`` brackets the peak, then golden-section
    search refines it in ``log gamma1``.  A grid with more than one local
    maximum is reported as not unimodal and the largest peak is refined.

    ``slope`` and ``curvature`` are the first and second derivatives of the
    objective with respect to ``ln(Gamma / gamma1)`` at the optimum.  When
    ``rate_unit_hz`` (the physical value of one rate unit) and ``length_m``
    are given the optical depth of the matched cavity is attached.
    """
    if not (bandwidth > 0 and math.isfinite(bandwidth)):
        raise ValueError("bandwidth must be positive")
    if not (gamma2 >= 0 and math.isfinite(gamma2)):
        raise ValueError("gamma2 must be non-negative")
    mode = ModeSpec(0.0, bandwidth, 1.0, Shape(shape))
    q = _objective(objective, ensemble, gamma2, mode, quad)
    reference = _reference_rate(objective, ensemble)
    if reference <= 0:
        raise ValueError("the ensemble does not absorb (zero coupling)")
    evaluations = 0

    def neg(x):
        nonlocal evaluations
        evaluations += 1
        return -q(reference * math.exp(x))

    xs = np.linspace(math.log(1e-2), math.log(1e2), grid_points)
    values = np.array([neg(x) for x in xs])
    interior = (values[1:-1] < values[:-2]) & (values[1:-1] < values[2:])
    unimodal = int(interior.sum()) == 1
    warnings = []
    if not unimodal:
        warnings.append(f"grid pre-scan found {int(interior.sum())} interior maxima; refined the largest")
    i = int(np.argmin(values))
    if i in (0, len(xs) - 1):
        warnings.append("optimum at the edge of the pre-scan range; not refined")
        x_opt, f_opt = xs[i], values[i]
    else:
        try:
            res = optimize.minimize_scalar(
                neg, bracket=(xs[i - 1], xs[i], xs[i + 1]), method="golden",
                options={"xtol": xtol},
            )
            x_opt, f_opt = float(res.x), float(res.fun)
        except ValueError as exc:
            warnings.append(f"golden-section bracket rejected ({exc}); using the grid optimum")
            x_opt, f_opt = xs[i], values[i]

    gamma1 = reference * math.exp(x_opt)
    h = 1e-3
    f_plus, f_minus = -neg(x_opt - h), -neg(x_opt + h)
    f0 = -f_opt
    slope = (f_plus - f_minus) / (2 * h)
    curvature = (f_plus - 2 * f0 + f_minus) / (h * h)

    rates = derive_rates(ensemble)
    depth = None
    if rate_unit_hz is not None and length_m is not None:
        depth = optical_depth(gamma1 * rate_unit_hz, length_m)
    return MatchReport(
        objective=objective,
        gamma1=gamma1,
        gamma2=float(gamma2),
        gamma_tot=rates.gamma_tot,
        # argmax of the closed form in gamma1: Gamma_tot + gamma2
        gamma1_narrowband=rates.gamma_tot + gamma2,
        ratio=reference / gamma1,
        q=f0,
        q_narrowband=storage_efficiency_narrowband(CavityParams(gamma1, gamma2), ensemble),
        slope=slope,
        curvature=curvature,
        unimodal=unimodal,
        evaluations=evaluations,
        optical_depth=depth,
        warnings=tuple(warnings),
    )


def optical_depth(gamma1_hz: float, length_m: float) -> float:
    """Resonant optical depth ``gamma1 L / c`` of a matched cavity memory.

    ``gamma1_hz`` is the cavity coupling rate in 1/s and ``length_m`` the
    medium length in metres.
    """
    if not (gamma1_hz >= 0 and length_m >= 0):
        raise ValueError("gamma1 and length must be non-negative")
    return gamma1_hz * length_m / SPEED_OF_LIGHT
