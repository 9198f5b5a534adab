"""Photon-echo quantum memory in a single-mode cavity.

``spectral`` holds the closed-form efficiencies, ``timedomain`` a direct
integration of the cavity and atom equations used to check them, and
``optimize`` scans and impedance-matching search.
"""

from .errors import (
    ConfigError,
    NumericalError,
    OracleError,
    QuadratureError,
    SingularEvaluationError,
    StepSizeError,
)
from .model import (
    CavityParams,
    EnsembleParams,
    ModeSpec,
    ModeTrain,
    OracleSettings,
    QuadratureSettings,
    Shape,
    SimConfig,
    derive_rates,
    fig1_config,
    load_config,
    validate_config,
)
from .optimize import find_optimal_gamma1, optical_depth, scan_ratio_modes
from .spectral import (
    memory_efficiency_total,
    retrieval_efficiency_mode,
    storage_efficiency_mode,
    storage_efficiency_narrowband,
    z_filter,
)
from .timedomain import simulate

__version__ = "0.1.0"
