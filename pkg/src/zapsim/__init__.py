"""Zero-area pulse formation and homodyne mode-matching simulator.

Subpackages by concern: grids and transforms (``fields``), the resonant
medium response (``medium``), overlap and delay scans (``modes``), the
finite-resolution LO shaper (``shaper``), the vacuum/single-photon mixture
(``quantum``), and the scenario/CSV layer (``config``, ``runners``, ``cli``).
"""

from .fields import (
    Grid,
    GridAdequacyWarning,
    SpectralField,
    TemporalField,
    gaussian_pulse,
    make_grid,
    pulse_area,
    pulse_energy,
    to_spectrum,
    to_time,
)
from .medium import (
    MediumParams,
    MediumPreset,
    SpectralFilter,
    energy_transmission,
    propagate,
    temperature_presets,
    transfer_function,
)
from .modes import (
    ScanCurve,
    delay_field,
    eta_curve,
    normalize,
    overlap,
    peak_eta,
    visibility_curve,
)
from .quantum import (
    EtaEstimate,
    HeraldedState,
    QuadratureSample,
    estimate_eta,
    is_nonclassical,
    quadrature_pdf,
    sample_quadratures,
    wigner,
    wigner_grid,
)
from .shaper import (
    ShaperConfig,
    achievable_lo,
    max_shaped_eta,
    max_unshaped_eta,
    resolution_kernel,
)
from .config import ConfigError, ScenarioConfig, load_config

__version__ = "0.1.0"

__all__ = [
    "Grid",
    "GridAdequacyWarning",
    "SpectralField",
    "TemporalField",
    "gaussian_pulse",
    "make_grid",
    "pulse_area",
    "pulse_energy",
    "to_spectrum",
    "to_time",
    "MediumParams",
    "MediumPreset",
    "SpectralFilter",
    "energy_transmission",
    "propagate",
    "temperature_presets",
    "transfer_function",
    "ScanCurve",
    "delay_field",
    "eta_curve",
    "normalize",
    "overlap",
    "peak_eta",
    "visibility_curve",
    "EtaEstimate",
    "HeraldedState",
    "QuadratureSample",
    "estimate_eta",
    "is_nonclassical",
    "quadrature_pdf",
    "sample_quadratures",
    "wigner",
    "wigner_grid",
    "ShaperConfig",
    "achievable_lo",
    "max_shaped_eta",
    "max_unshaped_eta",
    "resolution_kernel",
    "ConfigError",
    "ScenarioConfig",
    "load_config",
    "__version__",
]
