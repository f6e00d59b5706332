"""Multifractal analysis of 1-D signals via the weak-scaling formalism.

The package computes discrete wavelet pyramids, derives wavelet leaders,
p-leaders and (theta, omega)-leaders, estimates scaling functions and
Legendre spectra, and ships exact-covariance synthetic generators (fBm, fGn,
random wavelet series, multifractal random walks) for validation.
"""

__version__ = "0.1.0"

from .errors import (
    ComputeError,
    ReportIoError,
    ValidationError,
    WsmfError,
)
from .multiscale import (
    GrowthPair,
    MultiscaleField,
    Neighborhood,
    coefficient_field,
    p_leaders,
    theta_omega_leaders,
    theta_omega_neighborhood,
    wavelet_leaders,
)
from .scaling import (
    AdmissibilityReport,
    MomentGrid,
    ScalingFunction,
    StructureFunctions,
    default_scale_range,
    estimate_hmin,
    hmin_fit,
    p_admissibility,
    scaling_function,
    structure_functions,
)
from .sparsity import SparsitySplit, admissible_p_bound, sparsity_split
from .spectrum import (
    LargeDeviationSpectrum,
    LegendreSpectrum,
    halfwidth_at,
    legendre_transform,
    rws_large_deviation,
    theoretical_spectrum,
    ws_spectrum_pipeline,
)
from .synth import SynthesisConfig, gen_fbm, gen_fgn, gen_mrw, gen_rws
from .wavelet import (
    CoefficientPyramid,
    DyadicIndex,
    Signal,
    WaveletSpec,
    decompose,
    max_fine_scale,
    pseudo_fractional_integrate,
    pyramid_from_levels,
    reconstruct,
)
from .io import (
    AnalysisConfig,
    AnalysisReport,
    ChannelReport,
    canonical_json,
    emit_report,
    ingest,
    run_analysis,
    write_csv,
    write_raw,
)

__all__ = [
    "__version__",
    "WsmfError",
    "ValidationError",
    "ComputeError",
    "ReportIoError",
    "Signal",
    "WaveletSpec",
    "DyadicIndex",
    "CoefficientPyramid",
    "decompose",
    "reconstruct",
    "pseudo_fractional_integrate",
    "pyramid_from_levels",
    "max_fine_scale",
    "GrowthPair",
    "MultiscaleField",
    "Neighborhood",
    "coefficient_field",
    "wavelet_leaders",
    "p_leaders",
    "theta_omega_neighborhood",
    "theta_omega_leaders",
    "MomentGrid",
    "StructureFunctions",
    "ScalingFunction",
    "AdmissibilityReport",
    "structure_functions",
    "scaling_function",
    "estimate_hmin",
    "hmin_fit",
    "p_admissibility",
    "default_scale_range",
    "LegendreSpectrum",
    "LargeDeviationSpectrum",
    "legendre_transform",
    "ws_spectrum_pipeline",
    "rws_large_deviation",
    "theoretical_spectrum",
    "halfwidth_at",
    "SparsitySplit",
    "sparsity_split",
    "admissible_p_bound",
    "SynthesisConfig",
    "gen_fbm",
    "gen_fgn",
    "gen_rws",
    "gen_mrw",
    "AnalysisConfig",
    "AnalysisReport",
    "ChannelReport",
    "ingest",
    "run_analysis",
    "emit_report",
    "write_csv",
    "write_raw",
    "canonical_json",
]
