"""PDE-based binarization of degraded document images.

A three-term evolution (binary source relaxation, edge-weighted shock,
gradient-limited diffusion) with optional Grunwald-Letnikov fractional
order, preceded by stain attenuation and local-contrast edge
normalization, plus a DIBCO-style metric suite and batch CLI.
"""

from .binarize import otsu_threshold, sauvola_target, threshold_final
from .config import RunConfig, dumps_config, load_config, parse_config, save_config
from .edges import EdgeConfig, edge_anisotropic, edge_combine, edge_isotropic
from .errors import (DegenerateGroundTruthError, DimensionError, EmptyInputError,
                     FormatError, ParameterError, PdebinError, StateError)
from .evolution import (EvolutionResult, PdeParams, TermFields, evaluate_terms,
                        run_evolution, step_integer, term_diffusion, term_edge,
                        term_source)
from .fractional import (EvolutionHistory, GlCoefficients, frac_gradient,
                         gl_coefficients, step_fractional, term_diffusion_frac,
                         term_edge_frac)
from .grid import (BinaryMap, BoundaryRule, ScalarField, load_image, sample_at,
                   save_image)
from .metrics import (ConfusionCounts, MetricReport, PairMetrics, confusion_counts,
                      drd, evaluate_batch, evaluate_pair, f_measure, nrm,
                      pseudo_f_measure, psnr, zhang_suen_thin)
from .pipeline import PipelineResult, binarize_field, compute_edge_map
from .preprocess import (AttenuationConfig, ContrastConfig, apply_attenuation,
                         attenuate_linear, attenuate_nonlinear, local_contrast,
                         log_normalize)

__version__ = "0.1.0"

__all__ = [
    "AttenuationConfig", "BinaryMap", "BoundaryRule", "ConfusionCounts",
    "ContrastConfig", "DegenerateGroundTruthError", "DimensionError",
    "EdgeConfig", "EmptyInputError", "EvolutionHistory", "EvolutionResult",
    "FormatError", "GlCoefficients", "MetricReport", "PairMetrics",
    "ParameterError", "PdeParams", "PdebinError", "PipelineResult", "RunConfig",
    "ScalarField", "StateError", "TermFields", "apply_attenuation",
    "attenuate_linear", "attenuate_nonlinear", "binarize_field",
    "compute_edge_map", "confusion_counts", "drd", "dumps_config",
    "edge_anisotropic", "edge_combine", "edge_isotropic", "evaluate_batch",
    "evaluate_pair", "evaluate_terms", "f_measure", "frac_gradient",
    "gl_coefficients", "load_config", "load_image", "local_contrast",
    "log_normalize", "nrm", "otsu_threshold", "parse_config", "pseudo_f_measure",
    "psnr", "run_evolution", "sample_at", "sauvola_target", "save_config",
    "save_image", "step_fractional", "step_integer", "term_diffusion",
    "term_diffusion_frac", "term_edge", "term_edge_frac", "term_source",
    "threshold_final", "zhang_suen_thin",
]
