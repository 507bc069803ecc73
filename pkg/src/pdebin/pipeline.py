"""End-to-end binarization: attenuate, build the edge map and target,
evolve, threshold."""

from __future__ import annotations

from dataclasses import dataclass

from .binarize import sauvola_target, threshold_final
from .config import RunConfig
from .edges import EdgeConfig, edge_anisotropic, edge_combine, edge_isotropic
from .evolution import EvolutionResult, run_evolution
from .grid import BinaryMap, ScalarField
from .preprocess import ContrastConfig, apply_attenuation, local_contrast, log_normalize


@dataclass(frozen=True)
class PipelineResult:
    mask: BinaryMap
    evolution: EvolutionResult
    preprocessed: ScalarField
    edge_map: ScalarField
    target: BinaryMap


def compute_edge_map(pre: ScalarField,
                     contrast_cfg: ContrastConfig = ContrastConfig(),
                     edge_cfg: EdgeConfig = EdgeConfig()) -> ScalarField:
    """Edge map driving the shock term: detectors are run on the
    log-normalized local-contrast field, then mixed."""
    enhanced = log_normalize(local_contrast(pre, contrast_cfg))
    return edge_combine(edge_isotropic(enhanced), edge_anisotropic(enhanced), edge_cfg)


def binarize_field(u: ScalarField, cfg: RunConfig = RunConfig()) -> PipelineResult:
    """Full pipeline from a loaded grayscale field to a binary mask."""
    pre = apply_attenuation(u, cfg.attenuation_config())
    edge_map = compute_edge_map(pre, cfg.contrast_config(), cfg.edge_config())
    if pre.data.min() == pre.data.max():
        # constant field: window statistics carry no signal, cut at 0.5
        target = threshold_final(pre, "fixed_half")
    else:
        target = sauvola_target(pre)
    evolution = run_evolution(pre, cfg.pde_params(), edge_map, target)
    mask = threshold_final(evolution.field, cfg.threshold_mode())
    return PipelineResult(mask, evolution, pre, edge_map, target)
