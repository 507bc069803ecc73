"""Isotropic and anisotropic edge responses and their weighted combination."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError
from .grid import ScalarField
from .stencil import shifted

_SQRT2 = math.sqrt(2.0)

# Neighbor offsets grouped by orientation (0, 45, 90, 135 degrees); each
# orientation contributes its one-sided differences on both sides, diagonals
# scaled by the pixel distance sqrt(2).
_DIRECTIONAL_OFFSETS = (
    (0, 1, 1.0), (0, -1, 1.0),        # 0 degrees
    (-1, 1, _SQRT2), (1, -1, _SQRT2),  # 45 degrees
    (-1, 0, 1.0), (1, 0, 1.0),         # 90 degrees
    (-1, -1, _SQRT2), (1, 1, _SQRT2),  # 135 degrees
)


@dataclass(frozen=True)
class EdgeConfig:
    """Mixing weight for the isotropic response; detectors are normalized
    by their own maximum before mixing."""

    mix: float = 0.5
    normalization: str = "max"

    def __post_init__(self):
        if not 0.0 <= self.mix <= 1.0:
            raise ParameterError(f"mix weight must lie in [0, 1], got {self.mix}")
        if self.normalization != "max":
            raise ParameterError(f"unknown normalization {self.normalization!r}")


def edge_isotropic(u: ScalarField) -> ScalarField:
    """Central-difference gradient magnitude with replicate boundary."""
    a = u.data
    gx = 0.5 * (shifted(a, 0, 1) - shifted(a, 0, -1))
    gy = 0.5 * (shifted(a, 1, 0) - shifted(a, -1, 0))
    return ScalarField(np.hypot(gx, gy))


def edge_anisotropic(u: ScalarField) -> ScalarField:
    """Maximum one-sided difference magnitude over four orientations.

    Responds to thin strokes in any orientation; a single bright pixel
    yields a full-strength response at its own location.
    """
    a = u.data
    out = np.zeros_like(a)
    for dy, dx, scale in _DIRECTIONAL_OFFSETS:
        np.maximum(out, np.abs(shifted(a, dy, dx) - a) / scale, out=out)
    return ScalarField(out)


def edge_combine(iso: ScalarField, aniso: ScalarField,
                 cfg: EdgeConfig = EdgeConfig()) -> ScalarField:
    """Mix the max-normalized responses: E = mix*iso + (1 - mix)*aniso."""
    if iso.data.shape != aniso.data.shape:
        raise DimensionError(
            f"edge maps differ in shape: {iso.data.shape} vs {aniso.data.shape}")
    a = _unit_max(iso.data)
    b = _unit_max(aniso.data)
    return ScalarField(np.clip(cfg.mix * a + (1.0 - cfg.mix) * b, 0.0, 1.0))


def _unit_max(a: np.ndarray) -> np.ndarray:
    peak = a.max()
    return a / peak if peak > 0 else a
