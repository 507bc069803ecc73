"""Stain attenuation and logarithmic local-contrast normalization.

Both attenuation modes push stain intensities toward the white background
before the evolution runs; the contrast chain turns the attenuated image
into a normalized edge-response source.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from scipy.special import expit

from .binarize import otsu_threshold
from .errors import ParameterError
from .grid import ScalarField

_LOG2 = np.log(2.0)


@dataclass(frozen=True)
class AttenuationConfig:
    """Stain attenuation settings; linear mode uses gain/bias, nonlinear
    mode uses slope/midpoint."""

    mode: str = "nonlinear"
    gain: float = 1.2
    bias: float = 0.0
    slope: float = 10.0
    midpoint: float | str = "auto"


@dataclass(frozen=True)
class ContrastConfig:
    radius: int = 3
    eps: float = 1e-6

    def __post_init__(self):
        if self.radius < 1:
            raise ParameterError(f"contrast radius must be >= 1, got {self.radius}")
        if self.eps <= 0:
            raise ParameterError(f"contrast eps must be > 0, got {self.eps}")


def attenuate_linear(u: ScalarField, gain: float, bias: float) -> ScalarField:
    """Affine remap v = clamp(gain*u + bias, 0, 1); gain must be positive."""
    if gain <= 0:
        raise ParameterError(f"gain must be > 0, got {gain}")
    return ScalarField(np.clip(gain * u.data + bias, 0.0, 1.0))


def attenuate_nonlinear(u: ScalarField, slope: float,
                        midpoint: float | str = "auto") -> ScalarField:
    """Logistic tone curve v = 1 / (1 + exp(-slope*(u - midpoint))).

    Mid-tone stains above the midpoint are pushed toward background white
    while darker text is pushed toward 0. With midpoint='auto' the Otsu
    threshold of the input is used; for a constant input (where Otsu
    degenerates to the constant itself and would pin everything at 0.5)
    the neutral midpoint 0.5 is used instead.
    """
    if slope <= 0:
        raise ParameterError(f"slope must be > 0, got {slope}")
    if midpoint == "auto":
        m = 0.5 if u.data.min() == u.data.max() else otsu_threshold(u)
    else:
        m = float(midpoint)
    return ScalarField(expit(slope * (u.data - m)))


def apply_attenuation(u: ScalarField, cfg: AttenuationConfig) -> ScalarField:
    if cfg.mode == "linear":
        return attenuate_linear(u, cfg.gain, cfg.bias)
    if cfg.mode == "nonlinear":
        return attenuate_nonlinear(u, cfg.slope, cfg.midpoint)
    raise ParameterError(f"unknown attenuation mode {cfg.mode!r}")


def local_contrast(u: ScalarField, cfg: ContrastConfig = ContrastConfig()) -> ScalarField:
    """Windowed Michelson contrast (max - min) / (max + min + eps) in [0, 1)."""
    size = 2 * cfg.radius + 1
    w_max = ndimage.maximum_filter(u.data, size=size, mode="nearest")
    w_min = ndimage.minimum_filter(u.data, size=size, mode="nearest")
    return ScalarField((w_max - w_min) / (w_max + w_min + cfg.eps))


def log_normalize(c: ScalarField) -> ScalarField:
    """Expand low contrast responses with E = log(1 + C) / log(2).

    Monotone and range-preserving: maps [0, 1] onto [0, 1].
    """
    return ScalarField(np.log1p(c.data) / _LOG2)
