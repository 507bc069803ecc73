"""Provisional binary targets and final thresholding of an evolved field."""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .errors import ParameterError
from .grid import BinaryMap, ScalarField


def otsu_threshold(u: ScalarField) -> float:
    """Global threshold maximizing between-class variance on a 256-bin histogram.

    Samples fall into 256 equal-width bins over [0, 1]; the returned value is
    the center of the lowest bin of the upper class, ties broken toward the
    lower threshold. A constant image returns its own value.
    """
    data = u.data
    lo, hi = float(data.min()), float(data.max())
    if lo == hi:
        return lo
    bins = np.minimum((data * 256.0).astype(np.int64), 255)
    hist = np.bincount(bins.ravel(), minlength=256).astype(np.float64)
    centers = (np.arange(256) + 0.5) / 256.0
    weighted = hist * centers
    # Split s assigns bins < s to the lower class; candidates s = 1..255.
    n_lo = np.cumsum(hist)[:-1]
    sum_lo = np.cumsum(weighted)[:-1]
    n_hi = hist.sum() - n_lo
    sum_hi = weighted.sum() - sum_lo
    variance = np.zeros(255)
    valid = (n_lo > 0) & (n_hi > 0)
    mu_lo = sum_lo[valid] / n_lo[valid]
    mu_hi = sum_hi[valid] / n_hi[valid]
    variance[valid] = n_lo[valid] * n_hi[valid] * (mu_lo - mu_hi) ** 2
    split = int(np.argmax(variance)) + 1  # first maximum = lowest threshold
    return float((split + 0.5) / 256.0)


def sauvola_target(u: ScalarField, radius: int = 12, sensitivity: float = 0.3,
                   dynamic_range: float = 0.5) -> BinaryMap:
    """Local adaptive threshold map: pixel -> ink iff below T = m*(1 + k*(s/R - 1)).

    m and s are the mean and standard deviation over the replicate-padded
    (2*radius+1)^2 window; R is the expected dynamic range of s (0.5 for
    samples in [0, 1]).
    """
    if radius < 1:
        raise ParameterError(f"window radius must be >= 1, got {radius}")
    if sensitivity <= 0:
        raise ParameterError(f"sensitivity must be > 0, got {sensitivity}")
    if dynamic_range <= 0:
        raise ParameterError(f"dynamic range must be > 0, got {dynamic_range}")
    size = 2 * radius + 1
    mean = ndimage.uniform_filter(u.data, size=size, mode="nearest")
    mean_sq = ndimage.uniform_filter(u.data ** 2, size=size, mode="nearest")
    std = np.sqrt(np.maximum(mean_sq - mean ** 2, 0.0))
    thresh = mean * (1.0 + sensitivity * (std / dynamic_range - 1.0))
    return BinaryMap(np.where(u.data < thresh, 0, 1))


def threshold_final(u: ScalarField, mode: str = "fixed_half") -> BinaryMap:
    """Binarize a field: 'fixed_half' cuts at 0.5, 'otsu' at the global Otsu
    threshold. A sample equal to the threshold maps to background."""
    if mode == "fixed_half":
        thresh = 0.5
    elif mode == "otsu":
        thresh = otsu_threshold(u)
    else:
        raise ParameterError(f"unknown threshold mode {mode!r}")
    return BinaryMap(np.where(u.data < thresh, 0, 1))
