"""Grunwald-Letnikov machinery for the fractional-order model.

The GL derivative of order alpha is a weighted history sum with weights
w_0 = 1, w_k = (1 - (alpha+1)/k) * w_{k-1}. At alpha = 1 the weights
collapse to (1, -1, 0, ...) and every operator here reduces bit-exactly
to its integer-order counterpart. Histories and spatial sums are
truncated at a fixed depth: the weights decay like k^-(1+alpha), so the
dropped tail is negligible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError, StateError
from .evolution import PdeParams, TermFields
from .grid import ScalarField
from .stencil import gl_face_x, gl_face_y, pm_divergence, shock_term, weighted_shift_sum

# Direction -> (sx, sy); the operator reads samples shifted against it.
_DIRECTIONS = {"x+": (1, 0), "x-": (-1, 0), "y+": (0, 1), "y-": (0, -1)}


@dataclass(frozen=True)
class GlCoefficients:
    order: float
    weights: np.ndarray


def gl_coefficients(alpha: float, taps: int) -> GlCoefficients:
    """Weights w_0..w_taps of the GL recurrence for order alpha in (0, 1]."""
    if not 0.0 < alpha <= 1.0:
        raise ParameterError(f"alpha must lie in (0, 1], got {alpha}")
    if taps < 1:
        raise ParameterError(f"taps must be >= 1, got {taps}")
    w = np.empty(taps + 1)
    w[0] = 1.0
    for k in range(1, taps + 1):
        w[k] = (1.0 - (alpha + 1.0) / k) * w[k - 1]
    w += 0.0  # normalize -0.0 from the alpha = 1 recurrence
    w.flags.writeable = False
    return GlCoefficients(alpha, w)


def frac_gradient(u: ScalarField, alpha: float, taps: int,
                  direction: str) -> np.ndarray:
    """One-sided GL derivative: sum_k w_k * u shifted k pixels against the
    direction, replicate boundary. At alpha = 1 this is the plain one-sided
    first difference."""
    if direction not in _DIRECTIONS:
        raise ParameterError(f"unknown direction {direction!r}")
    sx, sy = _DIRECTIONS[direction]
    w = gl_coefficients(alpha, taps).weights
    return weighted_shift_sum(u.data, w, sx, sy)


def term_edge_frac(u: ScalarField, edge_map: ScalarField, alpha: float,
                   taps: int) -> np.ndarray:
    """Shock term with every one-sided difference replaced by its GL version."""
    if edge_map.data.shape != u.data.shape:
        raise DimensionError(
            f"edge map shape {edge_map.data.shape} != field shape {u.data.shape}")
    w = gl_coefficients(alpha, taps).weights
    a = u.data
    dxm = weighted_shift_sum(a, w, 1, 0)
    dxp = -weighted_shift_sum(a, w, -1, 0)
    dym = weighted_shift_sum(a, w, 0, 1)
    dyp = -weighted_shift_sum(a, w, 0, -1)
    return shock_term(dxp, dxm, dyp, dym, edge_map.data)


def term_diffusion_frac(u: ScalarField, pm_contrast: float, alpha: float,
                        taps: int) -> np.ndarray:
    """Gradient-limited diffusion with GL face gradients.

    The flux on each face uses the forward GL difference; the divergence
    stays an integer difference of adjacent faces, so equal face responses
    cancel and constant fields are stationary for every order.
    """
    if pm_contrast <= 0:
        raise ParameterError(f"pm_contrast must be > 0, got {pm_contrast}")
    w = gl_coefficients(alpha, taps).weights
    return pm_divergence(gl_face_x(u.data, w), gl_face_y(u.data, w), pm_contrast)


class EvolutionHistory:
    """Bounded chronological stack of past iterates, most recent first."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ParameterError(f"history capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._entries: list[ScalarField] = []

    def push(self, field: ScalarField) -> None:
        if self._entries and field.data.shape != self._entries[0].data.shape:
            raise DimensionError("history entries must share dimensions")
        self._entries.insert(0, field)
        del self._entries[self.capacity:]

    @property
    def latest(self) -> ScalarField:
        if not self._entries:
            raise StateError("evolution history is empty")
        return self._entries[0]

    def __len__(self) -> int:
        return len(self._entries)

    def __getitem__(self, k: int) -> ScalarField:
        return self._entries[k]


def step_fractional(history: EvolutionHistory, terms: TermFields,
                    p: PdeParams) -> ScalarField:
    """One explicit GL time step from the stored history.

    u_next = clamp(dt^alpha * rhs - sum_k w_k * u_{-k}, 0, 1) with the sum
    over the available history (at most memory_depth entries). For
    alpha = 1 the sum collapses to +u_latest and the update equals the
    integer-order Euler step.
    """
    if len(history) == 0:
        raise StateError("evolution history is empty")
    latest = history.latest
    if terms.source.shape != latest.data.shape:
        raise DimensionError(
            f"term shape {terms.source.shape} != field shape {latest.data.shape}")
    w = gl_coefficients(p.alpha, p.memory_depth).weights
    rhs = (p.source_coeff * terms.source + p.edge_coeff * terms.edge
           + p.diffusion_coeff * terms.diffusion)
    acc = (p.dt ** p.alpha) * rhs
    for k in range(1, min(len(history), p.memory_depth) + 1):
        wk = w[k]
        if wk == 0.0:
            continue
        acc -= wk * history[k - 1].data
    return ScalarField(np.clip(acc, 0.0, 1.0))
