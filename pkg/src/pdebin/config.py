"""Run configuration: one flat record covering every pipeline knob.

Configs serialize to JSON with exactly the field names below; the
serialization is canonical (fixed key order, two-space indent, trailing
newline) so round-tripping a canonical file is byte-identical.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

from .edges import EdgeConfig
from .errors import ParameterError
from .evolution import PdeParams
from .preprocess import AttenuationConfig, ContrastConfig


@dataclass(frozen=True)
class RunConfig:
    cs: float = 1.0
    ce: float = 1.0
    cd: float = 0.2
    alpha: float = 1.0
    dt: float = 0.2
    iters: int = 20
    tol: float = 1e-4
    k_pm: float = 0.1
    k_mem: int = 8
    attenuation: str = "nonlinear"
    gain: float = 1.2
    bias: float = 0.0
    slope: float = 10.0
    midpoint: float | str = "auto"
    contrast_radius: int = 3
    contrast_eps: float = 1e-6
    edge_mix: float = 0.5
    threshold: str = "fixed"
    input: str | None = None
    output: str | None = None

    def pde_params(self) -> PdeParams:
        return PdeParams(
            source_coeff=self.cs,
            edge_coeff=self.ce,
            diffusion_coeff=self.cd,
            dt=self.dt,
            max_iters=self.iters,
            tol=self.tol,
            pm_contrast=self.k_pm,
            alpha=self.alpha,
            memory_depth=self.k_mem,
        )

    def attenuation_config(self) -> AttenuationConfig:
        return AttenuationConfig(mode=self.attenuation, gain=self.gain,
                                 bias=self.bias, slope=self.slope,
                                 midpoint=self.midpoint)

    def contrast_config(self) -> ContrastConfig:
        return ContrastConfig(radius=self.contrast_radius, eps=self.contrast_eps)

    def edge_config(self) -> EdgeConfig:
        return EdgeConfig(mix=self.edge_mix)

    def threshold_mode(self) -> str:
        if self.threshold == "fixed":
            return "fixed_half"
        if self.threshold == "otsu":
            return "otsu"
        raise ParameterError(f"unknown threshold mode {self.threshold!r}")


_FIELD_NAMES = [f.name for f in dataclasses.fields(RunConfig)]


def parse_config(text: str) -> RunConfig:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ParameterError("config must be a JSON object")
    unknown = sorted(set(obj) - set(_FIELD_NAMES))
    if unknown:
        raise ParameterError(f"unknown config fields: {', '.join(unknown)}")
    return RunConfig(**obj)


def dumps_config(cfg: RunConfig) -> str:
    data = {name: getattr(cfg, name) for name in _FIELD_NAMES}
    return json.dumps(data, indent=2) + "\n"


def load_config(path: str | Path) -> RunConfig:
    return parse_config(Path(path).read_text())


def save_config(cfg: RunConfig, path: str | Path) -> None:
    Path(path).write_text(dumps_config(cfg))
