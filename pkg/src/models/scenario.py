"""Pydantic models for experiment scenarios"""

import math
from pathlib import Path
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

import config

from .errors import DomainError


def _is_multiple(value: float, step: float) -> bool:
    ratio = value / step
    return abs(ratio - round(ratio)) <= 1e-9 * max(1.0, abs(ratio))


class ParamBox(BaseModel):
    """Physical parameter box, one [lower, upper] pair per dimension"""

    bounds: List[Tuple[float, float]] = Field(
        description="Per-dimension physical bounds"
    )

    @field_validator("bounds")
    @classmethod
    def validate_bounds(cls, v):
        """Ensure every upper bound exceeds its lower bound"""
        if not v:
            raise ValueError("Parameter box needs at least one dimension")
        for lower, upper in v:
            if not upper > lower:
                raise ValueError(f"Empty interval [{lower}, {upper}]")
        return v

    @property
    def n_p(self) -> int:
        return len(self.bounds)

    @property
    def lower(self) -> np.ndarray:
        return np.array([b[0] for b in self.bounds], dtype=float)

    @property
    def width(self) -> np.ndarray:
        return np.array([b[1] - b[0] for b in self.bounds], dtype=float)

    def contains(self, p) -> bool:
        p = np.asarray(p, dtype=float)
        return p.shape == (self.n_p,) and all(
            lower <= x <= upper for x, (lower, upper) in zip(p, self.bounds)
        )

    def denormalize(self, p_norm) -> np.ndarray:
        """Map a point of the unit cube to physical units"""
        p_norm = np.asarray(p_norm, dtype=float)
        if p_norm.shape != (self.n_p,):
            raise DomainError(f"Expected {self.n_p} coordinates, got {p_norm}")
        if np.any(p_norm < 0.0) or np.any(p_norm > 1.0):
            raise DomainError(f"Point {p_norm} outside the unit cube")
        return self.lower + p_norm * self.width

    def normalize(self, p) -> np.ndarray:
        """Inverse of denormalize"""
        p = np.asarray(p, dtype=float)
        if not self.contains(p):
            raise DomainError(f"Point {p} outside the parameter box")
        return (p - self.lower) / self.width


class InputSpec(BaseModel):
    """Excitation input u(t) with |u| <= amplitude"""

    kind: Literal["multisine", "piecewise-constant-random", "constant"] = (
        Field(default=config.INPUT_KIND, description="Signal family")
    )
    amplitude: float = Field(
        default=config.INPUT_AMPLITUDE, ge=0.0, description="Bound Delta_u"
    )
    frequencies: List[float] = Field(
        default_factory=lambda: list(config.INPUT_FREQUENCIES),
        description="Multisine angular frequencies in rad/s",
    )
    hold_time: float = Field(
        default=config.INPUT_HOLD_TIME,
        gt=0.0,
        description="Hold time of piecewise-constant values in seconds",
    )
    level: float = Field(default=0.0, description="Constant input level")
    seed: int = Field(default=config.SEED, description="Phase / value seed")

    @model_validator(mode="after")
    def validate_signal(self):
        """Ensure the signal respects its amplitude bound"""
        if self.kind == "multisine" and not self.frequencies:
            raise ValueError("Multisine input needs at least one frequency")
        if self.kind == "constant" and abs(self.level) > self.amplitude:
            raise ValueError("Constant level exceeds the amplitude bound")
        return self


class GainsSpec(BaseModel):
    """Observer output-injection gains"""

    L: List[float] = Field(
        default_factory=lambda: list(config.GAIN_L),
        description="Output injection gain (6-vector)",
    )
    K: List[float] = Field(
        default_factory=lambda: list(config.GAIN_K),
        description="Innovation gain inside the sigmoid argument (2-vector)",
    )

    @field_validator("L")
    @classmethod
    def validate_l(cls, v):
        """Ensure L is a finite 6-vector"""
        if len(v) != 6 or not all(math.isfinite(x) for x in v):
            raise ValueError("Gain L must be a finite 6-vector")
        return v

    @field_validator("K")
    @classmethod
    def validate_k(cls, v):
        """Ensure K is a finite 2-vector"""
        if len(v) != 2 or not all(math.isfinite(x) for x in v):
            raise ValueError("Gain K must be a finite 2-vector")
        return v


class ModelSpec(BaseModel):
    """Neural mass constants and structural switches"""

    a: float = Field(default=100.0, gt=0.0)
    b: float = Field(default=50.0, gt=0.0)
    c1: float = Field(default=135.0, gt=0.0)
    c2: float = Field(default=108.0, gt=0.0)
    c3: float = Field(default=33.75, gt=0.0)
    c4: float = Field(default=33.75, gt=0.0)
    e0: float = Field(default=2.5, gt=0.0)
    v0: float = Field(default=6.0, gt=0.0)
    r: float = Field(default=0.56, gt=0.0)
    b_row4_uses_p2: bool = Field(
        default=False,
        description="Use p2*a instead of p1*a for the input entry of B(p)",
    )


class Scenario(BaseModel):
    """Full description of one supervisory-observer experiment"""

    model: str = Field(default="neural-mass", description="Plant model name")
    constants: ModelSpec = Field(default_factory=ModelSpec)
    param_box: ParamBox = Field(
        default_factory=lambda: ParamBox(bounds=list(config.PARAM_BOX))
    )
    p_true: List[float] = Field(
        default_factory=lambda: list(config.P_TRUE),
        description="True parameter in physical units",
    )
    x0: List[float] = Field(
        default_factory=lambda: list(config.PLANT_X0),
        description="Plant initial state",
    )
    observer_x0: List[float] = Field(
        default_factory=lambda: list(config.OBSERVER_X0),
        description="Initial state of the first observers",
    )
    sampling_interval: float = Field(
        default=config.SAMPLING_INTERVAL, gt=0.0, description="T_d in seconds"
    )
    forgetting_rate: float = Field(
        default=config.FORGETTING_RATE, gt=0.0, description="lambda in 1/s"
    )
    epsilon: float = Field(default=config.EPSILON, ge=0.0)
    d_star: float = Field(
        default=config.D_STAR, gt=0.0, description="Normalized resolution"
    )
    k_star: Optional[int] = Field(
        default=config.K_STAR,
        ge=0,
        description="Explicit termination iteration, overrides d_star",
    )
    dt: float = Field(default=config.DT, gt=0.0)
    t_final: float = Field(default=config.T_FINAL, gt=0.0)
    input: InputSpec = Field(default_factory=InputSpec)
    gains: GainsSpec = Field(default_factory=GainsSpec)
    seed: int = Field(default=config.SEED)
    state_bound: float = Field(
        default=config.STATE_BOUND, gt=0.0, description="Bound K_x flag level"
    )
    settle_time: float = Field(default=config.SETTLE_TIME, gt=0.0)
    reinitialize_all: bool = Field(default=config.REINITIALIZE_ALL)
    decimation: int = Field(default=config.DECIMATION, ge=1)
    convergence_threshold: float = Field(
        default=config.CONVERGENCE_THRESHOLD, gt=0.0
    )
    output_dir: str = Field(default=config.OUTPUT_FOLDER)

    @field_validator("x0", "observer_x0")
    @classmethod
    def validate_state(cls, v):
        """Ensure states are finite 6-vectors"""
        if len(v) != 6 or not all(math.isfinite(x) for x in v):
            raise ValueError("Neural mass states are finite 6-vectors")
        return v

    @field_validator("model")
    @classmethod
    def validate_model(cls, v):
        """Only the neural mass plant is registered"""
        if v.strip().lower() != "neural-mass":
            raise ValueError(f"Unknown model '{v}'")
        return v.strip().lower()

    @model_validator(mode="after")
    def validate_schedule(self):
        """Ensure the update schedule and p* are consistent"""
        if not _is_multiple(self.sampling_interval, self.dt):
            raise ValueError("sampling_interval must be a multiple of dt")
        if not _is_multiple(self.t_final, self.dt):
            raise ValueError("t_final must be a multiple of dt")
        if len(self.p_true) != self.param_box.n_p:
            raise ValueError("p_true dimension does not match the box")
        if not self.param_box.contains(self.p_true):
            raise ValueError(f"p_true {self.p_true} outside the parameter box")
        if self.param_box.n_p != 2:
            raise ValueError("The neural mass model has two parameters")
        return self

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))

    @property
    def steps_per_window(self) -> int:
        return int(round(self.sampling_interval / self.dt))

    @property
    def output_path(self) -> Path:
        return Path(self.output_dir)
