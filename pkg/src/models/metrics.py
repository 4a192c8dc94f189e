"""Result models for runs, static DIRECT tests and diagnostics"""

from typing import List, Optional

from pydantic import BaseModel, Field, field_validator


class RunMetrics(BaseModel):
    """Summary metrics of one supervisory-observer run"""

    convergence_time: Optional[float] = Field(
        default=None, description="Earliest T* with |p_err| <= threshold after"
    )
    threshold: float = Field(description="Parameter-error threshold")
    average_observers: float
    final_param_error: float = Field(description="Physical units, inf-norm")
    normalized_state_error: float
    bound_flagged: bool = Field(default=False)

    @field_validator(
        "average_observers", "final_param_error", "normalized_state_error"
    )
    @classmethod
    def validate_nonnegative(cls, v):
        """Metrics are finite and nonnegative"""
        if not v >= 0 or v == float("inf"):
            raise ValueError("Metrics must be finite and nonnegative")
        return v

    def to_lines(self) -> List[str]:
        """key=value lines for metrics.txt"""
        conv = "none" if self.convergence_time is None else repr(
            self.convergence_time
        )
        return [
            f"convergence_time={conv}",
            f"threshold={self.threshold!r}",
            f"average_observers={self.average_observers!r}",
            f"final_param_error={self.final_param_error!r}",
            f"normalized_state_error={self.normalized_state_error!r}",
            f"bound_flagged={str(self.bound_flagged).lower()}",
        ]


class IterationLog(BaseModel):
    """One iteration of a static DIRECT test run"""

    k: int
    n_samples: int
    potentially_optimal: List[int]
    new_points: int
    min_distance: float
    best_cost: float


class DirectStaticResult(BaseModel):
    """Outcome of a static-cost DIRECT run"""

    function: str
    n_p: int
    iterations: int
    target: List[float]
    best_point: List[float]
    best_cost: float
    final_distance: float
    history: List[IterationLog] = Field(default_factory=list)


class PERow(BaseModel):
    """Persistency-of-excitation diagnostic row"""

    mismatch: List[float] = Field(description="Physical parameter offset")
    mismatch_norm: float
    min_energy: float = Field(description="min over t of windowed |y_err|^2")


class ContractionReport(BaseModel):
    """Matched-observer convergence check"""

    initial_error: float
    final_error: float
    settle_time: float
    settled_at: Optional[float] = Field(
        default=None, description="First time the error stays below target"
    )
    settled: bool
    bound_flagged: bool
