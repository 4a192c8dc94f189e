"""Event-log and snapshot records"""

from typing import List, Optional

from pydantic import BaseModel, Field

EVENT_SCHEMA_VERSION = 1
SNAPSHOT_SCHEMA_VERSION = 1


class SampleRecord(BaseModel):
    """Sample point in exact normalized and physical coordinates"""

    normalized: List[str] = Field(description="Exact fractions, e.g. '1/6'")
    physical: List[float]


class MonitorRecord(BaseModel):
    """Window monitor value of one observer"""

    observer_id: int
    normalized: List[str]
    mu: float


class DiscardRecord(BaseModel):
    """Observer removed when the bank is reduced"""

    observer_id: int
    physical: List[float]
    state: List[float]


class UpdateEvent(BaseModel):
    """One record per update instant"""

    schema_version: int = Field(default=EVENT_SCHEMA_VERSION)
    k: int = Field(description="Iteration counter after the update")
    t: float = Field(description="Update instant in seconds")
    mode: str
    sigma: int = Field(description="Selected observer id")
    n_observers: int = Field(description="Bank size on [t_k, t_k+1)")
    mu_hat: Optional[float] = None
    monitors: List[MonitorRecord] = Field(default_factory=list)
    potentially_optimal: List[int] = Field(default_factory=list)
    new_samples: List[SampleRecord] = Field(default_factory=list)
    transition: Optional[str] = None
    discarded: List[DiscardRecord] = Field(default_factory=list)


class RectRecord(BaseModel):
    """Partition snapshot line"""

    schema_version: int = Field(default=SNAPSHOT_SCHEMA_VERSION)
    id: int
    center: List[str]
    side_exponents: List[int]
    divisions: int
    last_cost: Optional[float]
