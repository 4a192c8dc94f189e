"""Observer bank records"""

from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

Mode = Literal["multi", "single"]


class ObserverInstance(BaseModel):
    """Snapshot of one running state observer"""

    observer_id: int = Field(description="Stable identifier within a run")
    point: List[str] = Field(description="Exact normalized sample point")
    parameter: List[float] = Field(description="Physical parameter vector")
    state: List[float] = Field(description="State estimate")
    monitor: float = Field(default=0.0, description="Monitoring signal mu")
    spawn_time: float = Field(description="Spawn time in seconds")
    rect_id: Optional[int] = Field(
        default=None, description="Partition rectangle centered on the point"
    )

    model_config = {"frozen": True}

    @field_validator("monitor")
    @classmethod
    def validate_monitor(cls, v):
        """Monitors are nonnegative"""
        if v < 0:
            raise ValueError("Monitoring signal cannot be negative")
        return v
