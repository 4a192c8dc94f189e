"""Data models for scenarios, geometry, events and metrics"""

from .geometry import GridPoint, HyperRect, SampleRequest
from .scenario import Scenario
from .events import UpdateEvent
from .metrics import RunMetrics

__all__ = [
    "GridPoint",
    "HyperRect",
    "SampleRequest",
    "Scenario",
    "UpdateEvent",
    "RunMetrics",
]
