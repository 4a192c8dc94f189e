"""DIRECT partition, supervisory observer and run harness"""

from .direct import Partition, init_partition, termination_iterations
from .supervisor import SupervisoryObserver, monitor_update, select
from .runner import ScenarioRunner, run_scenario

__all__ = [
    "Partition",
    "init_partition",
    "termination_iterations",
    "SupervisoryObserver",
    "monitor_update",
    "select",
    "ScenarioRunner",
    "run_scenario",
]
