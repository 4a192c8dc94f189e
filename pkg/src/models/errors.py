"""Exception hierarchy for the supervisory observer toolkit"""

from typing import Optional, Sequence


class SupervisorError(Exception):
    """Base class for all toolkit errors"""


class InvalidDimensionError(SupervisorError, ValueError):
    """Parameter-space dimension must be at least one"""


class InvalidResolutionError(SupervisorError, ValueError):
    """Requested sample resolution must be positive"""


class InvalidCostError(SupervisorError, ValueError):
    """Cost values must be finite and nonnegative"""


class DomainError(SupervisorError, ValueError):
    """Point lies outside the normalized unit cube"""


class ConfigError(SupervisorError, ValueError):
    """Scenario configuration is invalid"""


class IncompleteEvaluationError(SupervisorError):
    """A pending sample request has no cost value"""


class DoubleDivisionError(SupervisorError):
    """A rectangle was asked to divide while a division is pending"""


class EmptyPartitionError(SupervisorError):
    """Operation needs at least one rectangle"""


class EmptySamplesError(SupervisorError):
    """Operation needs at least one sample point"""


class EmptyBankError(SupervisorError):
    """Operation needs at least one live observer"""


class EmptyTrajectoryError(SupervisorError):
    """Metrics need a recorded trajectory"""


class UnknownFunctionError(SupervisorError, KeyError):
    """Static test cost is not registered"""


class ScheduleError(SupervisorError):
    """Update instant does not fall on the configured schedule"""


class NumericalBlowupError(SupervisorError, ArithmeticError):
    """Non-finite derivative or state during integration"""

    def __init__(self, t: float, rows: Optional[Sequence[int]] = None):
        self.t = t
        self.rows = list(rows) if rows is not None else []
        detail = f" (rows {self.rows})" if self.rows else ""
        super().__init__(f"Numerical blowup at t={t:.6f}s{detail}")


class ObserverBlowupError(NumericalBlowupError):
    """Blowup attributed to a specific observer of the bank"""

    def __init__(self, observer_id: int, t: float):
        self.observer_id = observer_id
        SupervisorError.__init__(
            self, f"Observer {observer_id} blew up at t={t:.6f}s"
        )
        self.t = t
        self.rows = [observer_id]
