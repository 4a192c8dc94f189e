"""Summary metrics of a supervisory-observer run"""

import math
from typing import Optional, Sequence

import numpy as np
from loguru import logger

from ..models.errors import EmptyTrajectoryError
from ..models.events import UpdateEvent
from ..models.metrics import RunMetrics
from ..utils.integrator import Trajectory


def convergence_time(
    times: np.ndarray, errors: np.ndarray, threshold: float
) -> Optional[float]:
    """Earliest T* such that errors stay <= threshold for all t >= T*

    Returns None when the last recorded error still exceeds the threshold.
    """
    above = np.flatnonzero(errors > threshold)
    if above.size == 0:
        return float(times[0])
    last = int(above[-1])
    if last == len(times) - 1:
        return None
    return float(times[last + 1])


def average_bank_size(
    bank_sizes: Sequence[int], t_final: float, sampling_interval: float
) -> float:
    """Mean of N(t_k) over the update instants of [0, t_final)"""
    n_windows = max(1, math.ceil(t_final / sampling_interval - 1e-9))
    sizes = list(bank_sizes)[:n_windows]
    if not sizes:
        raise EmptyTrajectoryError("No bank sizes recorded")
    if len(sizes) < n_windows:
        sizes.extend([sizes[-1]] * (n_windows - len(sizes)))
    return float(sum(sizes)) / n_windows


def compute_metrics(
    trajectory: Trajectory,
    events: Sequence[UpdateEvent],
    threshold: float,
    sampling_interval: float,
) -> RunMetrics:
    """Convergence time, average bank size and final errors

    Args:
        trajectory: Recorded run with ``p_err``, ``x_err`` and ``x_i`` columns
        events: Update-event records, the t=0 record first
        threshold: Parameter-error threshold of the convergence time
        sampling_interval: T_d in seconds

    Returns:
        Run metrics
    """
    if len(trajectory) == 0:
        raise EmptyTrajectoryError("Trajectory has no records")
    times = trajectory.times
    p_err = trajectory.column("p_err")
    x_err = trajectory.column("x_err")

    plant_norm = np.max(np.abs(trajectory.block("x")), axis=1)
    spread = float(plant_norm.max() - plant_norm.min())
    final_x_err = float(x_err[-1])
    normalized = final_x_err / spread if spread > 0 else final_x_err

    t_final = float(times[-1])
    bank_sizes = [e.n_observers for e in sorted(events, key=lambda e: e.t)]
    if t_final > 0:
        average = average_bank_size(bank_sizes, t_final, sampling_interval)
    else:
        average = float(bank_sizes[0]) if bank_sizes else 1.0

    metrics = RunMetrics(
        convergence_time=convergence_time(times, p_err, threshold),
        threshold=threshold,
        average_observers=average,
        final_param_error=float(p_err[-1]),
        normalized_state_error=normalized,
        bound_flagged=trajectory.bound_flagged,
    )
    if metrics.convergence_time is None:
        logger.warning(
            f"Parameter error still above {threshold} at t={t_final}s"
        )
    logger.debug(f"Metrics: {metrics.model_dump()}")
    return metrics
