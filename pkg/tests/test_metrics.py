"""Run metrics from recorded trajectories"""

import numpy as np
import pytest

from src.models.errors import EmptyTrajectoryError
from src.models.events import UpdateEvent
from src.services.metrics_service import (average_bank_size, compute_metrics,
                                          convergence_time)
from src.utils.integrator import Trajectory


def make_trajectory(t_final, p_err):
    times = np.arange(0.0, t_final + 0.5, 1.0)
    columns = {f"x_{i}": np.sin(times + i) for i in range(6)}
    columns["p_err"] = np.asarray(p_err(times), dtype=float)
    columns["x_err"] = np.full_like(times, 0.1)
    return Trajectory(dt=1.0, times=times, columns=columns)


def events(sizes, interval=10.0):
    return [
        UpdateEvent(k=k, t=k * interval, mode="multi", sigma=0, n_observers=n)
        for k, n in enumerate(sizes)
    ]


def test_constant_bank_average():
    trajectory = make_trajectory(30.0, lambda t: np.full_like(t, 0.1))
    metrics = compute_metrics(trajectory, events([5, 5, 5]), 0.72, 10.0)
    assert metrics.average_observers == 5.0


def test_growing_bank_average():
    assert average_bank_size([5, 9, 13], 30.0, 10.0) == 9.0


def test_converged_from_start():
    trajectory = make_trajectory(30.0, lambda t: np.full_like(t, 0.1))
    metrics = compute_metrics(trajectory, events([5, 5, 5]), 0.72, 10.0)
    assert metrics.convergence_time == 0.0


def test_convergence_time_is_last_crossing():
    trajectory = make_trajectory(100.0, lambda t: np.where(t < 45, 1.0, 0.5))
    metrics = compute_metrics(trajectory, events([5] * 10), 0.72, 10.0)
    assert metrics.convergence_time == 45.0
    assert metrics.final_param_error == 0.5


def test_excursion_after_crossing_moves_convergence_time():
    times = np.arange(0.0, 11.0)
    errors = np.array([1, 1, 0.1, 0.1, 0.9, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1])
    assert convergence_time(times, errors, 0.72) == 5.0


def test_never_converges():
    trajectory = make_trajectory(20.0, lambda t: np.full_like(t, 2.0))
    metrics = compute_metrics(trajectory, events([5, 5]), 0.72, 10.0)
    assert metrics.convergence_time is None
    assert "convergence_time=none" in metrics.to_lines()


def test_normalized_state_error():
    trajectory = make_trajectory(30.0, lambda t: np.full_like(t, 0.1))
    plant_norm = np.max(np.abs(trajectory.block("x")), axis=1)
    metrics = compute_metrics(trajectory, events([5, 5, 5]), 0.72, 10.0)
    assert metrics.normalized_state_error == pytest.approx(
        0.1 / (plant_norm.max() - plant_norm.min())
    )


def test_empty_trajectory():
    empty = Trajectory(dt=1.0, times=np.array([]), columns={})
    with pytest.raises(EmptyTrajectoryError):
        compute_metrics(empty, [], 0.72, 10.0)
