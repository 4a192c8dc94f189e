"""Experiment harness running one scenario end to end"""

import time
from pathlib import Path
from typing import List, Optional

import numpy as np
from loguru import logger

import config

from ..models.events import UpdateEvent
from ..models.metrics import RunMetrics
from ..models.scenario import Scenario
from ..services.artifact_service import ArtifactService
from ..services.metrics_service import compute_metrics
from ..services.neural_mass import STATE_DIM, NeuralMassModel
from ..services.scenario_service import load_scenario
from ..utils.integrator import Trajectory, TrajectoryRecorder
from ..utils.signals import InputSignal
from .supervisor import StepSample, SupervisoryObserver

TRAJECTORY_COLUMNS = (
    ["u", "y", "y_hat"]
    + [f"x_{i}" for i in range(STATE_DIM)]
    + [f"xhat_{i}" for i in range(STATE_DIM)]
    + ["phat_0", "phat_1", "p_err", "x_err", "sigma", "n_observers"]
)


class ScenarioRunner:
    """Runs the supervisory observer on one scenario and writes artifacts"""

    def __init__(self, scenario: Scenario, write_snapshots: bool = True):
        """Initialize scenario runner

        Args:
            scenario: Validated experiment description
            write_snapshots: Dump the partition after every update instant
        """
        self.scenario = scenario
        self.write_snapshots = write_snapshots
        self.artifacts = ArtifactService(scenario.output_path)
        self.model = NeuralMassModel(scenario.constants)
        self.signal = InputSignal(scenario.input)
        self.p_true = np.asarray(scenario.p_true, dtype=float)

        self.supervisor: Optional[SupervisoryObserver] = None
        self.trajectory: Optional[Trajectory] = None
        self.events: List[UpdateEvent] = []
        self.metrics: Optional[RunMetrics] = None
        self.error: Optional[Exception] = None

    def run(self) -> bool:
        """Run the complete experiment

        Returns:
            True if successful, False otherwise
        """
        start_time = time.time()
        logger.info(
            f"Starting supervisory observer run in {self.scenario.output_dir}"
        )

        try:
            # Step 1: Simulate plant and observer bank
            self.simulate()

            # Step 2: Metrics on the full-resolution trajectory
            self.metrics = compute_metrics(
                self.trajectory,
                self.events,
                self.scenario.convergence_threshold,
                self.scenario.sampling_interval,
            )

            # Step 3: Write artifacts
            self.artifacts.dump_trajectory(
                self.trajectory, self.scenario.decimation
            )
            self.artifacts.dump_events(self.events)
            self.artifacts.dump_metrics(self.metrics)

            # Step 4: Log final results
            self._log_final_results(start_time)
            return True

        except Exception as e:
            self.error = e
            logger.error(f"Fatal error in scenario run: {e}")
            return False

    def simulate(self) -> Trajectory:
        """Integrate over [0, t_f], firing update instants every T_d"""
        sc = self.scenario
        self.supervisor = SupervisoryObserver(sc, self.model, self.signal)
        self.events = [self.supervisor.initial_event]
        recorder = TrajectoryRecorder(sc.n_steps + 1, sc.dt, TRAJECTORY_COLUMNS)
        recorder.record(0.0, self._row(self.supervisor.current_sample()))
        self._snapshot(0)

        window = sc.steps_per_window
        for step in range(1, sc.n_steps + 1):
            sample = self.supervisor.advance()
            if step % window == 0 and step < sc.n_steps:
                event = self.supervisor.on_update_instant(step * sc.dt)
                self.events.append(event)
                self._snapshot(event.k)
                sample = self.supervisor.current_sample()
            recorder.record(sample.t, self._row(sample))

        self.trajectory = recorder.finish()
        self.trajectory.bound_flagged = self.supervisor.bound_flagged
        return self.trajectory

    def _row(self, sample: StepSample) -> dict:
        row = {
            "u": sample.u,
            "y": sample.y,
            "y_hat": sample.y_hat,
            "phat_0": sample.p_hat[0],
            "phat_1": sample.p_hat[1],
            "p_err": float(np.max(np.abs(sample.p_hat - self.p_true))),
            "x_err": float(np.max(np.abs(sample.x_hat - sample.x))),
            "sigma": sample.sigma,
            "n_observers": sample.n_observers,
        }
        for i in range(STATE_DIM):
            row[f"x_{i}"] = sample.x[i]
            row[f"xhat_{i}"] = sample.x_hat[i]
        return row

    def _snapshot(self, k: int) -> None:
        if not self.write_snapshots or self.supervisor.state.mode != "multi":
            return
        self.artifacts.dump_snapshot(
            k, self.supervisor.state.partition.snapshot()
        )

    def _log_final_results(self, start_time: float) -> None:
        """Log final run results

        Args:
            start_time: Start time for performance calculation
        """
        elapsed_time = time.time() - start_time
        m = self.metrics
        conv = "none" if m.convergence_time is None else (
            f"{m.convergence_time:.3f}s"
        )

        logger.info("Run Summary:")
        logger.info(f"  • Convergence time (<= {m.threshold}): {conv}")
        logger.info(f"  • Average observers: {m.average_observers:.2f}")
        logger.info(f"  • Final parameter error: {m.final_param_error:.4g}")
        logger.info(
            f"  • Normalized state error: {m.normalized_state_error:.4g}"
        )
        logger.info(f"  • Update instants: {len(self.events) - 1}")

        if m.bound_flagged:
            logger.warning("Plant state exceeded the configured bound K_x")

        logger.success(f"Run completed in {elapsed_time:.2f} seconds")


def run_scenario(path: Path, write_snapshots: bool = True) -> RunMetrics:
    """Load a scenario file, run it and return its metrics

    Raises the exception that stopped the run, unchanged.
    """
    runner = ScenarioRunner(load_scenario(path), write_snapshots)
    if not runner.run():
        raise runner.error
    return runner.metrics


def recompute_metrics(
    run_folder: Path, threshold: Optional[float] = None
) -> RunMetrics:
    """Metrics of an existing run directory from its CSV and event log

    Uses the decimated trajectory on disk, so the convergence time is
    resolved to the export grid.
    """
    artifacts = ArtifactService(run_folder)
    trajectory = artifacts.load_trajectory()
    events = artifacts.load_events()
    previous = {}
    try:
        previous = artifacts.load_metrics()
    except FileNotFoundError:
        pass
    if threshold is None:
        threshold = float(
            previous.get("threshold", config.CONVERGENCE_THRESHOLD)
        )
    trajectory.bound_flagged = previous.get("bound_flagged") == "true"
    interval = events[1].t - events[0].t if len(events) > 1 else (
        float(trajectory.times[-1]) or 1.0
    )
    return compute_metrics(trajectory, events, threshold, interval)
