"""Fixed-step RK4 integration and trajectory recording"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from loguru import logger

from ..models.errors import NumericalBlowupError
from .signals import InputSignal

FieldFunc = Callable[[np.ndarray, float, float], np.ndarray]


@dataclass(frozen=True)
class VectorField:
    """Side-effect free map (state, t, u) -> state derivative"""

    func: FieldFunc
    dimension: int
    name: str = "field"

    def __call__(self, x: np.ndarray, t: float, u: float) -> np.ndarray:
        return self.func(x, t, u)


def _finite_or_raise(k: np.ndarray, t: float) -> np.ndarray:
    if not np.all(np.isfinite(k)):
        if k.ndim > 1:
            bad = ~np.isfinite(k).reshape(k.shape[0], -1).all(axis=1)
            raise NumericalBlowupError(t, np.flatnonzero(bad).tolist())
        raise NumericalBlowupError(t)
    return k


def rk4_step(
    field: VectorField,
    x: np.ndarray,
    t: float,
    dt: float,
    inputs: InputSignal,
) -> np.ndarray:
    """Classical fourth-order Runge-Kutta step

    Args:
        field: Vector field to integrate
        x: State at time t (any array shape the field accepts)
        t: Current time in seconds
        dt: Step size in seconds
        inputs: Input signal sampled at t, t+dt/2 and t+dt

    Returns:
        State at t+dt
    """
    if not dt > 0:
        raise ValueError(f"Step size must be positive, got {dt}")
    if x.shape[-1] != field.dimension:
        raise ValueError(
            f"State dimension {x.shape[-1]} does not match {field.name} "
            f"({field.dimension})"
        )
    half = 0.5 * dt
    u0, u_half, u1 = inputs(t), inputs(t + half), inputs(t + dt)
    k1 = _finite_or_raise(field(x, t, u0), t)
    k2 = _finite_or_raise(field(x + half * k1, t + half, u_half), t)
    k3 = _finite_or_raise(field(x + half * k2, t + half, u_half), t)
    k4 = _finite_or_raise(field(x + dt * k3, t + dt, u1), t)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass
class Trajectory:
    """Uniform time grid with named per-step signal columns"""

    dt: float
    times: np.ndarray
    columns: Dict[str, np.ndarray] = field(default_factory=dict)
    bound_flagged: bool = False

    def __len__(self) -> int:
        return len(self.times)

    @property
    def names(self) -> List[str]:
        return list(self.columns)

    def column(self, name: str) -> np.ndarray:
        return self.columns[name]

    def block(self, prefix: str) -> np.ndarray:
        """Stack columns named ``prefix_0``, ``prefix_1``, ... as a matrix"""
        names = sorted(
            (
                n
                for n in self.columns
                if n.rsplit("_", 1)[0] == prefix
                and n.rsplit("_", 1)[1].isdigit()
            ),
            key=lambda n: int(n.rsplit("_", 1)[1]),
        )
        return np.column_stack([self.columns[n] for n in names])

    def decimated(self, every: int) -> "Trajectory":
        index = np.arange(0, len(self.times), every)
        if index[-1] != len(self.times) - 1:
            index = np.append(index, len(self.times) - 1)
        return Trajectory(
            dt=self.dt * every,
            times=self.times[index],
            columns={k: v[index] for k, v in self.columns.items()},
        )

    def to_csv(self, path: Path) -> Path:
        """Header of signal names, one row per grid point, 17 digits"""
        path.parent.mkdir(parents=True, exist_ok=True)
        header = ",".join(["t"] + self.names)
        data = np.column_stack([self.times] + list(self.columns.values()))
        np.savetxt(path, data, fmt="%.17g", delimiter=",", header=header,
                   comments="")
        return path

    @classmethod
    def from_csv(cls, path: Path) -> "Trajectory":
        with open(path, "r", encoding="utf-8") as f:
            names = f.readline().strip().split(",")
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        times = data[:, 0]
        dt = float(times[1] - times[0]) if len(times) > 1 else 0.0
        columns = {name: data[:, i + 1] for i, name in enumerate(names[1:])}
        return cls(dt=dt, times=times, columns=columns)


class TrajectoryRecorder:
    """Preallocated column storage filled one grid point at a time"""

    def __init__(self, n_records: int, dt: float, names: Sequence[str]):
        self.dt = dt
        self.times = np.zeros(n_records)
        self.columns = {name: np.zeros(n_records) for name in names}
        self._count = 0

    def record(self, t: float, values: Dict[str, float]) -> None:
        i = self._count
        self.times[i] = t
        for name, value in values.items():
            self.columns[name][i] = value
        self._count += 1

    def finish(self) -> Trajectory:
        n = self._count
        return Trajectory(
            dt=self.dt,
            times=self.times[:n].copy(),
            columns={k: v[:n].copy() for k, v in self.columns.items()},
        )


def simulate(
    field: VectorField,
    x0,
    inputs: InputSignal,
    horizon: float,
    dt: float,
    state_bound: Optional[float] = None,
) -> Trajectory:
    """Integrate ``field`` from x0 over [0, horizon] on a uniform grid

    Args:
        field: Vector field to integrate
        x0: Initial state
        inputs: Input signal
        horizon: Positive multiple of dt, in seconds
        dt: Step size in seconds
        state_bound: Optional K_x; exceeding it is flagged, not fatal

    Returns:
        Trajectory with ``x_i`` state columns and the input ``u``
    """
    if not dt > 0 or not horizon > 0:
        raise ValueError("horizon and dt must be positive")
    n_steps = int(round(horizon / dt))
    if abs(n_steps * dt - horizon) > 1e-9 * horizon:
        raise ValueError(f"horizon {horizon} is not a multiple of dt {dt}")

    x = np.array(x0, dtype=float)
    names = [f"x_{i}" for i in range(field.dimension)] + ["u"]
    recorder = TrajectoryRecorder(n_steps + 1, dt, names)
    flagged = False

    def _record(step: int, state: np.ndarray) -> None:
        t = step * dt
        values = {f"x_{i}": v for i, v in enumerate(state)}
        values["u"] = inputs(t)
        recorder.record(t, values)

    _record(0, x)
    for step in range(n_steps):
        x = rk4_step(field, x, step * dt, dt, inputs)
        if state_bound is not None and not flagged:
            if np.max(np.abs(x)) > state_bound:
                flagged = True
                logger.warning(
                    f"State bound {state_bound} exceeded at "
                    f"t={(step + 1) * dt:.4f}s in {field.name}"
                )
        _record(step + 1, x)

    trajectory = recorder.finish()
    trajectory.bound_flagged = flagged
    return trajectory
