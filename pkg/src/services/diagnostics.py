"""Excitation and contraction diagnostics on fixed observer banks"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from loguru import logger
from scipy.integrate import cumulative_trapezoid

from ..models.metrics import ContractionReport, PERow
from ..models.scenario import GainsSpec, Scenario
from ..utils.integrator import rk4_step
from ..utils.signals import InputSignal
from .neural_mass import NeuralMassModel


@dataclass
class FixedBankResult:
    """Output and state errors of a bank that never changes"""

    times: np.ndarray
    output_errors: np.ndarray
    state_errors: np.ndarray
    bound_flagged: bool


def simulate_fixed_bank(
    model: NeuralMassModel,
    p_true: Sequence[float],
    params: np.ndarray,
    x0: Sequence[float],
    x_hat0: Sequence[float],
    signal: InputSignal,
    horizon: float,
    dt: float,
    gains: GainsSpec,
    state_bound: Optional[float] = None,
) -> FixedBankResult:
    """Integrate the plant with one observer per row of ``params``

    Args:
        model: Plant/observer model
        p_true: Plant parameter
        params: Observer parameters, one row each
        x0: Plant initial state
        x_hat0: Initial state of every observer
        signal: Input signal
        horizon: Multiple of dt, in seconds
        dt: Step size in seconds
        gains: Observer gains
        state_bound: Optional K_x flag level

    Returns:
        Per-step output and state errors of every observer
    """
    params = np.atleast_2d(np.asarray(params, dtype=float))
    n = params.shape[0]
    n_steps = int(round(horizon / dt))
    field = model.bank_vector_field(
        np.vstack([np.asarray(p_true, dtype=float)[None, :], params]), gains
    )
    z = np.vstack(
        [np.asarray(x0, dtype=float)[None, :],
         np.repeat(np.asarray(x_hat0, dtype=float)[None, :], n, axis=0)]
    )
    times = np.arange(n_steps + 1) * dt
    output_errors = np.zeros((n_steps + 1, n))
    state_errors = np.zeros((n_steps + 1, n))
    flagged = False

    def _record(step: int) -> None:
        output_errors[step] = model.output(z[1:]) - model.output(z[0])
        state_errors[step] = np.max(np.abs(z[1:] - z[0]), axis=1)

    _record(0)
    for step in range(n_steps):
        z = rk4_step(field, z, step * dt, dt, signal)
        if state_bound is not None and not flagged:
            flagged = bool(np.max(np.abs(z[0])) > state_bound)
        _record(step + 1)
    return FixedBankResult(times, output_errors, state_errors, flagged)


def default_mismatches(scenario: Scenario) -> List[np.ndarray]:
    """Offsets of one sixth of the box width along each axis and diagonal"""
    width = scenario.param_box.width / 6.0
    offsets = []
    for d in range(scenario.param_box.n_p):
        for sign in (-1.0, 1.0):
            offset = np.zeros(scenario.param_box.n_p)
            offset[d] = sign * width[d]
            offsets.append(offset)
    offsets.append(width.copy())
    offsets.append(-width)
    return offsets


def pe_diagnostic(
    scenario: Scenario,
    mismatches: Optional[Sequence[Sequence[float]]] = None,
    window: Optional[float] = None,
    horizon: Optional[float] = None,
) -> List[PERow]:
    """Windowed output-error energy of mismatched observers

    For every parameter offset, runs an observer started at the plant's
    initial state and reports the minimum over time of the integral of
    |y_err|^2 across a sliding window. Values bounded away from zero
    indicate the input is exciting enough to tell the parameters apart.

    Args:
        scenario: Plant, input and gains
        mismatches: Physical offsets from p_true
        window: Sliding window length, T_d by default
        horizon: Simulated horizon, two windows by default

    Returns:
        One row per offset
    """
    window = window or scenario.sampling_interval
    horizon = horizon or 2.0 * window
    if window > horizon:
        raise ValueError("PE window longer than the horizon")
    offsets = [
        np.asarray(m, dtype=float)
        for m in (mismatches if mismatches is not None
                  else default_mismatches(scenario))
    ]
    p_true = np.asarray(scenario.p_true, dtype=float)
    model = NeuralMassModel(scenario.constants)

    result = simulate_fixed_bank(
        model,
        p_true,
        np.array([p_true + m for m in offsets]),
        scenario.x0,
        scenario.x0,
        InputSignal(scenario.input),
        horizon,
        scenario.dt,
        scenario.gains,
        scenario.state_bound,
    )
    energy = cumulative_trapezoid(
        result.output_errors**2, result.times, axis=0, initial=0.0
    )
    w = int(round(window / scenario.dt))
    windowed = energy[w:] - energy[:-w]

    rows = []
    for i, offset in enumerate(offsets):
        row = PERow(
            mismatch=offset.tolist(),
            mismatch_norm=float(np.max(np.abs(offset))),
            min_energy=float(windowed[:, i].min()),
        )
        logger.info(
            f"PE: mismatch {row.mismatch} -> min window energy "
            f"{row.min_energy:.6g}"
        )
        rows.append(row)
    return rows


def contraction_check(
    scenario: Scenario,
    horizon: Optional[float] = None,
    tolerance: float = 1e-3,
) -> ContractionReport:
    """Check that a matched observer forgets its initial error

    Args:
        scenario: Plant, input, gains, initial states and settle time
        horizon: Simulated horizon, twice the settle time by default
        tolerance: Required error reduction relative to the initial error

    Returns:
        Settling report of the state error
    """
    horizon = horizon or 2.0 * scenario.settle_time
    model = NeuralMassModel(scenario.constants)
    result = simulate_fixed_bank(
        model,
        scenario.p_true,
        np.asarray(scenario.p_true, dtype=float),
        scenario.x0,
        scenario.observer_x0,
        InputSignal(scenario.input),
        horizon,
        scenario.dt,
        scenario.gains,
        scenario.state_bound,
    )
    errors = result.state_errors[:, 0]
    initial = float(errors[0])
    target = tolerance * initial

    above = np.flatnonzero(errors > target)
    if above.size == 0:
        settled_at = 0.0
    elif above[-1] == len(errors) - 1:
        settled_at = None
    else:
        settled_at = float(result.times[above[-1] + 1])

    report = ContractionReport(
        initial_error=initial,
        final_error=float(errors[-1]),
        settle_time=scenario.settle_time,
        settled_at=settled_at,
        settled=settled_at is not None and settled_at <= scenario.settle_time,
        bound_flagged=result.bound_flagged,
    )
    if report.settled:
        logger.success(f"Matched observer settled at t={settled_at}s")
    else:
        logger.warning(
            f"Matched observer did not settle within {scenario.settle_time}s "
            f"(final error {report.final_error:.3g})"
        )
    return report
