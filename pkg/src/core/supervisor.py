"""Supervisory observer driven by the DIRECT sampling policy"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from ..models.errors import (EmptyBankError, NumericalBlowupError,
                             ObserverBlowupError, ScheduleError)
from ..models.events import (DiscardRecord, MonitorRecord, SampleRecord,
                             UpdateEvent)
from ..models.geometry import GridPoint
from ..models.observer import Mode, ObserverInstance
from ..models.scenario import ParamBox, Scenario
from ..services.neural_mass import NeuralMassModel
from ..utils.integrator import rk4_step
from ..utils.signals import InputSignal
from .direct import Partition, init_partition, termination_iterations


def denormalize(p_norm, box: ParamBox) -> np.ndarray:
    """Affine map from the unit cube to the physical parameter box"""
    if isinstance(p_norm, GridPoint):
        p_norm = p_norm.to_array()
    return box.denormalize(p_norm)


def normalize(p, box: ParamBox) -> np.ndarray:
    return box.normalize(p)


def monitor_update(mu, y_err, lam: float, dt: float, y_err_prev=None):
    """One step of d mu/dt = -lam mu + |y_err|^2

    Exact exponential decay of mu plus the trapezoidal rule on the forcing
    term; ``y_err`` carries output components on its last axis and the
    infinity norm is taken over them.

    Args:
        mu: Monitor value(s) at the start of the step
        y_err: Output error at the end of the step
        lam: Forgetting rate in 1/s
        dt: Step in seconds
        y_err_prev: Output error at the start of the step, defaults to y_err

    Returns:
        Monitor value(s) at the end of the step
    """
    if not lam > 0 or not dt > 0:
        raise ValueError("Forgetting rate and step must be positive")
    decay = math.exp(-lam * dt)
    q_end = _squared_norm(y_err)
    q_start = q_end if y_err_prev is None else _squared_norm(y_err_prev)
    result = decay * np.asarray(mu, dtype=float) + 0.5 * dt * (
        decay * q_start + q_end
    )
    finite = np.isfinite(np.atleast_1d(result))
    if not np.all(finite):
        raise NumericalBlowupError(float("nan"), np.flatnonzero(~finite))
    return float(result) if result.ndim == 0 else result


def _squared_norm(y_err) -> np.ndarray:
    y_err = np.atleast_1d(np.asarray(y_err, dtype=float))
    return np.max(np.abs(y_err), axis=-1) ** 2


def select(monitors, previous: Optional[int] = None) -> int:
    """Index of the smallest monitor, keeping ``previous`` on ties"""
    monitors = np.asarray(monitors, dtype=float)
    if monitors.size == 0:
        raise EmptyBankError("Cannot select from an empty bank")
    candidates = np.flatnonzero(monitors == monitors.min())
    if previous is not None and previous in candidates:
        return int(previous)
    return int(candidates[0])


@dataclass
class ObserverSlot:
    """Bookkeeping of one bank row; numeric state lives in the bank arrays"""

    observer_id: int
    point: GridPoint
    parameter: np.ndarray
    spawn_time: float
    rect_id: Optional[int] = None


@dataclass
class StepSample:
    """Per-step record of the supervisory observer"""

    t: float
    u: float
    y: float
    y_hat: float
    x: np.ndarray
    x_hat: np.ndarray
    p_hat: np.ndarray
    sigma: int
    n_observers: int


@dataclass
class SupervisorState:
    """Observer bank, switching signal, schedule and partition handle"""

    slots: List[ObserverSlot]
    states: np.ndarray
    monitors: np.ndarray
    output_errors: np.ndarray
    params: np.ndarray
    sampling_interval: float
    forgetting_rate: float
    k_star: int
    partition: Partition
    plant_state: np.ndarray
    sigma: int = 0
    k: int = 0
    mode: Mode = "multi"
    step: int = 0
    bound_flagged: bool = False
    bank_sizes: List[int] = field(default_factory=list)


class SupervisoryObserver:
    """Bank of neural-mass observers sampled by DIRECT"""

    def __init__(
        self,
        scenario: Scenario,
        model: Optional[NeuralMassModel] = None,
        signal: Optional[InputSignal] = None,
    ):
        """Initialize supervisory observer

        Args:
            scenario: Experiment description
            model: Plant/observer model, built from the scenario by default
            signal: Input signal, built from the scenario by default
        """
        self.scenario = scenario
        self.box = scenario.param_box
        self.model = model or NeuralMassModel(scenario.constants)
        self.signal = signal or InputSignal(scenario.input)
        self.dt = scenario.dt
        self.p_true = np.asarray(scenario.p_true, dtype=float)
        self.gains = scenario.gains
        self._next_id = 0
        self._field = None

        if scenario.k_star is not None:
            k_star = scenario.k_star
        else:
            k_star = termination_iterations(self.box.n_p, scenario.d_star)

        partition = init_partition(self.box.n_p, scenario.epsilon)
        x_hat0 = np.asarray(scenario.observer_x0, dtype=float)
        self.state = SupervisorState(
            slots=[],
            states=np.empty((0, x_hat0.size)),
            monitors=np.empty(0),
            output_errors=np.empty(0),
            params=np.empty((0, self.box.n_p)),
            sampling_interval=scenario.sampling_interval,
            forgetting_rate=scenario.forgetting_rate,
            k_star=k_star,
            partition=partition,
            plant_state=np.asarray(scenario.x0, dtype=float),
        )
        y0 = self.model.output(self.state.plant_state)
        for req in partition.pending:
            self._spawn(req.point, x_hat0, req.rect_id, 0.0, y0)

        self.initial_event = self._initial_event()
        logger.info(
            f"Supervisor ready: N(0)={len(self.state.slots)}, "
            f"k*={k_star}, T_d={scenario.sampling_interval}s"
        )
        if k_star == 0:
            discarded = self._reduce_to_selected()
            self.initial_event.mode = self.state.mode
            self.initial_event.n_observers = 1
            self.initial_event.transition = "multi->single"
            self.initial_event.discarded = discarded
        self.state.bank_sizes.append(len(self.state.slots))

    @property
    def t(self) -> float:
        return self.state.step * self.dt

    @property
    def bound_flagged(self) -> bool:
        return self.state.bound_flagged

    def _spawn(
        self,
        point: GridPoint,
        x_hat: np.ndarray,
        rect_id: Optional[int],
        t: float,
        y: float,
    ) -> ObserverSlot:
        st = self.state
        slot = ObserverSlot(
            observer_id=self._next_id,
            point=point,
            parameter=denormalize(point, self.box),
            spawn_time=t,
            rect_id=rect_id,
        )
        self._next_id += 1
        st.slots.append(slot)
        st.states = np.vstack([st.states, x_hat[None, :]])
        st.monitors = np.append(st.monitors, 0.0)
        st.output_errors = np.append(
            st.output_errors, float(self.model.output(x_hat) - y)
        )
        st.params = np.vstack([st.params, slot.parameter[None, :]])
        self._field = None
        return slot

    def _bank_field(self):
        if self._field is None:
            params = np.vstack([self.p_true[None, :], self.state.params])
            self._field = self.model.bank_vector_field(params, self.gains)
        return self._field

    def current_sample(self) -> StepSample:
        st = self.state
        y = float(self.model.output(st.plant_state))
        x_hat = st.states[st.sigma]
        return StepSample(
            t=self.t,
            u=self.signal(self.t),
            y=y,
            y_hat=float(self.model.output(x_hat)),
            x=st.plant_state.copy(),
            x_hat=x_hat.copy(),
            p_hat=st.params[st.sigma].copy(),
            sigma=st.slots[st.sigma].observer_id,
            n_observers=len(st.slots),
        )

    def advance(self) -> StepSample:
        """Integrate plant, observers and monitors over one step"""
        st = self.state
        t = self.t
        z = np.vstack([st.plant_state[None, :], st.states])
        try:
            z = rk4_step(self._bank_field(), z, t, self.dt, self.signal)
        except NumericalBlowupError as e:
            observer_rows = [r for r in e.rows if r > 0]
            if observer_rows:
                raise ObserverBlowupError(
                    st.slots[observer_rows[0] - 1].observer_id, t
                ) from e
            raise
        st.plant_state = z[0]
        st.states = z[1:]

        y = self.model.output(st.plant_state)
        errors = self.model.output(st.states) - y
        try:
            st.monitors = monitor_update(
                st.monitors,
                errors[:, None],
                st.forgetting_rate,
                self.dt,
                st.output_errors[:, None],
            )
        except NumericalBlowupError as e:
            raise ObserverBlowupError(
                st.slots[int(e.rows[0])].observer_id, t + self.dt
            ) from e
        st.output_errors = errors
        st.sigma = select(st.monitors, st.sigma)
        st.step += 1

        if not st.bound_flagged and (
            np.max(np.abs(st.plant_state)) > self.scenario.state_bound
        ):
            st.bound_flagged = True
            logger.warning(
                f"Plant state exceeded K_x={self.scenario.state_bound} "
                f"at t={self.t:.4f}s"
            )
        return self.current_sample()

    def on_update_instant(self, t_k: float) -> UpdateEvent:
        """Read window monitors, iterate DIRECT and grow or reduce the bank

        Args:
            t_k: Update instant, must equal (k+1) * T_d on the time grid

        Returns:
            Event record of this update instant
        """
        st = self.state
        expected = (st.k + 1) * st.sampling_interval
        tolerance = 0.5 * self.dt
        if abs(t_k - expected) > tolerance or abs(t_k - self.t) > tolerance:
            raise ScheduleError(
                f"Update instant {t_k}s off schedule (expected {expected}s, "
                f"simulation at {self.t}s)"
            )

        monitors = [
            MonitorRecord(
                observer_id=slot.observer_id,
                normalized=slot.point.labels(),
                mu=float(mu),
            )
            for slot, mu in zip(st.slots, st.monitors)
        ]
        event = UpdateEvent(
            k=st.k + 1,
            t=t_k,
            mode=st.mode,
            sigma=st.slots[st.sigma].observer_id,
            n_observers=len(st.slots),
            monitors=monitors,
        )

        if st.mode == "multi":
            self._iterate_direct(t_k, event)

        st.monitors = np.zeros(len(st.slots))
        st.k += 1
        event.mode = st.mode
        event.sigma = st.slots[st.sigma].observer_id
        event.n_observers = len(st.slots)
        st.bank_sizes.append(len(st.slots))
        logger.info(
            f"t_k={t_k:.3f}s k={st.k}: N={event.n_observers}, "
            f"sigma={event.sigma}, mode={st.mode}"
        )
        return event

    def _iterate_direct(self, t_k: float, event: UpdateEvent) -> None:
        st = self.state
        partition = st.partition
        costs: Dict[GridPoint, float] = {
            slot.point: float(mu) for slot, mu in zip(st.slots, st.monitors)
        }
        partition.refresh_costs(costs)
        partition.complete_pending_divisions(costs)
        event.mu_hat = partition.update_mu_hat()
        partition.iteration = st.k + 1

        rect_of = {r.center: r.id for r in partition.rects.values()}
        for slot in st.slots:
            slot.rect_id = rect_of.get(slot.point, slot.rect_id)

        if st.k + 1 >= st.k_star:
            event.transition = "multi->single"
            event.discarded = self._reduce_to_selected()
            return

        optimal = partition.identify_potentially_optimal()
        event.potentially_optimal = sorted(optimal)
        requests = partition.request_divisions(optimal)

        sigma = st.sigma
        source = st.states[sigma].copy()
        if self.scenario.reinitialize_all:
            st.states = np.repeat(source[None, :], len(st.slots), axis=0)
            st.output_errors[:] = st.output_errors[sigma]

        y = float(self.model.output(st.plant_state))
        known = {slot.point for slot in st.slots}
        for req in requests:
            if req.point in known:
                continue
            known.add(req.point)
            slot = self._spawn(req.point, source, req.rect_id, t_k, y)
            event.new_samples.append(
                SampleRecord(
                    normalized=req.point.labels(),
                    physical=slot.parameter.tolist(),
                )
            )
        logger.debug(
            f"k={st.k + 1}: potentially optimal {event.potentially_optimal}, "
            f"{len(event.new_samples)} new observers"
        )

    def _reduce_to_selected(self) -> List[DiscardRecord]:
        """Keep only the selected observer and enter single mode"""
        st = self.state
        keep = st.sigma
        discarded = []
        for i, slot in enumerate(st.slots):
            if i == keep:
                continue
            discarded.append(
                DiscardRecord(
                    observer_id=slot.observer_id,
                    physical=slot.parameter.tolist(),
                    state=st.states[i].tolist(),
                )
            )
            logger.debug(
                f"Discarding observer {slot.observer_id} at "
                f"p={slot.parameter.tolist()} x_hat={st.states[i].tolist()}"
            )
        st.slots = [st.slots[keep]]
        st.states = st.states[keep:keep + 1].copy()
        st.monitors = st.monitors[keep:keep + 1].copy()
        st.output_errors = st.output_errors[keep:keep + 1].copy()
        st.params = st.params[keep:keep + 1].copy()
        st.sigma = 0
        st.mode = "single"
        self._field = None
        logger.info(
            f"Reduced to a single observer at p={st.params[0].tolist()} "
            f"({len(discarded)} discarded)"
        )
        return discarded

    def estimates(self) -> Tuple[np.ndarray, np.ndarray]:
        """Selected parameter (physical units) and state estimate"""
        st = self.state
        if not st.slots:
            raise EmptyBankError("Bank is empty")
        return st.params[st.sigma].copy(), st.states[st.sigma].copy()

    def observers(self) -> List[ObserverInstance]:
        st = self.state
        return [
            ObserverInstance(
                observer_id=slot.observer_id,
                point=slot.point.labels(),
                parameter=slot.parameter.tolist(),
                state=st.states[i].tolist(),
                monitor=float(st.monitors[i]),
                spawn_time=slot.spawn_time,
                rect_id=slot.rect_id,
            )
            for i, slot in enumerate(st.slots)
        ]

    def _initial_event(self) -> UpdateEvent:
        st = self.state
        return UpdateEvent(
            k=0,
            t=0.0,
            mode=st.mode,
            sigma=st.slots[st.sigma].observer_id,
            n_observers=len(st.slots),
            new_samples=[
                SampleRecord(
                    normalized=slot.point.labels(),
                    physical=slot.parameter.tolist(),
                )
                for slot in st.slots
            ],
        )
