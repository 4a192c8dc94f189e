"""DIRECT on closed-form test costs

Costs are evaluated on the exact coordinates of each sample and rounded to
float only once, on the result.
"""

from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

import config

from ..core.direct import (Partition, init_partition, min_distance_to_samples,
                           termination_iterations)
from ..models.errors import InvalidDimensionError, UnknownFunctionError
from ..models.geometry import GridPoint
from ..models.metrics import DirectStaticResult, IterationLog

# Point and target are sequences of Fractions or of floats
CostFunction = Callable[[Sequence, Sequence], float]


def sphere(p: Sequence, target: Sequence) -> float:
    return float(sum((a - b) ** 2 for a, b in zip(p, target)))


def shifted_inf_norm(p: Sequence, target: Sequence) -> float:
    return float(max(abs(a - b) for a, b in zip(p, target)))


def constant(p: Sequence, target: Sequence) -> float:
    return 1.0


def opposite_corner(p: Sequence, target: Sequence) -> float:
    """Minimized at the cube corner farthest from ``target``"""
    corner = [1 if b < 0.5 else 0 for b in target]
    return float(sum((a - c) ** 2 for a, c in zip(p, corner)))


COST_FUNCTIONS: Dict[str, CostFunction] = {
    "sphere": sphere,
    "shifted-inf-norm": shifted_inf_norm,
    "constant": constant,
    "opposite-corner": opposite_corner,
}

DEFAULT_TARGETS = {
    "sphere": 0.5,
    "shifted-inf-norm": 0.3,
    "constant": 0.5,
    "opposite-corner": 0.2,
}


def get_cost_function(name: str) -> CostFunction:
    try:
        return COST_FUNCTIONS[name]
    except KeyError:
        raise UnknownFunctionError(
            f"Unknown test function '{name}', expected one of "
            f"{sorted(COST_FUNCTIONS)}"
        ) from None


def exact_target(target: Sequence[float]) -> Tuple[Fraction, ...]:
    return tuple(Fraction(float(v)) for v in target)


def _evaluate(
    cost: CostFunction,
    points: Sequence[GridPoint],
    target: Tuple[Fraction, ...],
) -> Dict[GridPoint, float]:
    return {point: cost(point.fractions(), target) for point in points}


def run_static_direct(
    cost: CostFunction,
    n_p: int,
    iterations: int,
    target: np.ndarray,
    eps: float = config.STATIC_EPSILON,
    stop_distance: Optional[float] = None,
) -> Tuple[Partition, List[IterationLog]]:
    """Iterate DIRECT with immediate cost evaluation

    Iteration 1 completes the initial trisection of the root; every
    further iteration identifies potentially-optimal rects, samples and
    divides them.

    Args:
        cost: Cost function of (exact point, exact target)
        n_p: Dimension
        iterations: Number of completed iterations, zero keeps only the
            initial sample requests
        target: Target point, converted to exact fractions for the cost
        eps: Improvement filter
        stop_distance: Stop early once a sample is this close to target

    Returns:
        Final partition and per-iteration history
    """
    if iterations < 0:
        raise ValueError(f"Iteration count cannot be negative: {iterations}")
    partition = init_partition(n_p, eps)
    history: List[IterationLog] = []
    optimal: List[int] = []
    points = [req.point for req in partition.pending]
    distance = min_distance_to_samples(target, points)
    exact = exact_target(target)

    while partition.iteration < iterations:
        partition.complete_pending_divisions(_evaluate(cost, points, exact))
        partition.update_mu_hat()
        partition.iteration += 1
        history.append(
            IterationLog(
                k=partition.iteration,
                n_samples=len(partition.rects),
                potentially_optimal=optimal,
                new_points=len(points),
                min_distance=distance,
                best_cost=partition.best_rect().last_cost,
            )
        )
        if partition.iteration == iterations:
            break
        if stop_distance is not None and distance <= stop_distance:
            break
        optimal = sorted(partition.identify_potentially_optimal())
        points = [req.point for req in partition.request_divisions(optimal)]
        if points:
            distance = min(distance, min_distance_to_samples(target, points))
    return partition, history


def direct_static(
    function: str,
    n_p: int,
    iterations: Optional[int] = None,
    d_star: Optional[float] = None,
    target: Optional[Sequence[float]] = None,
    eps: float = config.STATIC_EPSILON,
) -> DirectStaticResult:
    """Run DIRECT on a registered test function

    Args:
        function: Name in ``COST_FUNCTIONS``
        n_p: Dimension
        iterations: Iteration count, derived from ``d_star`` when omitted
        d_star: Resolution used when ``iterations`` is omitted
        target: Target point, a per-function default when omitted
        eps: Improvement filter

    Returns:
        Best point, final distance to the target and iteration history
    """
    cost = get_cost_function(function)
    if n_p < 1:
        raise InvalidDimensionError(f"Invalid dimension n_p={n_p}")
    if target is None:
        target_arr = np.full(n_p, DEFAULT_TARGETS[function])
    else:
        target_arr = np.asarray(target, dtype=float)
        if target_arr.shape != (n_p,):
            raise ValueError(f"Target must have {n_p} coordinates")
    if iterations is None:
        iterations = termination_iterations(n_p, d_star or config.D_STAR)

    logger.info(
        f"Static DIRECT: {function} n_p={n_p}, {iterations} iterations, "
        f"target={target_arr.tolist()}"
    )
    partition, history = run_static_direct(
        cost, n_p, iterations, target_arr, eps
    )
    samples = partition.sample_points()
    distance = min_distance_to_samples(target_arr, samples)
    if partition.rects and history:
        best = partition.best_rect()
        best_point, best_cost = best.center.to_array(), best.last_cost
    else:
        center = GridPoint.center(n_p)
        best_point = center.to_array()
        best_cost = cost(center.fractions(), exact_target(target_arr))

    logger.success(
        f"Static DIRECT done: {len(samples)} samples, best cost "
        f"{best_cost:.6g}, distance to target {distance:.6g}"
    )
    return DirectStaticResult(
        function=function,
        n_p=n_p,
        iterations=iterations,
        target=target_arr.tolist(),
        best_point=best_point.tolist(),
        best_cost=best_cost,
        final_distance=distance,
        history=history,
    )
