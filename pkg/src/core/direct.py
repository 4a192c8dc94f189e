"""DIRECT partition of the normalized parameter cube

Cost values are supplied from outside through a request/report protocol:
``request_divisions`` records pending sample points, the caller evaluates
them (statically, or by running observers for one window) and hands the
values back to ``complete_pending_divisions``.
"""

import math
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set

import numpy as np
from loguru import logger

from ..models.errors import (DoubleDivisionError, EmptyPartitionError,
                             EmptySamplesError, IncompleteEvaluationError,
                             InvalidCostError, InvalidDimensionError,
                             InvalidResolutionError)
from ..models.events import RectRecord
from ..models.geometry import GridPoint, HyperRect, SampleRequest


class Partition:
    """Rectangles tiling [0,1]^n_p plus the pending sample requests"""

    def __init__(self, n_p: int, eps: float = 1e-5):
        """Initialize an empty partition

        Args:
            n_p: Dimension of the parameter space
            eps: Improvement filter of the potentially-optimal test
        """
        if n_p < 1:
            raise InvalidDimensionError(f"Invalid dimension n_p={n_p}")
        if eps < 0:
            raise ValueError("eps cannot be negative")
        self.n_p = n_p
        self.eps = eps
        self.rects: Dict[int, HyperRect] = {}
        self.pending: List[SampleRequest] = []
        self.iteration = 0
        self.mu_hat: Optional[float] = None
        self._next_id = 0

    def _new_rect(
        self,
        center: GridPoint,
        side_exponents: Sequence[int],
        cost: Optional[float] = None,
    ) -> HyperRect:
        rect = HyperRect(
            id=self._next_id,
            center=center,
            side_exponents=tuple(side_exponents),
            last_cost=cost,
        )
        self.rects[rect.id] = rect
        self._next_id += 1
        return rect

    def sample_points(self) -> List[GridPoint]:
        """All sampled points: rect centers plus pending requests"""
        points = [rect.center for rect in self.rects.values()]
        points.extend(
            req.point for req in self.pending if req.dimension is not None
        )
        return points

    def refresh_costs(self, costs: Mapping[GridPoint, float]) -> None:
        """Set last_cost of every rect whose center has a new value"""
        for rect in self.rects.values():
            if rect.center in costs:
                rect.last_cost = _checked_cost(costs[rect.center])

    def complete_pending_divisions(
        self, costs: Mapping[GridPoint, float]
    ) -> List[HyperRect]:
        """Finalize every pending trisection with the supplied costs

        Args:
            costs: Cost value per sample point

        Returns:
            Newly created rectangles
        """
        for req in self.pending:
            if req.point not in costs:
                raise IncompleteEvaluationError(
                    f"No cost for pending point {req.point.labels()}"
                )
            _checked_cost(costs[req.point])

        by_rect: Dict[int, List[SampleRequest]] = {}
        for req in self.pending:
            by_rect.setdefault(req.rect_id, []).append(req)

        created: List[HyperRect] = []
        for rect_id, requests in by_rect.items():
            rect = self.rects[rect_id]
            if rect.center in costs:
                rect.last_cost = float(costs[rect.center])
            dims = sorted(
                {req.dimension for req in requests if req.dimension is not None}
            )
            if dims:
                created.extend(self._trisect(rect, dims, costs))

        self.pending = []
        logger.debug(
            f"Completed divisions: {len(created)} new rects, "
            f"{len(self.rects)} total"
        )
        return created

    def _trisect(
        self,
        rect: HyperRect,
        dims: List[int],
        costs: Mapping[GridPoint, float],
    ) -> List[HyperRect]:
        exponent = rect.max_side_exponent + 1
        weights = {}
        for d in dims:
            lower = rect.center.offset(d, exponent, -1)
            upper = rect.center.offset(d, exponent, +1)
            weights[d] = min(costs[lower], costs[upper])
        # ascending w_d, ties broken by dimension index
        order = sorted(dims, key=lambda d: (weights[d], d))

        created = []
        sides = list(rect.side_exponents)
        for d in order:
            sides[d] = exponent
            for sign in (-1, +1):
                point = rect.center.offset(d, exponent, sign)
                created.append(
                    self._new_rect(point, sides, float(costs[point]))
                )
        # the middle third keeps the parent's id and center
        rect.resize(sides)
        return created

    def update_mu_hat(self) -> float:
        """Set mu_hat: root-center cost on the first pass, else the minimum"""
        if self.iteration == 0:
            root = self.rects[0]
            if root.last_cost is None:
                raise IncompleteEvaluationError("Root center has no cost")
            self.mu_hat = root.last_cost
        else:
            self.mu_hat = min(self._costs())
        return self.mu_hat

    def _costs(self) -> List[float]:
        costs = []
        for rect in self.rects.values():
            if rect.last_cost is None:
                raise IncompleteEvaluationError(
                    f"Rect {rect.id} has no cost value"
                )
            costs.append(rect.last_cost)
        return costs

    def identify_potentially_optimal(self) -> Set[int]:
        """Rect ids satisfying both potentially-optimal conditions

        Builds the lower-right convex hull of the (distance, cost) points
        with a Graham-style scan, then applies the epsilon filter. The hull
        point of maximal size has no upper slope bound and always passes
        the filter, so the result is never empty.
        """
        if not self.rects:
            raise EmptyPartitionError("Partition has no rectangles")
        self._costs()
        mu_hat = self._require_mu_hat()

        groups = _size_groups(self.rects.values())
        sizes = sorted(groups)
        minima = [min(r.last_cost for r in groups[d]) for d in sizes]

        # hull starts at the lowest cost, largest size among ties
        f_min = min(minima)
        start = max(i for i, f in enumerate(minima) if f == f_min)

        hull: List[int] = []
        for i in range(start, len(sizes)):
            while len(hull) >= 2 and _slope(
                sizes, minima, hull[-2], hull[-1]
            ) > _slope(sizes, minima, hull[-1], i):
                hull.pop()
            hull.append(i)

        threshold = mu_hat - self.eps * abs(mu_hat)
        selected: Set[int] = set()
        for pos, i in enumerate(hull):
            if pos + 1 < len(hull):
                upper = _slope(sizes, minima, i, hull[pos + 1])
                if not upper > 0:
                    continue
                if minima[i] - upper * sizes[i] > threshold:
                    continue
            selected.update(
                r.id for r in groups[sizes[i]] if r.last_cost == minima[i]
            )
        return selected

    def _require_mu_hat(self) -> float:
        if self.mu_hat is None:
            raise IncompleteEvaluationError("mu_hat has not been set")
        return self.mu_hat

    def request_divisions(self, optimal_ids: Iterable[int]) -> List[SampleRequest]:
        """Record trisection requests for the selected rects

        Args:
            optimal_ids: Rects to divide along their longest dimensions

        Returns:
            Requests at unique new sample points
        """
        busy = {req.rect_id for req in self.pending}
        seen: Set[GridPoint] = set()
        requests: List[SampleRequest] = []
        for rect_id in sorted(optimal_ids):
            if rect_id not in self.rects:
                raise KeyError(f"Unknown rect id {rect_id}")
            if rect_id in busy:
                raise DoubleDivisionError(
                    f"Rect {rect_id} already has pending children"
                )
            rect = self.rects[rect_id]
            exponent = rect.max_side_exponent + 1
            for d in rect.longest_dimensions():
                for sign in (-1, +1):
                    point = rect.center.offset(d, exponent, sign)
                    if point in seen:
                        continue
                    seen.add(point)
                    requests.append(SampleRequest(rect_id, d, point))
            busy.add(rect_id)
        self.pending.extend(requests)
        return requests

    def check_tiling(self) -> bool:
        """Exact check: volumes sum to one and interiors are disjoint"""
        rects = list(self.rects.values())
        if not rects:
            return False
        depth = max(r.grid_depth() for r in rects)
        total = sum(r.volume_units(depth) for r in rects)
        if total != 3 ** (depth * self.n_p):
            return False
        scale = 2 * 3**depth
        boxes = [r.bounds(depth) for r in rects]
        for box in boxes:
            if any(lo < 0 or hi > scale for lo, hi in box):
                return False
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                if all(
                    lo_a < hi_b and lo_b < hi_a
                    for (lo_a, hi_a), (lo_b, hi_b) in zip(boxes[i], boxes[j])
                ):
                    return False
        return True

    def best_rect(self) -> HyperRect:
        """Rect with the lowest cost, lowest id among ties"""
        scored = [r for r in self.rects.values() if r.last_cost is not None]
        if not scored:
            raise EmptyPartitionError("No rect has a cost value")
        return min(scored, key=lambda r: (r.last_cost, r.id))

    def snapshot(self) -> List[RectRecord]:
        return [
            RectRecord(
                id=r.id,
                center=r.center.labels(),
                side_exponents=list(r.side_exponents),
                divisions=r.divisions,
                last_cost=r.last_cost,
            )
            for r in sorted(self.rects.values(), key=lambda r: r.id)
        ]


def init_partition(n_p: int, eps: float = 1e-5) -> Partition:
    """Root rect [0,1]^n_p with the center and 2*n_p offsets pending"""
    partition = Partition(n_p, eps)
    center = GridPoint.center(n_p)
    root = partition._new_rect(center, (0,) * n_p)
    partition.request_divisions([root.id])
    partition.pending.insert(0, SampleRequest(root.id, None, center))
    logger.debug(
        f"Initialized partition n_p={n_p} with "
        f"{len(partition.pending)} pending points"
    )
    return partition


def potentially_optimal_oracle(partition: Partition) -> Set[int]:
    """Direct per-rect decision of the potentially-optimal conditions

    Independent of the hull scan; quadratic in the number of rects.
    """
    if not partition.rects:
        raise EmptyPartitionError("Partition has no rectangles")
    rects = list(partition.rects.values())
    costs = partition._costs()
    mu_hat = partition._require_mu_hat()
    threshold = mu_hat - partition.eps * abs(mu_hat)

    selected = set()
    for rect, f_i in zip(rects, costs):
        d_i = rect.distance
        lower, upper = -math.inf, math.inf
        dominated = False
        for other, f_j in zip(rects, costs):
            d_j = other.distance
            if d_j < d_i:
                lower = max(lower, (f_i - f_j) / (d_i - d_j))
            elif d_j > d_i:
                upper = min(upper, (f_j - f_i) / (d_j - d_i))
            elif f_j < f_i:
                dominated = True
                break
        if dominated or lower > upper or not upper > 0:
            continue
        if math.isfinite(upper) and f_i - upper * d_i > threshold:
            continue
        selected.add(rect.id)
    return selected


def termination_iterations(n_p: int, d_star: float) -> int:
    """Iteration count after which every point is within d_star of a sample"""
    if n_p < 1:
        raise InvalidDimensionError(f"Invalid dimension n_p={n_p}")
    if not d_star > 0:
        raise InvalidResolutionError(f"Resolution must be positive: {d_star}")
    i = 0
    while math.sqrt(n_p) * 3.0 ** (-i) / 2.0 > d_star:
        i += 1
    # geometric sum, exact in integers
    return 3 ** (n_p - 1) * ((3 ** (n_p * (i + 1)) - 1) // (3**n_p - 1))


def min_distance_to_samples(p_star, samples: Sequence) -> float:
    """Minimum infinity-norm distance from p_star to the samples"""
    if len(samples) == 0:
        raise EmptySamplesError("No samples to measure against")
    target = _as_array(p_star)
    points = np.array([_as_array(p) for p in samples], dtype=float)
    return float(np.min(np.max(np.abs(points - target), axis=1)))


def _as_array(p) -> np.ndarray:
    if isinstance(p, GridPoint):
        return p.to_array()
    return np.asarray(p, dtype=float)


def _checked_cost(value) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise InvalidCostError(f"Invalid cost value {value}")
    return value


def _size_groups(rects: Iterable[HyperRect]) -> Dict[float, List[HyperRect]]:
    groups: Dict[float, List[HyperRect]] = {}
    for rect in rects:
        groups.setdefault(rect.distance, []).append(rect)
    return groups


def _slope(sizes: List[float], costs: List[float], i: int, j: int) -> float:
    return (costs[j] - costs[i]) / (sizes[j] - sizes[i])
