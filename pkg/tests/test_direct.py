"""DIRECT partition, potentially-optimal selection and termination"""

from fractions import Fraction as F

import numpy as np
import pytest

from src.core.direct import (Partition, init_partition,
                             min_distance_to_samples,
                             potentially_optimal_oracle,
                             termination_iterations)
from src.models.errors import (DoubleDivisionError, EmptyPartitionError,
                               EmptySamplesError, IncompleteEvaluationError,
                               InvalidCostError, InvalidDimensionError,
                               InvalidResolutionError)
from src.models.geometry import GridPoint


def gp(*coords):
    return GridPoint.from_fractions(coords)


def evaluate(partition, cost):
    return {req.point: cost(req.point) for req in partition.pending}


def random_costs(rng):
    return lambda point: float(rng.uniform(0.0, 1.0))


class TestGridPoint:
    def test_center_and_offsets(self):
        center = GridPoint.center(2)
        assert center.fractions() == (F(1, 2), F(1, 2))
        assert center.offset(0, 1, -1) == gp(F(1, 6), F(1, 2))
        assert center.offset(1, 2, +1) == gp(F(1, 2), F(11, 18))

    def test_reduced_form_is_canonical(self):
        assert GridPoint.canonical((9, 3), 2) == GridPoint((3, 1), 1)
        assert gp(F(1, 2), F(1, 2)) == GridPoint.center(2)
        assert hash(gp(F(3, 6))) == hash(GridPoint.center(1))

    def test_labels(self):
        assert gp(F(5, 6), F(1, 2)).labels() == ["5/6", "1/2"]

    def test_rejects_non_grid_coordinates(self):
        with pytest.raises(ValueError):
            gp(F(1, 5))

    def test_rejects_points_outside_cube(self):
        with pytest.raises(ValueError):
            GridPoint((3,), 0)


class TestInitPartition:
    def test_two_dimensions(self):
        partition = init_partition(2)
        points = [req.point for req in partition.pending]
        assert points == [
            gp(F(1, 2), F(1, 2)),
            gp(F(1, 6), F(1, 2)),
            gp(F(5, 6), F(1, 2)),
            gp(F(1, 2), F(1, 6)),
            gp(F(1, 2), F(5, 6)),
        ]
        assert len(partition.rects) == 1

    @pytest.mark.parametrize("n_p,count", [(1, 3), (3, 7)])
    def test_point_count(self, n_p, count):
        assert len(init_partition(n_p).pending) == count

    def test_one_dimension_points(self):
        points = [req.point for req in init_partition(1).pending]
        assert points == [gp(F(1, 2)), gp(F(1, 6)), gp(F(5, 6))]

    def test_zero_dimension(self):
        with pytest.raises(InvalidDimensionError):
            init_partition(0)


class TestCompletePendingDivisions:
    def test_divides_lowest_weight_dimension_first(self):
        partition = init_partition(2)
        costs = {
            gp(F(1, 6), F(1, 2)): 0.3,
            gp(F(5, 6), F(1, 2)): 0.9,
            gp(F(1, 2), F(1, 6)): 0.2,
            gp(F(1, 2), F(5, 6)): 0.8,
            gp(F(1, 2), F(1, 2)): 0.5,
        }
        partition.complete_pending_divisions(costs)

        rects = {r.center: r.side_exponents for r in partition.rects.values()}
        assert rects == {
            gp(F(1, 2), F(1, 6)): (0, 1),
            gp(F(1, 2), F(5, 6)): (0, 1),
            gp(F(1, 6), F(1, 2)): (1, 1),
            gp(F(5, 6), F(1, 2)): (1, 1),
            gp(F(1, 2), F(1, 2)): (1, 1),
        }
        assert partition.rects[0].center == GridPoint.center(2)
        assert partition.rects[0].last_cost == 0.5
        assert partition.pending == []
        assert partition.check_tiling()

    def test_one_dimension(self):
        partition = init_partition(1)
        partition.complete_pending_divisions(
            {gp(F(1, 6)): 0.4, gp(F(5, 6)): 0.6, gp(F(1, 2)): 0.5}
        )
        rects = sorted(
            (r.center.fractions()[0], r.side_exponents)
            for r in partition.rects.values()
        )
        assert rects == [(F(1, 6), (1,)), (F(1, 2), (1,)), (F(5, 6), (1,))]

    def test_equal_weights_divide_lowest_index_first(self):
        partition = init_partition(2)
        partition.complete_pending_divisions(
            evaluate(partition, lambda p: 0.5)
        )
        first_children = [partition.rects[1], partition.rects[2]]
        assert [r.side_exponents for r in first_children] == [(1, 0), (1, 0)]
        assert partition.check_tiling()

    def test_missing_cost(self):
        partition = init_partition(2)
        costs = evaluate(partition, lambda p: 1.0)
        costs.pop(gp(F(5, 6), F(1, 2)))
        with pytest.raises(IncompleteEvaluationError):
            partition.complete_pending_divisions(costs)

    @pytest.mark.parametrize("bad", [-0.1, float("nan"), float("inf")])
    def test_invalid_cost(self, bad):
        partition = init_partition(1)
        costs = evaluate(partition, lambda p: 1.0)
        costs[gp(F(1, 6))] = bad
        with pytest.raises(InvalidCostError):
            partition.complete_pending_divisions(costs)


class TestPotentiallyOptimal:
    def _partition(self, rects, mu_hat, eps=1e-5):
        partition = Partition(2, eps)
        for center, sides, cost in rects:
            partition._new_rect(center, sides, cost)
        partition.mu_hat = mu_hat
        partition.iteration = 1
        return partition

    def test_single_rect(self):
        partition = self._partition(
            [(GridPoint.center(2), (0, 0), 0.7)], mu_hat=0.7
        )
        assert partition.identify_potentially_optimal() == {0}
        assert potentially_optimal_oracle(partition) == {0}

    def test_equal_size_keeps_the_minimum(self):
        partition = self._partition(
            [
                (gp(F(1, 6), F(1, 2)), (1, 0), 0.2),
                (gp(F(5, 6), F(1, 2)), (1, 0), 0.4),
            ],
            mu_hat=0.5,
        )
        assert partition.identify_potentially_optimal() == {0}
        assert potentially_optimal_oracle(partition) == {0}

    def test_same_size_distinct_costs(self):
        partition = self._partition(
            [
                (gp(F(1, 6), F(1, 6)), (1, 1), 0.9),
                (gp(F(1, 2), F(1, 6)), (1, 1), 0.3),
                (gp(F(5, 6), F(1, 6)), (1, 1), 0.6),
            ],
            mu_hat=0.3,
        )
        assert partition.identify_potentially_optimal() == {1}

    def test_hull_matches_oracle_with_strong_filter(self):
        partition = self._partition(
            [
                (gp(F(1, 2), F(1, 2)), (1, 1), 0.50),
                (gp(F(1, 2), F(1, 6)), (0, 1), 0.45),
            ],
            mu_hat=0.45,
            eps=1e-2,
        )
        assert (
            partition.identify_potentially_optimal()
            == potentially_optimal_oracle(partition)
        )

    def test_largest_rect_always_qualifies(self):
        partition = self._partition(
            [
                (gp(F(1, 2), F(1, 2)), (1, 1), 0.0),
                (gp(F(1, 2), F(1, 6)), (0, 1), 10.0),
            ],
            mu_hat=0.0,
        )
        assert 1 in partition.identify_potentially_optimal()

    @pytest.mark.parametrize("eps,expected", [(0.0, {0, 1}), (0.5, {1}), (1.0, {1})])
    def test_strong_filter_leaves_the_largest(self, eps, expected):
        partition = self._partition(
            [
                (gp(F(1, 2), F(1, 2)), (1, 1), 0.10),
                (gp(F(1, 2), F(1, 6)), (0, 1), 0.12),
            ],
            mu_hat=0.1,
            eps=eps,
        )
        assert partition.identify_potentially_optimal() == expected
        assert potentially_optimal_oracle(partition) == expected

    def test_empty_partition(self):
        with pytest.raises(EmptyPartitionError):
            Partition(2).identify_potentially_optimal()

    @pytest.mark.parametrize("eps", [0.0, 1e-5, 1e-3])
    def test_hull_equals_oracle_on_random_partitions(self, eps):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            partition = init_partition(2, eps)
            cost = random_costs(rng)
            for _ in range(int(rng.integers(1, 6))):
                partition.complete_pending_divisions(
                    evaluate(partition, cost)
                )
                partition.update_mu_hat()
                partition.iteration += 1
                selected = partition.identify_potentially_optimal()
                assert selected == potentially_optimal_oracle(partition)
                largest = max(r.distance for r in partition.rects.values())
                assert any(
                    partition.rects[i].distance == largest for i in selected
                )
                partition.request_divisions(selected)


class TestRequestDivisions:
    def test_requests_along_longest_dimensions(self):
        partition = init_partition(2)
        partition.complete_pending_divisions(
            evaluate(partition, lambda p: float(p.to_array()[0]))
        )
        wide = next(
            r for r in partition.rects.values() if r.side_exponents == (1, 0)
        )
        requests = partition.request_divisions([wide.id])
        assert {req.dimension for req in requests} == {1}
        assert len(requests) == 2

    def test_double_division(self):
        partition = init_partition(2)
        with pytest.raises(DoubleDivisionError):
            partition.request_divisions([0])

    def test_requests_are_unique_points(self):
        partition = init_partition(2)
        partition.complete_pending_divisions(
            evaluate(partition, lambda p: 1.0)
        )
        requests = partition.request_divisions(list(partition.rects))
        points = [req.point for req in requests]
        assert len(points) == len(set(points))
        assert not set(points) & {r.center for r in partition.rects.values()}


class TestTiling:
    def test_random_division_sequences_tile_the_cube(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            n_p = int(rng.integers(1, 4))
            partition = init_partition(n_p)
            cost = random_costs(rng)
            for _ in range(int(rng.integers(1, 4))):
                partition.complete_pending_divisions(
                    evaluate(partition, cost)
                )
                assert partition.check_tiling()
                ids = list(partition.rects)
                chosen = rng.choice(
                    ids, size=int(rng.integers(1, min(len(ids), 4) + 1)),
                    replace=False,
                )
                partition.request_divisions(int(i) for i in chosen)
            partition.complete_pending_divisions(evaluate(partition, cost))
            assert partition.check_tiling()

    def test_side_lengths_never_grow(self):
        rng = np.random.default_rng(3)
        partition = init_partition(2)
        cost = random_costs(rng)
        previous = {}
        for _ in range(6):
            partition.complete_pending_divisions(evaluate(partition, cost))
            for rect in partition.rects.values():
                if rect.id in previous:
                    assert all(
                        j >= j0
                        for j, j0 in zip(rect.side_exponents, previous[rect.id])
                    )
            previous = {
                r.id: r.side_exponents for r in partition.rects.values()
            }
            partition.update_mu_hat()
            partition.iteration += 1
            partition.request_divisions(
                partition.identify_potentially_optimal()
            )


class TestMuHat:
    def test_first_pass_uses_root_center(self):
        partition = init_partition(1)
        partition.complete_pending_divisions(
            {gp(F(1, 6)): 0.1, gp(F(5, 6)): 0.6, gp(F(1, 2)): 0.5}
        )
        assert partition.update_mu_hat() == 0.5
        partition.iteration = 1
        assert partition.update_mu_hat() == 0.1


class TestTermination:
    @pytest.mark.parametrize(
        "n_p,d_star,expected", [(1, 0.5, 1), (2, 0.71, 3), (2, 0.1, 273)]
    )
    def test_closed_form(self, n_p, d_star, expected):
        assert termination_iterations(n_p, d_star) == expected

    def test_invalid_resolution(self):
        with pytest.raises(InvalidResolutionError):
            termination_iterations(2, 0.0)

    def test_invalid_dimension(self):
        with pytest.raises(InvalidDimensionError):
            termination_iterations(0, 0.5)


class TestMinDistance:
    def test_coincident(self):
        assert min_distance_to_samples([0.5, 0.5], [GridPoint.center(2)]) == 0

    def test_infinity_norm(self):
        samples = [GridPoint.center(2), gp(F(5, 6), F(1, 6))]
        assert min_distance_to_samples([0.9, 0.1], samples) == pytest.approx(
            1 / 15
        )

    def test_initial_samples_from_corner(self):
        samples = [req.point for req in init_partition(2).pending]
        assert min_distance_to_samples([0.0, 0.0], samples) == 0.5

    def test_empty(self):
        with pytest.raises(EmptySamplesError):
            min_distance_to_samples([0.5], [])
