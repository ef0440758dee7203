import math
from types import SimpleNamespace

import numpy as np
import pytest

from panotrack import (
    DimensionMismatch,
    Location3D,
    NonFiniteCost,
    ZeroNormEmbedding,
    appearance_cost,
    build_cost_matrix,
    solve_assignment,
    trajectory_cost,
)
from helpers import brute_force_best_pairs, brute_force_min_cost


class TestAppearanceCost:
    def test_identical_vectors(self):
        v = np.array([0.3, 1.2, -0.7])
        assert appearance_cost(v, v) == pytest.approx(0.0, abs=1e-12)

    def test_orthogonal_vectors(self):
        assert appearance_cost([1.0, 0.0], [0.0, 1.0]) == pytest.approx(1.0, abs=1e-12)

    def test_45_degree_pair(self):
        r = math.sqrt(2.0) / 2.0
        assert appearance_cost([1.0, 0.0], [r, r]) == pytest.approx(1.0 - r, abs=1e-12)

    def test_opposite_vectors(self):
        assert appearance_cost([1.0, 0.0], [-2.0, 0.0]) == pytest.approx(2.0, abs=1e-12)

    def test_symmetry_and_scale_invariance(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            a = rng.normal(size=16)
            b = rng.normal(size=16)
            lam, mu = rng.uniform(0.1, 10.0, size=2)
            assert appearance_cost(a, b) == pytest.approx(appearance_cost(b, a), abs=1e-12)
            assert appearance_cost(lam * a, mu * b) == pytest.approx(
                appearance_cost(a, b), abs=1e-12
            )

    def test_range(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            c = appearance_cost(rng.normal(size=8), rng.normal(size=8))
            assert 0.0 <= c <= 2.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            appearance_cost([1.0, 0.0], [1.0, 0.0, 0.0])

    def test_zero_norm(self):
        with pytest.raises(ZeroNormEmbedding):
            appearance_cost([0.0, 0.0], [1.0, 0.0])


class TestTrajectoryCost:
    def test_zero_distance(self):
        loc = Location3D(3.0, -2.0)
        assert trajectory_cost(loc, loc, 1.7) == 0.0

    def test_distance_equal_to_height(self):
        c = trajectory_cost(Location3D(0.0, 0.0), Location3D(1.7, 0.0), 1.7)
        assert c == pytest.approx(1.0 - math.exp(-1.0), abs=1e-12)

    def test_saturation(self):
        c = trajectory_cost(Location3D(0.0, 0.0), Location3D(170.0, 0.0), 1.7)
        assert c == pytest.approx(1.0, abs=1e-12)

    def test_symmetry(self):
        a, b = Location3D(1.0, 2.0), Location3D(-0.5, 3.0)
        assert trajectory_cost(a, b, 1.7) == trajectory_cost(b, a, 1.7)

    def test_strictly_increasing_in_distance(self):
        origin = Location3D(0.0, 0.0)
        costs = [trajectory_cost(origin, Location3D(d, 0.0), 1.7) for d in np.linspace(0, 5, 40)]
        assert all(b > a for a, b in zip(costs, costs[1:]))

    def test_range(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            c = trajectory_cost(
                Location3D(*rng.uniform(-50, 50, 2)), Location3D(*rng.uniform(-50, 50, 2)), 1.7
            )
            assert 0.0 <= c <= 1.0
        # strictly below 1 while the kernel still resolves the distance
        for _ in range(100):
            c = trajectory_cost(
                Location3D(*rng.uniform(-3, 3, 2)), Location3D(*rng.uniform(-3, 3, 2)), 1.7
            )
            assert 0.0 <= c < 1.0

    def test_accepts_plain_pairs(self):
        assert trajectory_cost((0.0, 0.0), (1.7, 0.0), 1.7) == pytest.approx(
            1.0 - math.exp(-1.0), abs=1e-12
        )


def _track(x, z, emb):
    return SimpleNamespace(predicted=Location3D(x, z), embedding=np.asarray(emb, dtype=float))


def _det(x, z, emb):
    return SimpleNamespace(location=Location3D(x, z), embedding=np.asarray(emb, dtype=float))


class TestBuildCostMatrix:
    def test_empty_tracks(self):
        dets = [_det(0, 0, [1, 0]), _det(1, 0, [0, 1]), _det(2, 0, [1, 1])]
        cost = build_cost_matrix([], dets, 1.7)
        assert cost.shape == (0, 3)
        assignment = solve_assignment(cost)
        assert assignment.matches == []
        assert assignment.unmatched_cols == [0, 1, 2]

    def test_perfect_match(self):
        emb = [0.2, 0.9, 0.1]
        cost = build_cost_matrix([_track(1.0, 2.0, emb)], [_det(1.0, 2.0, emb)], 1.7)
        assert cost.shape == (1, 1)
        assert cost[0, 0] == pytest.approx(0.0, abs=1e-12)

    def test_matches_scalar_kernels(self):
        tracks = [_track(0.0, 0.0, [1.0, 0.0]), _track(2.0, 1.0, [0.5, 0.5])]
        dets = [
            _det(0.5, 0.0, [0.9, 0.1]),
            _det(2.0, 1.5, [0.4, 0.6]),
            _det(-1.0, 3.0, [0.0, 1.0]),
        ]
        cost = build_cost_matrix(tracks, dets, 1.7)
        for i, t in enumerate(tracks):
            for j, d in enumerate(dets):
                expected = trajectory_cost(t.predicted, d.location, 1.7) + appearance_cost(
                    t.embedding, d.embedding
                )
                assert cost[i, j] == pytest.approx(expected, abs=1e-12)

    def test_hand_computed_entry(self):
        # track at origin, detection 1.7 m away with a 45-degree embedding:
        # (1 - e^-1) + (1 - sqrt(2)/2)
        r = math.sqrt(2.0) / 2.0
        cost = build_cost_matrix([_track(0.0, 0.0, [1.0, 0.0])], [_det(1.7, 0.0, [r, r])], 1.7)
        assert cost[0, 0] == pytest.approx((1.0 - math.exp(-1.0)) + (1.0 - r), abs=1e-12)

    def test_bounds(self):
        rng = np.random.default_rng(4)
        tracks = [_track(*rng.uniform(-10, 10, 2), rng.normal(size=8)) for _ in range(6)]
        dets = [_det(*rng.uniform(-10, 10, 2), rng.normal(size=8)) for _ in range(7)]
        cost = build_cost_matrix(tracks, dets, 1.7)
        assert np.all(cost >= 0.0)
        assert np.all(cost < 3.0)

    def test_trajectory_only_mode(self):
        tracks = [_track(0.0, 0.0, [1.0, 0.0])]
        dets = [_det(1.7, 0.0, [0.0, 1.0])]
        cost = build_cost_matrix(tracks, dets, 1.7, use_appearance=False)
        assert cost[0, 0] == pytest.approx(1.0 - math.exp(-1.0), abs=1e-12)

    def test_mixed_dimensions(self):
        with pytest.raises(DimensionMismatch):
            build_cost_matrix([_track(0, 0, [1, 0])], [_det(0, 0, [1, 0, 0])], 1.7)

    def test_zero_norm_embedding(self):
        with pytest.raises(ZeroNormEmbedding):
            build_cost_matrix([_track(0, 0, [0.0, 0.0])], [_det(0, 0, [1, 0])], 1.7)


class TestSolveAssignment:
    def test_diagonal_optimum(self):
        assignment = solve_assignment(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert assignment.matches == [(0, 0), (1, 1)]
        assert assignment.unmatched_rows == []
        assert assignment.unmatched_cols == []

    def test_square_matches_brute_force(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            cost = rng.uniform(0.0, 2.0, size=(3, 3))
            assignment = solve_assignment(cost)
            total = sum(cost[i, j] for i, j in assignment.matches)
            assert total == pytest.approx(brute_force_min_cost(cost), abs=1e-12)

    def test_rectangular_matches_brute_force(self):
        rng = np.random.default_rng(6)
        for shape in ((2, 3), (3, 2), (1, 5), (4, 7)):
            for _ in range(50):
                cost = rng.uniform(0.0, 2.0, size=shape)
                assignment = solve_assignment(cost)
                assert len(assignment.matches) == min(shape)
                total = sum(cost[i, j] for i, j in assignment.matches)
                assert total == pytest.approx(brute_force_min_cost(cost), abs=1e-12)

    def test_partition_invariant(self):
        rng = np.random.default_rng(7)
        cost = rng.uniform(0.0, 2.0, size=(4, 6))
        assignment = solve_assignment(cost)
        rows = sorted([i for i, _ in assignment.matches] + assignment.unmatched_rows)
        cols = sorted([j for _, j in assignment.matches] + assignment.unmatched_cols)
        assert rows == list(range(4))
        assert cols == list(range(6))

    def test_constant_shift_keeps_matching(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            cost = rng.uniform(0.0, 2.0, size=(4, 4))
            base = solve_assignment(cost)
            shifted = solve_assignment(cost + 7.3)
            assert base.matches == shifted.matches

    def test_exact_argmin_pairs_small(self):
        rng = np.random.default_rng(9)
        cost = rng.uniform(0.0, 2.0, size=(4, 4))
        _, pairs = brute_force_best_pairs(cost)
        assert solve_assignment(cost).matches == pairs

    def test_empty_axes(self):
        assignment = solve_assignment(np.zeros((0, 3)))
        assert assignment.matches == []
        assert assignment.unmatched_cols == [0, 1, 2]
        assignment = solve_assignment(np.zeros((2, 0)))
        assert assignment.unmatched_rows == [0, 1]

    def test_non_finite_rejected(self):
        with pytest.raises(NonFiniteCost):
            solve_assignment(np.array([[0.0, np.nan], [1.0, 0.0]]))
        with pytest.raises(NonFiniteCost):
            solve_assignment(np.array([[0.0, np.inf], [1.0, 0.0]]))

    def test_matches_sorted_by_row(self):
        rng = np.random.default_rng(10)
        cost = rng.uniform(0.0, 2.0, size=(5, 5))
        assignment = solve_assignment(cost)
        assert [i for i, _ in assignment.matches] == sorted(i for i, _ in assignment.matches)
