import itertools
import random

import pytest

from alsim.algorithms import (
    _cv_round_bound,
    _reduction_steps,
    canonical_solution,
    cv3,
    cv_step,
    universal,
)
from alsim.errors import ContractError, UnsolvableInstanceError
from alsim.graph import make_ring, make_torus, random_connected_graph
from alsim.lcl import check_partial, maximal_independent_set, proper_coloring
from alsim.local_engine import run_local


class TestCvStep:
    def test_lowest_bit_zero(self):
        assert cv_step(0, 1) == 0

    def test_bit_two_set(self):
        assert cv_step(5, 1) == 5

    def test_equal_inputs_rejected(self):
        with pytest.raises(ContractError):
            cv_step(2, 2)

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_preserves_properness_exhaustively(self, n):
        # every proper coloring of an oriented n-cycle with colors < 8
        # stays proper after one synchronous step
        for colors in itertools.product(range(8), repeat=n):
            if any(colors[i] == colors[(i + 1) % n] for i in range(n)):
                continue
            stepped = [cv_step(colors[i], colors[(i + 1) % n]) for i in range(n)]
            assert all(
                stepped[i] != stepped[(i + 1) % n] for i in range(n)
            ), colors


class TestRoundBound:
    def test_small_bounds_need_no_reduction(self):
        assert _reduction_steps(6) == 0
        assert _cv_round_bound(3) == 3

    def test_bound_64(self):
        assert _cv_round_bound(64) <= 8

    def test_monotone(self):
        bounds = [_cv_round_bound(b) for b in range(3, 3000, 7)]
        assert bounds == sorted(bounds)

    def test_frozen_regression_2_to_16(self):
        # golden value: iterating the bound map from 65536 takes 4 steps
        # (65536 -> 32 -> 10 -> 8 -> 6), plus 3 elimination rounds
        assert _cv_round_bound(2 ** 16) == 7
        assert _cv_round_bound(2 ** 16) <= 9


class TestCv3:
    @pytest.mark.parametrize("n", [3, 5, 8, 16, 64])
    def test_proper_on_rings(self, n):
        g = make_ring(n, range(n))
        labeling = run_local(g, cv3(), n)
        assert set(labeling.values()) <= {1, 2, 3}
        assert check_partial(proper_coloring(3), g, labeling)

    def test_proper_under_random_ids(self):
        rng = random.Random(0)
        for trial in range(25):
            n = rng.choice([4, 6, 9, 12])
            ids = rng.sample(range(n), n)
            g = make_ring(n, ids)
            labeling = run_local(g, cv3(), n)
            assert check_partial(proper_coloring(3), g, labeling), (n, ids)

    def test_round_bound_64_small(self):
        g = make_ring(64, range(64))
        assert cv3().round_bound(64) <= 8
        labeling = run_local(g, cv3(), 64)
        assert check_partial(proper_coloring(3), g, labeling)

    def test_non_ring_rejected(self):
        g = make_torus(3, 3)
        with pytest.raises(ContractError):
            run_local(g, cv3(), 9)


class TestUniversal:
    def test_triangle_canonical_solution(self):
        g = make_ring(3, [0, 1, 2])
        labeling = run_local(g, universal(proper_coloring(3)), 3)
        assert labeling == {0: 1, 1: 2, 2: 3}

    def test_lexicographic_order_follows_ids(self):
        # the node with the smallest id gets the smallest feasible label
        g = make_ring(3, [2, 0, 1])
        labeling = run_local(g, universal(proper_coloring(3)), 3)
        assert labeling[1] == 1  # id 0 goes first
        assert check_partial(proper_coloring(3), g, labeling)

    def test_odd_ring_two_coloring_unsolvable(self):
        g = make_ring(5, range(5))
        with pytest.raises(UnsolvableInstanceError):
            run_local(g, universal(proper_coloring(2)), 5)

    def test_all_centers_agree_on_one_solution(self):
        g = random_connected_graph(8, seed=6)
        task = proper_coloring(4)
        labeling = run_local(g, universal(task), 8)
        # outputs assemble into the canonical solution computed directly
        expected = canonical_solution(g, task, {v: g.ids[v] for v in range(8)})
        assert labeling == expected

    def test_mis_instances(self):
        task = maximal_independent_set()
        for seed in range(5):
            g = random_connected_graph(7, seed=seed)
            labeling = run_local(g, universal(task), 7)
            assert check_partial(task, g, labeling), seed

    def test_different_ids_may_change_solution_but_stay_valid(self):
        task = proper_coloring(3)
        g1 = make_ring(6, [0, 1, 2, 3, 4, 5])
        g2 = make_ring(6, [5, 4, 3, 2, 1, 0])
        l1 = run_local(g1, universal(task), 6)
        l2 = run_local(g2, universal(task), 6)
        assert check_partial(task, g1, l1)
        assert check_partial(task, g2, l2)


class TestCanonicalSolution:
    def test_is_lexicographically_first(self):
        # brute force over all labelings in id order
        g = make_ring(4, [3, 0, 2, 1])
        task = proper_coloring(3)
        ids = {v: g.ids[v] for v in range(4)}
        order = sorted(range(4), key=lambda v: ids[v])
        best = None
        for combo in itertools.product(task.labels, repeat=4):
            labeling = dict(zip(order, combo))
            if check_partial(task, g, labeling):
                best = labeling
                break
        assert canonical_solution(g, task, ids) == best
