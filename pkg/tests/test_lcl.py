import itertools

import pytest

from alsim.errors import ContractError, SizeLimitError
from alsim.graph import ball, make_path, make_ring, random_connected_graph
from alsim.lcl import (
    BOTTOM,
    check_ball,
    check_partial,
    maximal_independent_set,
    proper_coloring,
    task_from_spec,
)


def brute_force_total_check(task, g, labeling):
    # oracle for total labelings: every radius-r ball must pass directly
    return all(
        check_ball(task, ball(g, v, task.radius), labeling)
        for v in range(g.node_count)
    )


class TestProperColoring:
    def test_star_valid(self):
        g = make_path(3, range(3))
        task = proper_coloring(3)
        b = ball(g, 1, 1)  # center 1 with leaves 0 and 2
        assert check_ball(task, b, {1: 1, 0: 2, 2: 3})

    def test_adjacent_equal_invalid(self):
        g = make_path(3, range(3))
        task = proper_coloring(3)
        b = ball(g, 1, 1)
        assert not check_ball(task, b, {1: 1, 0: 1, 2: 3})

    def test_triangle_total(self):
        g = make_ring(3, range(3))
        task = proper_coloring(3)
        assert check_partial(task, g, {0: 1, 1: 2, 2: 3})

    def test_purity(self):
        g = make_ring(5, range(5))
        task = proper_coloring(3)
        b = ball(g, 0, 1)
        labels = {0: 1, 1: 2, 4: 3}
        assert check_ball(task, b, labels) == check_ball(task, b, labels)

    def test_wrong_radius_rejected(self):
        g = make_ring(5, range(5))
        with pytest.raises(ContractError):
            check_ball(proper_coloring(3), ball(g, 0, 2), {})

    def test_missing_label_rejected(self):
        g = make_ring(3, range(3))
        with pytest.raises(ContractError):
            check_ball(proper_coloring(3), ball(g, 0, 1), {0: 1, 1: 2})


class TestMis:
    def test_valid_mis_on_ring(self):
        g = make_ring(4, range(4))
        task = maximal_independent_set()
        assert check_partial(task, g, {0: 1, 1: 0, 2: 1, 3: 0})

    def test_not_independent(self):
        g = make_ring(4, range(4))
        task = maximal_independent_set()
        assert not check_partial(task, g, {0: 1, 1: 1, 2: 0, 3: 0})

    def test_not_maximal(self):
        g = make_ring(5, range(5))
        task = maximal_independent_set()
        res = check_partial(task, g, {v: 0 for v in range(5)})
        assert not res


class TestTaskSpec:
    def test_coloring_spec(self):
        assert task_from_spec("coloring:4").labels == (1, 2, 3, 4)

    def test_mis_spec(self):
        assert task_from_spec("mis").name == "mis"

    def test_unknown_spec(self):
        with pytest.raises(ContractError):
            task_from_spec("majority")


class TestCheckPartial:
    def test_hole_is_extendable(self):
        g = make_ring(3, range(3))
        assert check_partial(proper_coloring(3), g, {0: 1, 1: 2, 2: BOTTOM})

    def test_conflict_not_fixable_by_extension(self):
        g = make_path(3, range(3))
        res = check_partial(proper_coloring(3), g, {0: 1, 1: 1, 2: BOTTOM})
        assert not res
        assert res.witness in (0, 1)

    def test_odd_ring_two_coloring_fails(self):
        g = make_ring(5, range(5))
        res = check_partial(proper_coloring(2), g, {0: 1, 1: 2, 2: 1, 3: 2, 4: BOTTOM})
        assert not res

    def test_all_bottom_passes_when_solvable(self):
        g = make_ring(6, range(6))
        assert check_partial(proper_coloring(3), g, {v: BOTTOM for v in range(6)})

    def test_total_equivalent_to_per_ball(self):
        g = random_connected_graph(7, seed=2)
        task = proper_coloring(4)
        for trial in range(30):
            import random as _r

            rng = _r.Random(trial)
            labeling = {v: rng.choice(task.labels) for v in range(7)}
            assert bool(check_partial(task, g, labeling)) == brute_force_total_check(
                task, g, labeling
            )

    def test_erasing_labels_preserves_pass(self):
        g = make_ring(6, range(6))
        task = proper_coloring(3)
        total = {0: 1, 1: 2, 2: 1, 3: 2, 4: 1, 5: 2}
        assert check_partial(task, g, total)
        for erased in itertools.combinations(range(6), 2):
            partial = {v: (BOTTOM if v in erased else total[v]) for v in range(6)}
            assert check_partial(task, g, partial)

    def test_never_inspects_ids(self):
        # identical structure, different ids: identical verdicts
        task = proper_coloring(3)
        g1 = make_ring(5, [0, 1, 2, 3, 4])
        g2 = make_ring(5, [4, 2, 0, 3, 1])
        labeling = {0: 1, 1: 2, 2: BOTTOM, 3: 1, 4: 2}
        assert bool(check_partial(task, g1, labeling)) == bool(
            check_partial(task, g2, labeling)
        )

    def test_slot_guard(self):
        g = make_ring(5, range(5))
        with pytest.raises(SizeLimitError):
            check_partial(
                proper_coloring(3),
                g,
                {v: BOTTOM for v in range(5)},
                slot_limit=2,
            )

    def test_incomplete_labeling_rejected(self):
        g = make_ring(3, range(3))
        with pytest.raises(ContractError):
            check_partial(proper_coloring(3), g, {0: 1})
