import pytest

from alsim.algorithms import universal
from alsim.async_engine import AsyncAlgorithm, run_async, snapshot_set
from alsim.decoupled import (
    NetworkState,
    flood_round,
    locate_origin,
    received_announcements,
    run_decoupled,
    simulate_flood,
)
from alsim.errors import ContractError
from alsim.graph import make_path, make_ring, make_torus
from alsim.lcl import BOTTOM, proper_coloring
from alsim.schedule import (
    CORRECT,
    NEVER,
    Schedule,
    enumerate_schedules,
    random_schedule,
)
from alsim.transform import transform


def collect_algo(t):
    return AsyncAlgorithm(
        name="collect",
        radius=lambda _b: t,
        rule=lambda view: tuple(sorted(i for i, _ in view.visible.values())),
    )


class TestFloodRound:
    def test_empty_round_only_advances_clock(self):
        g = make_ring(4, range(4))
        state = NetworkState(g)
        flood_round(state)
        assert state.round == 1
        assert all(not q for q in state.q_in.values())

    def test_path_message_travels_one_hop_per_round(self):
        g = make_path(5, range(5))
        state = NetworkState(g)
        state.emit(0, (0, 0))
        for k in range(1, 5):
            flood_round(state)
            deliveries = [d for d in state.q_in[k] if d.message.payload[0] == 0]
            assert len(deliveries) == 1
            assert deliveries[0].round == k
            assert deliveries[0].message.hops == k

    def test_ring_never_resent_on_arrival_link(self):
        g = make_ring(4, range(4))
        state = NetworkState(g)
        state.emit(0, (0, 0))
        for _ in range(6):
            flood_round(state)
        for v in range(4):
            for d in state.q_in[v]:
                for pin, pout in d.message.route_history:
                    assert pin != pout or pin == 0

    def test_ring_message_comes_back_the_long_way(self):
        g = make_ring(4, range(4))
        state = NetworkState(g)
        state.emit(0, (0, 0))
        for _ in range(6):
            flood_round(state)
        hops_back = [d.message.hops for d in state.q_in[0]]
        assert 4 in hops_back  # full loop, via the other direction


class TestLocateOrigin:
    def test_origins_recovered_from_routes_only(self):
        g = make_torus(3, 3)
        s = random_schedule(g, seed=1, window=3)
        state = simulate_flood(g, s, horizon=20)
        for v in range(9):
            for d in state.q_in[v]:
                origin = locate_origin(g, v, d)
                assert g.ids[origin] == d.message.payload[0]


class TestGoldenTrace:
    def test_path_trace_replay(self):
        g = make_path(3, range(3))
        s = Schedule(wake=(0, 5, 1), fate=(CORRECT,) * 3)
        lines = []
        simulate_flood(g, s, horizon=7, trace=lines.append)
        assert lines == [
            "round=1 edge=0:1->1:2 origin=0 emitted=0 hops=1",
            "round=2 edge=2:1->1:1 origin=2 emitted=1 hops=1",
            "round=2 edge=1:1->2:1 origin=0 emitted=0 hops=2",
            "round=3 edge=1:2->0:1 origin=2 emitted=1 hops=2",
            "round=6 edge=1:1->2:1 origin=1 emitted=5 hops=1",
            "round=6 edge=1:2->0:1 origin=1 emitted=5 hops=1",
        ]


class TestRunDecoupled:
    def test_all_never_no_messages(self):
        g = make_ring(5, range(5))
        s = Schedule(wake=(NEVER,) * 5, fate=(CORRECT,) * 5)
        lines = []
        out = run_decoupled(g, s, collect_algo(2), 5, trace=lines.append)
        assert out == {v: BOTTOM for v in range(5)}
        assert lines == []

    def test_asymmetric_graph_rejected(self):
        g = make_path(4, range(4))
        s = Schedule(wake=(0,) * 4, fate=(CORRECT,) * 4)
        with pytest.raises(ContractError):
            run_decoupled(g, s, collect_algo(1), 4)

    @pytest.mark.parametrize("n", [3, 5, 6, 8])
    def test_equals_async_on_rings_random(self, n):
        g = make_ring(n, range(n))
        algo = transform(universal(proper_coloring(3)), n)
        for seed in range(25):
            s = random_schedule(g, seed, window=4, p_never=0.25, p_crash=0.25)
            assert run_decoupled(g, s, algo, n) == run_async(g, s, algo, n), seed

    def test_equals_async_on_ring_exhaustive(self):
        g = make_ring(4, range(4))
        algo = transform(universal(proper_coloring(3)), 4)
        for s in enumerate_schedules(g, 1, include_never=True, include_crash=True):
            assert run_decoupled(g, s, algo, 4) == run_async(g, s, algo, 4), s

    def test_equals_async_on_torus(self):
        g = make_torus(3, 3)
        algo = transform(universal(proper_coloring(3)), 9)
        for seed in range(15):
            s = random_schedule(g, seed, window=4, p_never=0.25, p_crash=0.25)
            assert run_decoupled(g, s, algo, 9) == run_async(g, s, algo, 9), seed

    def test_message_accounting_matches_snapshot_sets(self):
        g = make_ring(7, range(7))
        t = 2
        for seed in range(15):
            s = random_schedule(g, seed, window=4, p_never=0.3)
            state = simulate_flood(g, s, horizon=4 + t + 2)
            for v in range(7):
                if s.wake[v] is NEVER:
                    continue
                anns = received_announcements(g, state, v, deadline=s.wake[v] + t)
                near = {o for o, (_, _, hops, _) in anns.items() if hops <= t}
                expected = set(snapshot_set(g, s, v, t, s.wake[v]))
                expected.discard(v)  # own announcement is self-knowledge
                assert near == expected, (seed, v)

    def test_receipt_beyond_radius_occurs_and_is_ignored(self):
        # node 0 wakes very late with t=1: the announcement of the node at
        # distance 3 is sitting in its buffer, but never becomes visible
        g = make_ring(6, range(6))
        wake = (10, NEVER, NEVER, 0, NEVER, NEVER)
        s = Schedule(wake=wake, fate=(CORRECT,) * 6)
        algo = collect_algo(1)
        state = simulate_flood(g, s, horizon=12)
        anns = received_announcements(g, state, 0, deadline=11)
        assert 3 in anns and anns[3][2] > 1  # received, from beyond radius
        out = run_decoupled(g, s, algo, 6)
        assert out[0] == (0,)  # only its own id is visible
        assert out == run_async(g, s, algo, 6)
