"""The decoupled model: synchronous flooding routers, asynchronous processes.

Routers flood: every incoming message goes out on every link except the
one it arrived on, with the (in-port, out-port) pair appended to its route
history; emission tags the message with its round.  Processes wake at
arbitrary rounds, announce (id, wake round), wait t rounds, and rebuild a
snapshot view from their input buffer using a priori knowledge of the
(symmetric) network template plus the route histories.

Copies that agree on (router, arrival port, announcement) are merged:
they are indistinguishable to every reader, and merging keeps the round
loop linear where literal copying would blow up exponentially on graphs
of degree three or more.  First arrivals, per-port receipt, and the route
history of each surviving copy are unaffected.
"""

from __future__ import annotations

from dataclasses import dataclass

from .async_engine import AsyncAlgorithm, SnapshotView
from .errors import ContractError
from .graph import PortGraph, ball, is_symmetric, SYMMETRY_NODE_LIMIT
from .lcl import BOTTOM
from .schedule import CRASH_BEFORE_OUTPUT, NEVER, Schedule


@dataclass(frozen=True)
class Message:
    payload: tuple  # (origin id, origin wake round)
    emitted_at: int
    route_history: tuple  # one (in_port, out_port) pair per hop traveled

    @property
    def hops(self):
        return len(self.route_history)


@dataclass(frozen=True)
class Delivery:
    round: int
    arrival_port: int
    message: Message


class NetworkState:
    """Routers, buffers, and the synchronous round counter."""

    def __init__(self, g: PortGraph, trace=None):
        self.g = g
        self.round = 0
        self.q_in = {v: [] for v in range(g.node_count)}
        self.pending = []  # copies to forward this round: (node, in_port, Message)
        self.emitting = []  # (node, payload) announcements placed this round
        self.trace = trace
        self._seen = set()
        self.port_at = {}
        for u, pu, v, pv in g.edge_ports:
            self.port_at[(u, v)] = pu
            self.port_at[(v, u)] = pv

    def emit(self, v, payload):
        """Process v places payload in its output buffer at the current round."""
        self.emitting.append((v, payload))

    def idle(self):
        return not self.pending and not self.emitting


def flood_round(state: NetworkState) -> NetworkState:
    """Advance one round: package emissions, forward, deliver.  In place."""
    g = state.g
    outgoing = []
    for v, payload in state.emitting:
        for p, w in g.adjacency[v]:
            msg = Message(payload=payload, emitted_at=state.round,
                          route_history=((0, p),))
            outgoing.append((w, state.port_at[(w, v)], msg))
    for node, in_port, msg in state.pending:
        for p, w in g.adjacency[node]:
            if p == in_port:
                continue
            fwd = Message(
                payload=msg.payload,
                emitted_at=msg.emitted_at,
                route_history=msg.route_history + ((in_port, p),),
            )
            outgoing.append((w, state.port_at[(w, node)], fwd))
    state.emitting = []
    state.pending = []
    state.round += 1
    for w, in_port, msg in outgoing:
        key = (w, in_port, msg.payload)
        if key in state._seen:
            continue
        state._seen.add(key)
        state.q_in[w].append(Delivery(round=state.round, arrival_port=in_port,
                                      message=msg))
        state.pending.append((w, in_port, msg))
        if state.trace is not None:
            u = g.neighbor_via(w, in_port)
            pu = msg.route_history[-1][1]
            state.trace(
                f"round={state.round} edge={u}:{pu}->{w}:{in_port} "
                f"origin={msg.payload[0]} emitted={msg.emitted_at} "
                f"hops={msg.hops}"
            )
    return state


def locate_origin(g: PortGraph, v: int, delivery: Delivery) -> int:
    """Walk a delivered message's route backwards from v to its origin node.

    Uses only the network template (structure and ports), never ids.
    """
    node = v
    in_p = delivery.arrival_port
    for pin, pout in reversed(delivery.message.route_history):
        prev = g.neighbor_via(node, in_p)
        if g.neighbor_via(prev, pout) != node:
            raise ContractError("route history inconsistent with the template")
        node = prev
        in_p = pin
    if in_p != 0:
        raise ContractError("route history does not start at a process port")
    return node


def simulate_flood(g: PortGraph, s: Schedule, horizon: int, trace=None) -> NetworkState:
    """Run the network until quiescent (or the horizon), emitting wake
    announcements at each process's wake round."""
    state = NetworkState(g, trace=trace)
    by_round = {}
    for v, w in enumerate(s.wake):
        if w is not NEVER:
            by_round.setdefault(w, []).append(v)
    last_wake = max(by_round) if by_round else -1
    while True:
        for v in by_round.get(state.round, ()):
            state.emit(v, (g.ids[v], state.round))
        if state.idle() and state.round >= last_wake:
            break
        if state.round > horizon:
            break
        flood_round(state)
    return state


def received_announcements(g: PortGraph, state: NetworkState, v: int, deadline: int):
    """Announcements in v's input buffer by ``deadline``, deduplicated by
    origin: origin node -> (id, wake, min hops, first arrival round)."""
    out = {}
    for d in state.q_in[v]:
        if d.round > deadline:
            continue
        origin = locate_origin(g, v, d)
        oid, owake = d.message.payload
        prev = out.get(origin)
        if prev is None or (d.message.hops, d.round) < (prev[2], prev[3]):
            out[origin] = (oid, owake, d.message.hops, d.round)
    return out


def run_decoupled(
    g: PortGraph,
    s: Schedule,
    algo: AsyncAlgorithm,
    id_bound: int,
    trace=None,
    trust_symmetry=False,
) -> dict:
    """Execute an async algorithm in the decoupled model; returns a
    partial labeling matching run_async on symmetric graphs."""
    if not trust_symmetry:
        if g.node_count > SYMMETRY_NODE_LIMIT:
            raise ContractError(
                "graph too large to verify symmetry; pass trust_symmetry=True "
                "for graphs known symmetric by construction"
            )
        if not is_symmetric(g):
            raise ContractError("decoupled execution requires a symmetric graph")
    if s.node_count != g.node_count:
        raise ContractError("schedule does not match the graph")

    t = algo.radius(id_bound)
    awake = [w for w in s.wake if w is not NEVER]
    horizon = (max(awake) if awake else 0) + t + 1
    state = simulate_flood(g, s, horizon=horizon, trace=trace)

    out = {}
    for v in range(g.node_count):
        wv = s.wake[v]
        if wv is NEVER:
            out[v] = BOTTOM
            continue
        anns = received_announcements(g, state, v, deadline=wv + t)
        # engine sanity: first arrival of each origin is via a shortest
        # path at round wake(origin) + dist.  A node's own announcement is
        # excluded: it only ever comes back the long way around.
        for origin, (oid, owake, hops, rnd) in anns.items():
            if origin == v:
                continue
            d = g.dist(v, origin)
            if hops != d or rnd != owake + d:
                raise ContractError(
                    f"arrival timing violated for origin {origin} at {v}: "
                    f"hops={hops} round={rnd}, expected dist={d} "
                    f"round={owake + d}"
                )
        b = ball(g, v, t)  # template knowledge: structure is known a priori
        visible = {v: (g.ids[v], wv)}
        for origin, (oid, owake, hops, rnd) in anns.items():
            if origin == v:
                continue
            if hops <= t:  # announcements from farther away are ignored
                visible[origin] = (oid, owake)
        view = SnapshotView(
            observer=v, taken_at=wv, radius=t, structure=b, visible=visible
        )
        if s.fate[v] == CRASH_BEFORE_OUTPUT:
            out[v] = BOTTOM
        else:
            out[v] = algo.rule(view)
    return out
