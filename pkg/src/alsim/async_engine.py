"""The AsyncLocal execution model.

Each process, at its wake round, takes a single atomic snapshot of its
radius-t ball.  The snapshot always returns the complete ball structure;
identities and wake rounds are revealed only for nodes w satisfying
wake(w) + dist(v,w) <= wake(v) + t.  Phase two is a pure rule of the
snapshot; crashed-before-output processes stay visible but output nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractError
from .graph import PortGraph, ball
from .lcl import BOTTOM
from .schedule import CRASH_BEFORE_OUTPUT, NEVER, Schedule


@dataclass(frozen=True)
class SnapshotView:
    observer: int
    taken_at: int
    radius: int
    structure: object  # Ball of the observer at the snapshot radius
    visible: dict  # member -> (id, wake round), only for qualifying members


@dataclass(frozen=True)
class AsyncAlgorithm:
    name: str
    radius: object  # callable id_bound -> int
    rule: object  # callable SnapshotView -> label


def snapshot(g: PortGraph, s: Schedule, v: int, t: int) -> SnapshotView:
    """The one-shot snapshot taken by v at its wake round."""
    theta = s.wake[v]
    if theta is NEVER:
        raise ContractError(f"node {v} never wakes and cannot snapshot")
    b = ball(g, v, t)
    visible = {}
    for w in b.members:
        ww = s.wake[w]
        if ww is not NEVER and ww + b.distances[w] <= theta + t:
            visible[w] = (g.ids[w], ww)
    return SnapshotView(observer=v, taken_at=theta, radius=t, structure=b, visible=visible)


def snapshot_set(g: PortGraph, s: Schedule, v: int, rho: int, theta: int) -> dict:
    """S_v(rho, theta): nodes within distance rho whose wake round plus
    distance is at most rho + theta.  Returns node -> (id, wake, dist)."""
    dist_v = g.distances()[v]
    out = {}
    for w, d in dist_v.items():
        if d > rho:
            continue
        ww = s.wake[w]
        if ww is not NEVER and ww + d <= rho + theta:
            out[w] = (g.ids[w], ww, d)
    return out


def run_async(g: PortGraph, s: Schedule, algo: AsyncAlgorithm, id_bound: int) -> dict:
    """Run an async algorithm under a schedule; returns a partial labeling.

    Never-waking nodes and crash-before-output nodes map to None; the
    latter remain visible in other nodes' snapshots.
    """
    if s.node_count != g.node_count:
        raise ContractError("schedule does not match the graph")
    t = algo.radius(id_bound)
    out = {}
    for v in range(g.node_count):
        if s.wake[v] is NEVER:
            out[v] = BOTTOM
        elif s.fate[v] == CRASH_BEFORE_OUTPUT:
            out[v] = BOTTOM
        else:
            out[v] = algo.rule(snapshot(g, s, v, t))
    return out
