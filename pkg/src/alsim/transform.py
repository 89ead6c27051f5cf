"""Turning any synchronous LOCAL algorithm into an async one.

The construction: every node of the observer's radius-tau ball gets a
"virtual" identifier below N^2, computed from a single radius-3*tau
snapshot.  Each awake node u would hand out local ids i + id(u)*N to the
members of its own tau-ball in canonical BFS order; the virtual id of a
node is the local id given to it by the earliest-reaching awake node in
its tau-ball (earliest by wake round plus distance, ties by id).  All
observers agree on these virtual ids, they are globally unique, and the
wrapped rule is then simply evaluated on the tau-ball under them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .async_engine import AsyncAlgorithm, SnapshotView
from .errors import ContractError
from .graph import Ball, PortGraph, ball, bfs_order, subball
from .local_engine import LocalAlgorithm
from .schedule import NEVER, Schedule


@dataclass(frozen=True)
class LocalIdMap:
    """Identifiers a single owner hands out to its tau-ball members."""

    owner: int
    owner_id: int
    assignment: dict  # member -> int in [0, N^2)


@dataclass(frozen=True)
class VirtualIdAssignment:
    assignment: dict  # node -> int in [0, N^2)


def local_ids(owner_id: int, b: Ball, id_bound: int) -> LocalIdMap:
    """BFS-index each ball member and offset by owner_id * id_bound.

    The center always gets owner_id * id_bound; all values are below
    id_bound^2 since the index is below n <= id_bound.
    """
    key = ("local_ids", owner_id, id_bound)
    cached = b._memo.get(key)
    if cached is None:
        order = bfs_order(b)
        cached = LocalIdMap(
            owner=b.center,
            owner_id=owner_id,
            assignment={u: i + owner_id * id_bound for i, u in enumerate(order)},
        )
        b._memo[key] = cached
    return cached


def elect_vstar(candidates) -> int:
    """Pick the earliest-reaching candidate: argmin of (wake + dist, id).

    ``candidates`` holds (node, id, wake, dist) tuples.
    """
    best = None
    for node, node_id, wake, dist in candidates:
        rank = (wake + dist, node_id)
        if best is None or rank < best[0]:
            best = (rank, node)
    if best is None:
        raise ContractError("cannot elect from an empty candidate set")
    return best[1]


def virtual_id(target: int, view: SnapshotView, tau: int, id_bound: int) -> int:
    """Virtual identifier of ``target`` as computed from an observer's view.

    Requires dist(observer, target) <= tau and view radius 3*tau, which
    guarantees the view contains wake info for every relevant candidate
    and the full structure of the elected owner's tau-ball.
    """
    b3 = view.structure
    if view.radius < 3 * tau:
        raise ContractError("view radius must be at least 3*tau")
    if target not in b3.distances or b3.distances[target] > tau:
        raise ContractError("target must lie within tau of the observer")
    if view.observer not in view.visible:
        raise ContractError("observer missing from its own view")

    near = subball(b3, target, tau)  # distances here equal graph distances
    theta = view.taken_at
    candidates = []
    for w, d in near.distances.items():
        info = view.visible.get(w)
        if info is not None and info[1] + d <= tau + theta:
            candidates.append((w, info[0], info[1], d))
    vstar = elect_vstar(candidates)
    owner_ball = subball(b3, vstar, tau)
    owner_id = view.visible[vstar][0]
    return local_ids(owner_id, owner_ball, id_bound).assignment[target]


def compute_idvirt_global(
    g: PortGraph, s: Schedule, tau: int, id_bound: int
) -> VirtualIdAssignment:
    """Ground-truth virtual ids computed with full knowledge of g and s.

    For a node none of whose tau-ball ever wakes, falls back to the node's
    own local id for itself (id * id_bound); otherwise elects the
    earliest-reaching awake ball member at the first round where any
    candidate qualifies.
    """
    assignment = {}
    for v in range(g.node_count):
        b = ball(g, v, tau)
        reach = [
            (w, g.ids[w], s.wake[w], b.distances[w])
            for w in b.members
            if s.wake[w] is not NEVER
        ]
        if not reach:
            assignment[v] = g.ids[v] * id_bound
            continue
        # smallest theta >= 0 whose candidate set is nonempty
        theta_star = max(0, min(w + d for _, _, w, d in reach) - tau)
        qualifying = [
            (node, node_id, w, d)
            for node, node_id, w, d in reach
            if w + d <= tau + theta_star
        ]
        vstar = elect_vstar(qualifying)
        assignment[v] = local_ids(
            g.ids[vstar], ball(g, vstar, tau), id_bound
        ).assignment[v]
    return VirtualIdAssignment(assignment=assignment)


def transform(algo: LocalAlgorithm, id_bound: int) -> AsyncAlgorithm:
    """Wrap a LOCAL algorithm as an async one with snapshot radius 3*t(N^2)."""
    tau = algo.round_bound(id_bound * id_bound)

    def rule(view: SnapshotView):
        inner = subball(view.structure, view.observer, tau)
        vids = {
            w: virtual_id(w, view, tau, id_bound) for w in inner.members
        }
        return algo.rule(inner, vids, id_bound * id_bound)

    return AsyncAlgorithm(
        name=f"transform:{algo.name}",
        radius=lambda _id_bound: 3 * tau,
        rule=rule,
    )


def transform_radii(algo: LocalAlgorithm, id_bound: int):
    """(tau, snapshot radius) the transform will use for this id bound."""
    tau = algo.round_bound(id_bound * id_bound)
    return tau, 3 * tau
