"""Reference LOCAL algorithms.

Two families: the classic bit-reduction 3-coloring for oriented rings
(port 1 = successor), and a universal algorithm that collects the whole
graph and outputs the canonical (lexicographically first) solution of an
LCL task, which works for every solvable instance at linear radius.
"""

from __future__ import annotations

import itertools

from .errors import ContractError, UnsolvableInstanceError
from .graph import Ball, PortGraph, ball
from .lcl import LclTask
from .local_engine import LocalAlgorithm


def cv_step(own: int, successor: int) -> int:
    """One color-reduction step: 2i + b for the lowest differing bit i.

    Requires own != successor; applying this at every node of a properly
    colored oriented cycle keeps the coloring proper.
    """
    if own == successor:
        raise ContractError("cv_step requires distinct colors (duplicate ids?)")
    diff = own ^ successor
    i = (diff & -diff).bit_length() - 1
    b = (own >> i) & 1
    return 2 * i + b


def _reduction_steps(bound: int) -> int:
    """Number of cv_step iterations until the color bound drops to <= 6.

    One step from bound m gives colors < 2*ceil(log2 m).
    """
    k = 0
    m = bound
    while m > 6:
        m = 2 * (m - 1).bit_length()
        k += 1
    return k


def _cv_round_bound(id_bound: int) -> int:
    # k reduction steps plus 3 rounds eliminating colors 5, 4, 3
    return _reduction_steps(id_bound) + 3


def _ring_sequence(b: Ball):
    """Lay the ball of an oriented ring out as a sequence along port 1.

    Returns (seq, center_index, cyclic).  For a ball that wraps the whole
    ring, seq is the full cycle starting at the center and cyclic is True.
    """

    def step(u, port):
        for p, w in b.adj[u]:
            if p == port:
                return w
        return None

    for u in b.members:
        if any(p not in (1, 2) for p, _ in b.adj[u]):
            raise ContractError("not an oriented ring (ports beyond 2 present)")

    fwd = [b.center]
    u = b.center
    while True:
        nxt = step(u, 1)
        if nxt is None or nxt == b.center:
            cyclic = nxt == b.center
            break
        fwd.append(nxt)
        u = nxt
    if cyclic:
        if len(fwd) != len(b.members):
            raise ContractError("not an oriented ring (cycle misses members)")
        return fwd, 0, True
    back = []
    u = b.center
    while True:
        prv = step(u, 2)
        if prv is None:
            break
        back.append(prv)
        u = prv
    seq = list(reversed(back)) + fwd
    if len(seq) != len(b.members):
        raise ContractError("not an oriented ring (ball is not a path segment)")
    return seq, len(back), False


def _cv3_rule(b: Ball, ids, id_bound):
    k = _reduction_steps(id_bound)
    seq, c, cyclic = _ring_sequence(b)
    colors = [ids[u] for u in seq]
    n = len(colors)

    if cyclic:
        for _ in range(k):
            colors = [cv_step(colors[i], colors[(i + 1) % n]) for i in range(n)]
        for gone in (5, 4, 3):
            nxt = list(colors)
            for i in range(n):
                if colors[i] == gone:
                    used = {colors[(i - 1) % n], colors[(i + 1) % n]}
                    nxt[i] = min(x for x in (0, 1, 2) if x not in used)
            colors = nxt
        return colors[c] + 1

    # line segment: validity shrinks by one index from the right per cv
    # step and by one on each end per elimination round; radius k+3
    # leaves exactly the center valid at the end
    hi = n  # colors[0:hi] valid
    for _ in range(k):
        colors = [cv_step(colors[i], colors[i + 1]) for i in range(hi - 1)]
        hi -= 1
    lo = 0
    for gone in (5, 4, 3):
        nxt = list(colors)
        for i in range(lo + 1, hi - 1):
            if colors[i] == gone:
                used = {colors[i - 1], colors[i + 1]}
                nxt[i] = min(x for x in (0, 1, 2) if x not in used)
        colors = nxt
        lo += 1
        hi -= 1
    if not (lo <= c < hi):
        raise ContractError("ball too small for the reduction pipeline")
    return colors[c] + 1


def cv3() -> LocalAlgorithm:
    """3-coloring of oriented rings; outputs labels in {1,2,3}."""
    return LocalAlgorithm(name="cv3", round_bound=_cv_round_bound, rule=_cv3_rule)


_canonical_cache = {}


def _structure_key(b: Ball):
    return (tuple(b.members), tuple(sorted(b.induced_edges)))


def canonical_solution(g: PortGraph, task: LclTask, ids) -> dict:
    """Lexicographically first valid total labeling.

    Nodes are ordered by id ascending, labels by alphabet order; found by
    backtracking that checks each task ball as soon as it is fully
    labeled.  Raises UnsolvableInstanceError when none exists.
    """
    order = sorted(range(g.node_count), key=lambda v: ids[v])
    balls = [ball(g, v, task.radius) for v in range(g.node_count)]
    # after assigning a node, every ball it belongs to must still admit a
    # completion; pruning dead prefixes early keeps the search tractable
    # without changing which labeling is found first
    touching = [[] for _ in range(g.node_count)]
    for b in balls:
        for w in b.members:
            touching[w].append(b)

    labeling = {}

    def ball_ok(b):
        missing = [w for w in b.members if w not in labeling]
        if not missing:
            return task.predicate(b, labeling)
        trial = dict(labeling)
        for combo in itertools.product(task.labels, repeat=len(missing)):
            trial.update(zip(missing, combo))
            if task.predicate(b, trial):
                return True
        return False

    def extend(j):
        if j == len(order):
            return True
        v = order[j]
        for lab in task.labels:
            labeling[v] = lab
            if all(ball_ok(b) for b in touching[v]):
                if extend(j + 1):
                    return True
            del labeling[v]
        return False

    if not extend(0):
        raise UnsolvableInstanceError(
            f"task {task.name} has no valid labeling on this graph"
        )
    return dict(labeling)


def _universal_rule_factory(task: LclTask):
    def rule(b: Ball, ids, id_bound):
        # radius id_bound >= n > diameter, so the ball is the whole graph;
        # rebuild it and output the canonical solution at the center.  The
        # solution depends only on how the ids order the nodes, so cache by
        # rank permutation rather than raw id values.
        index = {w: j for j, w in enumerate(b.members)}
        by_id = sorted(b.members, key=lambda w: ids[w])
        rank = {w: r for r, w in enumerate(by_id)}
        key = (
            _structure_key(b),
            tuple(rank[w] for w in b.members),
            task.name,
        )
        cached = _canonical_cache.get(key)
        if cached is None:
            edges = [
                (index[u], pu, index[v], pv) for u, pu, v, pv in b.induced_edges
            ]
            g2 = PortGraph(
                node_count=len(b.members),
                id_bound=len(b.members),
                ids=[rank[w] for w in b.members],
                edges=edges,
            )
            sol = canonical_solution(g2, task, {index[w]: rank[w] for w in b.members})
            cached = {w: sol[index[w]] for w in b.members}
            _canonical_cache[key] = cached
        return cached[b.center]

    return rule


def universal(task: LclTask) -> LocalAlgorithm:
    """Collect-everything algorithm solving any solvable LCL canonically."""
    return LocalAlgorithm(
        name=f"universal:{task.name}",
        round_bound=lambda id_bound: id_bound,
        rule=_universal_rule_factory(task),
    )
