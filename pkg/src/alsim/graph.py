"""Port-numbered graphs, balls, canonical BFS enumeration, symmetry checking.

A PortGraph is a simple connected graph whose nodes carry distinct integer
identifiers below a declared bound, and whose edge endpoints carry local
port numbers 1..deg(v).  The two endpoints of an edge may disagree on the
port number.  Everything here is immutable after construction; derived
structures (balls, distances) are cached on the graph object.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field

from .errors import (
    ContractError,
    InvalidIdsError,
    InvalidTopologyError,
    ParameterError,
    SizeLimitError,
)

SYMMETRY_NODE_LIMIT = 12


@dataclass(frozen=True)
class Ball:
    """Radius-t ball around a center node.

    ``members`` is sorted; ``adj`` maps each member to its induced
    adjacency as (port, neighbor) pairs sorted by port; ``distances``
    holds graph distances from the center (not distances recomputed in
    the induced subgraph).
    """

    center: int
    radius: int
    members: tuple
    adj: dict = field(compare=False)
    distances: dict = field(compare=False)
    # schedule-independent derived data (sub-balls, traversal orders, local
    # id maps) memoized per ball instance
    _memo: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def induced_edges(self):
        """Edges with both endpoints in the ball, as (u, port_u, v, port_v), u < v."""
        out = []
        for u in self.members:
            for pu, v in self.adj[u]:
                if u < v:
                    pv = next(p for p, w in self.adj[v] if w == u)
                    out.append((u, pu, v, pv))
        return out


class PortGraph:
    """Simple connected graph with unique ids and per-endpoint port numbers."""

    def __init__(self, node_count, id_bound, ids, edges):
        """edges: iterable of (u, port_u, v, port_v) with node indices u, v."""
        n = node_count
        if n < 1:
            raise InvalidTopologyError("graph needs at least one node")
        ids = tuple(ids)
        if len(ids) != n:
            raise InvalidIdsError(f"expected {n} ids, got {len(ids)}")
        if len(set(ids)) != n:
            raise InvalidIdsError("identifiers must be distinct")
        if any(not (0 <= i < id_bound) for i in ids):
            raise InvalidIdsError(f"identifiers must lie in [0,{id_bound})")
        if n > id_bound:
            raise InvalidIdsError("id bound must be at least the node count")

        adj = {v: [] for v in range(n)}
        seen_pairs = set()
        for u, pu, v, pv in edges:
            if u == v:
                raise InvalidTopologyError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidTopologyError(f"edge endpoint out of range: {(u, v)}")
            key = (min(u, v), max(u, v))
            if key in seen_pairs:
                raise InvalidTopologyError(f"parallel edge between {u} and {v}")
            seen_pairs.add(key)
            adj[u].append((pu, v))
            adj[v].append((pv, u))
        for v in range(n):
            ports = sorted(p for p, _ in adj[v])
            if ports != list(range(1, len(adj[v]) + 1)):
                raise InvalidTopologyError(
                    f"ports at node {v} must be exactly 1..deg, got {ports}"
                )
            adj[v].sort()

        self.node_count = n
        self.id_bound = id_bound
        self.ids = ids
        self.adjacency = {v: tuple(adj[v]) for v in range(n)}
        self.edge_ports = tuple(
            (u, pu, v, pv) for u, pu, v, pv in sorted(
                (min(u, v), pu if u < v else pv, max(u, v), pv if u < v else pu)
                for u, pu, v, pv in edges
            )
        )

        # connectivity
        if n > 1:
            seen = {0}
            q = deque([0])
            while q:
                u = q.popleft()
                for _, w in self.adjacency[u]:
                    if w not in seen:
                        seen.add(w)
                        q.append(w)
            if len(seen) != n:
                raise InvalidTopologyError("graph is not connected")

        self._dist = None
        self._ball_cache = {}
        self._subball_cache = {}

    def neighbor_via(self, v, port):
        for p, w in self.adjacency[v]:
            if p == port:
                return w
        raise ContractError(f"node {v} has no port {port}")

    def degree(self, v):
        return len(self.adjacency[v])

    def distances(self):
        """All-pairs hop distances, computed once by BFS from every node."""
        if self._dist is None:
            dist = {}
            for s in range(self.node_count):
                d = {s: 0}
                q = deque([s])
                while q:
                    u = q.popleft()
                    for _, w in self.adjacency[u]:
                        if w not in d:
                            d[w] = d[u] + 1
                            q.append(w)
                dist[s] = d
            self._dist = dist
        return self._dist

    def dist(self, u, v):
        return self.distances()[u][v]

    @property
    def diameter(self):
        d = self.distances()
        return max(max(row.values()) for row in d.values())


def ball(g: PortGraph, v: int, t: int) -> Ball:
    """The radius-t ball around v: members, induced port adjacency, distances in g."""
    if not (0 <= v < g.node_count):
        raise ContractError(f"node {v} out of range")
    if t < 0:
        raise ContractError("radius must be non-negative")
    key = (v, t)
    cached = g._ball_cache.get(key)
    if cached is not None:
        return cached
    dist_v = g.distances()[v]
    members = tuple(sorted(w for w, d in dist_v.items() if d <= t))
    member_set = set(members)
    adj = {
        u: tuple((p, w) for p, w in g.adjacency[u] if w in member_set)
        for u in members
    }
    b = Ball(
        center=v,
        radius=t,
        members=members,
        adj=adj,
        distances={w: dist_v[w] for w in members},
    )
    g._ball_cache[key] = b
    return b


def subball(b: Ball, center: int, t: int) -> Ball:
    """Radius-t ball around ``center`` extracted from a larger ball's structure.

    Distances are BFS distances inside ``b``'s induced adjacency; they equal
    whole-graph distances whenever dist(b.center, center) + t <= b.radius
    (shortest paths then stay inside ``b``).
    """
    if center not in b.distances:
        raise ContractError(f"node {center} is not a member of the ball")
    key = ("subball", center, t)
    cached = b._memo.get(key)
    if cached is not None:
        return cached
    dist = {center: 0}
    q = deque([center])
    while q:
        u = q.popleft()
        if dist[u] == t:
            continue
        for _, w in b.adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    members = tuple(sorted(dist))
    member_set = set(members)
    adj = {
        u: tuple((p, w) for p, w in b.adj[u] if w in member_set) for u in members
    }
    sub = Ball(center=center, radius=t, members=members, adj=adj, distances=dist)
    b._memo[key] = sub
    return sub


def bfs_order(b: Ball) -> tuple:
    """Canonical breadth-first enumeration of a ball's members.

    Starts at the center; each node expands its induced neighbors in
    increasing port order.  Depends only on structure and ports, never on
    identifiers.
    """
    cached = b._memo.get("bfs_order")
    if cached is not None:
        return cached
    order = [b.center]
    seen = {b.center}
    q = deque([b.center])
    while q:
        u = q.popleft()
        for _, w in b.adj[u]:
            if w not in seen:
                seen.add(w)
                order.append(w)
                q.append(w)
    result = tuple(order)
    b._memo["bfs_order"] = result
    return result


def _automorphism_maps(g: PortGraph, v: int, w: int) -> bool:
    """Whether a port-preserving automorphism with phi(v) = w exists.

    Port preservation plus connectivity pins the whole map once phi(v) is
    fixed, so this is a single propagation pass with consistency checks.
    """
    if g.degree(v) != g.degree(w):
        return False
    phi = {v: w}
    q = deque([v])
    while q:
        u = q.popleft()
        u2 = phi[u]
        if g.degree(u) != g.degree(u2):
            return False
        for p, x in g.adjacency[u]:
            try:
                x2 = g.neighbor_via(u2, p)
            except ContractError:
                return False
            if x in phi:
                if phi[x] != x2:
                    return False
            else:
                phi[x] = x2
                q.append(x)
    if len(phi) != g.node_count or len(set(phi.values())) != g.node_count:
        return False
    # verify far-end ports as well: port at x of {u,x} must equal port at
    # phi(x) of {phi(u),phi(x)}
    for u, pu, x, px in g.edge_ports:
        u2, x2 = phi[u], phi[x]
        if g.neighbor_via(u2, pu) != x2:
            return False
        if g.neighbor_via(x2, px) != u2:
            return False
    return True


def is_symmetric(g: PortGraph, node_limit: int = SYMMETRY_NODE_LIMIT) -> bool:
    """True iff every ordered node pair is related by a port-preserving automorphism."""
    if g.node_count > node_limit:
        raise SizeLimitError(
            f"symmetry check limited to {node_limit} nodes, got {g.node_count}"
        )
    return all(
        _automorphism_maps(g, 0, w) for w in range(g.node_count)
    ) and all(
        _automorphism_maps(g, v, 0) for v in range(g.node_count)
    )


def is_oriented_ring(g: PortGraph) -> bool:
    """Degree-2 everywhere, ports {1,2}, and port 1 walks a single cycle."""
    if g.node_count < 3:
        return False
    for v in range(g.node_count):
        if sorted(p for p, _ in g.adjacency[v]) != [1, 2]:
            return False
    v, steps = 0, 0
    while steps < g.node_count:
        v = g.neighbor_via(v, 1)
        steps += 1
    return v == 0


def make_ring(n, id_list, id_bound=None) -> PortGraph:
    """Oriented ring: port 1 = clockwise neighbor, port 2 = counterclockwise."""
    if n < 3:
        raise InvalidTopologyError(f"a ring needs at least 3 nodes, got {n}")
    id_list = list(id_list)
    if id_bound is None:
        id_bound = max(n, max(id_list) + 1)
    edges = [(v, 1, (v + 1) % n, 2) for v in range(n)]
    return PortGraph(n, id_bound, id_list, edges)


def make_path(n, id_list, id_bound=None) -> PortGraph:
    """Path graph; ports assigned 1 toward the higher-index neighbor first."""
    if n < 1:
        raise InvalidTopologyError("empty path")
    id_list = list(id_list)
    if id_bound is None:
        id_bound = max(n, max(id_list) + 1)
    edges = []
    for v in range(n - 1):
        pu = 1
        pv = 1 if v + 1 == n - 1 else 2
        edges.append((v, pu, v + 1, pv))
    return PortGraph(n, id_bound, id_list, edges)


def make_torus(rows, cols, id_list=None, id_bound=None) -> PortGraph:
    """Oriented torus with consistent directions.

    Ports: 1 = clockwise along the row, 2 = counterclockwise along the row,
    3 = clockwise along the column, 4 = counterclockwise along the column.
    """
    if rows < 3 or cols < 3:
        raise InvalidTopologyError("torus needs at least 3 rows and 3 columns")
    n = rows * cols
    if id_list is None:
        id_list = list(range(n))
    else:
        id_list = list(id_list)
    if id_bound is None:
        id_bound = max(n, max(id_list) + 1)

    def idx(r, c):
        return (r % rows) * cols + (c % cols)

    edges = []
    for r in range(rows):
        for c in range(cols):
            edges.append((idx(r, c), 1, idx(r, c + 1), 2))
            edges.append((idx(r, c), 3, idx(r + 1, c), 4))
    return PortGraph(n, id_bound, id_list, edges)


def random_connected_graph(n, seed, id_bound=None, extra_edge_prob=0.15) -> PortGraph:
    """Seeded random connected simple graph with random port assignments.

    Built as a random spanning tree plus independent extra edges; the
    Mersenne Twister behind random.Random makes the result reproducible
    across platforms for a fixed seed.
    """
    if n < 1:
        raise ParameterError("need at least one node")
    rng = random.Random(seed)
    if id_bound is None:
        id_bound = n
    ids = rng.sample(range(id_bound), n)
    pairs = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        u = order[i]
        v = order[rng.randrange(i)]
        pairs.add((min(u, v), max(u, v)))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in pairs and rng.random() < extra_edge_prob:
                pairs.add((u, v))
    # random port permutation per node
    incident = {v: [] for v in range(n)}
    for u, v in sorted(pairs):
        incident[u].append((u, v))
        incident[v].append((u, v))
    port_of = {}
    for v in range(n):
        ports = list(range(1, len(incident[v]) + 1))
        rng.shuffle(ports)
        for e, p in zip(incident[v], ports):
            port_of[(v, e)] = p
    edges = [
        (u, port_of[(u, (u, v))], v, port_of[(v, (u, v))]) for u, v in sorted(pairs)
    ]
    return PortGraph(n, id_bound, ids, edges)


def graph_to_json(g: PortGraph) -> dict:
    return {
        "n": g.node_count,
        "N": g.id_bound,
        "ids": list(g.ids),
        "edges": [list(e) for e in g.edge_ports],
    }


def graph_from_json(data) -> PortGraph:
    if isinstance(data, str):
        data = json.loads(data)
    return PortGraph(
        node_count=data["n"],
        id_bound=data["N"],
        ids=data["ids"],
        edges=[tuple(e) for e in data["edges"]],
    )
