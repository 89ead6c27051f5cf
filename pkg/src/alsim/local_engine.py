"""Synchronous LOCAL executor.

A LocalAlgorithm is a round bound t(.) of the id bound plus a pure rule
mapping a radius-t ball with a complete id assignment to an output label.
Running it means evaluating the rule independently at every node.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractError
from .graph import PortGraph, ball


@dataclass(frozen=True)
class LocalAlgorithm:
    name: str
    round_bound: object  # callable id_bound -> int
    rule: object  # callable (Ball, ids: dict node -> id, id_bound) -> label


def run_local(g: PortGraph, algo: LocalAlgorithm, id_bound: int, ids=None) -> dict:
    """Evaluate algo at every node; returns a total labeling node -> label.

    ``ids`` maps node index to identifier; defaults to the graph's own ids.
    """
    if ids is None:
        ids = {v: g.ids[v] for v in range(g.node_count)}
    if len(ids) != g.node_count:
        raise ContractError("ids must be defined on every node")
    vals = list(ids.values())
    if len(set(vals)) != len(vals):
        raise ContractError("ids must be distinct")
    if any(not (0 <= i < id_bound) for i in vals):
        raise ContractError(f"ids must lie in [0,{id_bound})")
    if id_bound < g.node_count:
        raise ContractError("id bound must be at least the node count")

    t = algo.round_bound(id_bound)
    out = {}
    for v in range(g.node_count):
        b = ball(g, v, t)
        out[v] = algo.rule(b, {w: ids[w] for w in b.members}, id_bound)
    return out
