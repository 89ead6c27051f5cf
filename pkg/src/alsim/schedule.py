"""Adversarial process schedules: wake rounds and crash fates.

Two crash modes exist: a node that never wakes (invisible forever) and a
node that wakes, becomes visible to others, but crashes before producing
an output.  A node with a crash fate therefore always has a wake round.
"""

from __future__ import annotations

import itertools
import json
import os
import random
from dataclasses import dataclass

from .errors import ContractError, ParameterError, SizeLimitError
from .graph import PortGraph

NEVER = None
CORRECT = "correct"
CRASH_BEFORE_OUTPUT = "crash"

DEFAULT_ENUM_LIMIT = 200_000
ENUM_LIMIT_ENV = "ALSIM_MAX_ENUM"


@dataclass(frozen=True)
class Schedule:
    """Per-node wake round (NEVER = None) and fate, indexed by node."""

    wake: tuple
    fate: tuple

    def __post_init__(self):
        if len(self.wake) != len(self.fate):
            raise ContractError("wake and fate must cover the same nodes")
        for v, (w, f) in enumerate(zip(self.wake, self.fate)):
            if f not in (CORRECT, CRASH_BEFORE_OUTPUT):
                raise ContractError(f"unknown fate {f!r} at node {v}")
            if w is NEVER and f == CRASH_BEFORE_OUTPUT:
                raise ContractError(
                    f"node {v}: a crashing node must wake (use NEVER + CORRECT "
                    "for a node that is simply absent)"
                )
            if w is not NEVER and (not isinstance(w, int) or w < 0):
                raise ContractError(f"node {v}: wake round must be a non-negative int")

    @property
    def node_count(self):
        return len(self.wake)

    def awake_nodes(self):
        return [v for v, w in enumerate(self.wake) if w is not NEVER]

    def produces_output(self, v):
        return self.wake[v] is not NEVER and self.fate[v] == CORRECT


def sync_schedule(g: PortGraph) -> Schedule:
    """The fully synchronous failure-free setting: everyone wakes at round 0."""
    n = g.node_count
    return Schedule(wake=(0,) * n, fate=(CORRECT,) * n)


def random_schedule(g, seed, window, p_never=0.0, p_crash=0.0) -> Schedule:
    """Seeded random schedule; identical for identical (seed, g, parameters).

    Each node independently never wakes with probability p_never, otherwise
    wakes uniformly in [0, window]; awake nodes crash before output with
    probability p_crash.  Uses random.Random (Mersenne Twister), which is
    platform-independent for a fixed seed.
    """
    for name, p in (("p_never", p_never), ("p_crash", p_crash)):
        if not (0.0 <= p <= 1.0):
            raise ParameterError(f"{name} must be in [0,1], got {p}")
    if window < 0:
        raise ParameterError("window must be non-negative")
    rng = random.Random(seed)
    wake, fate = [], []
    for _ in range(g.node_count):
        if rng.random() < p_never:
            wake.append(NEVER)
            fate.append(CORRECT)
        else:
            wake.append(rng.randint(0, window))
            if rng.random() < p_crash:
                fate.append(CRASH_BEFORE_OUTPUT)
            else:
                fate.append(CORRECT)
    return Schedule(wake=tuple(wake), fate=tuple(fate))


def enumeration_count(n, max_wake, include_never, include_crash):
    """Closed-form count of the schedules enumerate_schedules yields."""
    awake_options = (max_wake + 1) * (2 if include_crash else 1)
    per_node = awake_options + (1 if include_never else 0)
    return per_node ** n


def enum_limit():
    return int(os.environ.get(ENUM_LIMIT_ENV, DEFAULT_ENUM_LIMIT))


def enumerate_schedules(g, max_wake, include_never=False, include_crash=False):
    """Yield every schedule with wake in [0, max_wake] (plus NEVER if allowed)
    and fate in the allowed set, exactly once.  Guarded by enum_limit()."""
    if max_wake < 0:
        raise ParameterError("max_wake must be non-negative")
    n = g.node_count
    total = enumeration_count(n, max_wake, include_never, include_crash)
    limit = enum_limit()
    if total > limit:
        raise SizeLimitError(
            f"enumeration would yield {total} schedules (limit {limit}; "
            f"set {ENUM_LIMIT_ENV} to raise it)",
            would_be_count=total,
        )
    per_node = []
    for w in range(max_wake + 1):
        per_node.append((w, CORRECT))
        if include_crash:
            per_node.append((w, CRASH_BEFORE_OUTPUT))
    if include_never:
        per_node.append((NEVER, CORRECT))
    for combo in itertools.product(per_node, repeat=n):
        yield Schedule(
            wake=tuple(w for w, _ in combo), fate=tuple(f for _, f in combo)
        )


def schedule_to_json(s: Schedule) -> dict:
    return {
        "wake": {str(v): ("never" if w is NEVER else w) for v, w in enumerate(s.wake)},
        "fate": {str(v): f for v, f in enumerate(s.fate)},
    }


def schedule_from_json(data) -> Schedule:
    if isinstance(data, str):
        data = json.loads(data)
    nodes = sorted(int(k) for k in data["wake"])
    if nodes != list(range(len(nodes))):
        raise ContractError("schedule must cover nodes 0..n-1")
    wake = tuple(
        NEVER if data["wake"][str(v)] == "never" else int(data["wake"][str(v)])
        for v in nodes
    )
    fates = data.get("fate", {})
    fate = tuple(fates.get(str(v), CORRECT) for v in nodes)
    return Schedule(wake=wake, fate=fate)
