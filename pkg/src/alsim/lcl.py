"""Locally checkable labeling tasks and the partial-labeling checker.

A task is a radius, a finite ordered label alphabet, and a pure predicate
over a fully labeled centered ball.  A partial labeling (some nodes
unlabeled, written None) is accepted iff every radius-r ball can be
extended to a valid one by choosing labels for its unlabeled members,
with independent choices allowed for different balls.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ContractError, SizeLimitError
from .graph import Ball, PortGraph, ball

BOTTOM = None

EXTENSION_SLOT_LIMIT = 20


@dataclass(frozen=True)
class LclTask:
    name: str
    radius: int
    labels: tuple
    predicate: object  # callable (Ball, labels: dict node -> label) -> bool

    def __call__(self, b, labeling):
        return self.predicate(b, labeling)


@dataclass
class CheckResult:
    ok: bool
    witness: int | None = None  # first offending center on failure

    def __bool__(self):
        return self.ok


def proper_coloring(c: int) -> LclTask:
    """c-coloring: the center's label differs from every neighbor's."""
    if c < 1:
        raise ContractError("need at least one color")

    def pred(b: Ball, labeling):
        center_label = labeling[b.center]
        return all(labeling[w] != center_label for _, w in b.adj[b.center])

    return LclTask(
        name=f"coloring:{c}", radius=1, labels=tuple(range(1, c + 1)), predicate=pred
    )


def maximal_independent_set() -> LclTask:
    """MIS at radius 1: label 1 = in the set, 0 = out.

    A center in the set has no neighbor in the set; a center out of the
    set has at least one neighbor in it.
    """

    def pred(b: Ball, labeling):
        neighbors = [w for _, w in b.adj[b.center]]
        if labeling[b.center] == 1:
            return all(labeling[w] == 0 for w in neighbors)
        return any(labeling[w] == 1 for w in neighbors)

    return LclTask(name="mis", radius=1, labels=(0, 1), predicate=pred)


BUILTIN_TASKS = {
    "coloring": proper_coloring,
    "mis": maximal_independent_set,
}


def task_from_spec(spec: str) -> LclTask:
    """Parse a task selector such as 'coloring:3' or 'mis'."""
    parts = spec.split(":")
    if parts[0] == "coloring" and len(parts) == 2:
        return proper_coloring(int(parts[1]))
    if parts[0] == "mis" and len(parts) == 1:
        return maximal_independent_set()
    raise ContractError(f"unknown task spec {spec!r}")


def check_ball(task: LclTask, b: Ball, labeling) -> bool:
    """Evaluate the task predicate on one fully labeled ball."""
    if b.radius != task.radius:
        raise ContractError(
            f"ball radius {b.radius} != task radius {task.radius}"
        )
    for w in b.members:
        if labeling.get(w) is BOTTOM:
            raise ContractError(f"member {w} is unlabeled")
        if labeling[w] not in task.labels:
            raise ContractError(f"label {labeling[w]!r} not in task alphabet")
    return bool(task.predicate(b, labeling))


def check_partial(
    task: LclTask,
    g: PortGraph,
    labeling,
    slot_limit: int = EXTENSION_SLOT_LIMIT,
) -> CheckResult:
    """Accept iff every radius-r ball extends to a valid one.

    ``labeling`` maps every node to a label or None.  Extension choices are
    made per ball (brute force over the alphabet on that ball's unlabeled
    members), including balls centered at unlabeled nodes.
    """
    for v in range(g.node_count):
        if v not in labeling:
            raise ContractError(f"labeling must be defined on all nodes (missing {v})")
        lab = labeling[v]
        if lab is not BOTTOM and lab not in task.labels:
            raise ContractError(f"label {lab!r} at node {v} not in task alphabet")

    for v in range(g.node_count):
        b = ball(g, v, task.radius)
        holes = [w for w in b.members if labeling[w] is BOTTOM]
        if len(holes) > slot_limit:
            raise SizeLimitError(
                f"ball at {v} has {len(holes)} unlabeled members "
                f"(extension guard {slot_limit})"
            )
        fixed = {w: labeling[w] for w in b.members if labeling[w] is not BOTTOM}
        extendable = False
        for choice in itertools.product(task.labels, repeat=len(holes)):
            full = dict(fixed)
            full.update(zip(holes, choice))
            if task.predicate(b, full):
                extendable = True
                break
        if not extendable:
            return CheckResult(ok=False, witness=v)
    return CheckResult(ok=True)
