"""Experiment driver: parse run configurations, execute, verify, report.

This is the engine behind both the HTTP service and the command-line
client.  A run picks a graph, a task, an algorithm, an execution model,
and a schedule; the resulting labeling is always fed through the partial
checker, and the report carries the verdict plus a config echo that
reproduces the run exactly.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field

from . import algorithms
from .async_engine import AsyncAlgorithm, run_async
from .decoupled import run_decoupled
from .errors import AlsimError, SizeLimitError, UsageError
from .graph import (
    PortGraph,
    graph_from_json,
    is_oriented_ring,
    is_symmetric,
    make_ring,
    make_torus,
    random_connected_graph,
    SYMMETRY_NODE_LIMIT,
)
from .lcl import check_partial, task_from_spec
from .local_engine import LocalAlgorithm, run_local
from .schedule import (
    NEVER,
    Schedule,
    enumerate_schedules,
    random_schedule,
    schedule_from_json,
    schedule_to_json,
    sync_schedule,
)
from .transform import transform, transform_radii

MODELS = ("local", "async", "decoupled")


@dataclass
class RunConfig:
    graph: str
    task: str
    algo: str
    model: str = "local"
    transform: bool = False
    schedule: str = "sync"
    id_bound: int | None = None
    seed: int = 0
    output_format: str = "json"

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        data = dict(data)
        if "N" in data:
            data["id_bound"] = data.pop("N")
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise UsageError(str(exc)) from exc

    def to_dict(self) -> dict:
        d = asdict(self)
        d["N"] = d.pop("id_bound")
        return d


def _parse_kv(body: str) -> dict:
    out = {}
    if not body:
        return out
    for part in body.split(","):
        if "=" in part:
            k, v = part.split("=", 1)
            out[k] = v
        else:
            out[part] = True
    return out


def parse_graph(spec: str, id_bound=None) -> PortGraph:
    """Graph shorthand: ring:<n>, torus:<r>x<c>, random:n=..[,seed=..],
    a path to a JSON file, or an inline JSON object."""
    if spec.startswith("ring:"):
        n = int(spec.split(":", 1)[1])
        return make_ring(n, range(n), id_bound=id_bound or n)
    if spec.startswith("torus:"):
        dims = spec.split(":", 1)[1]
        r, c = (int(x) for x in dims.split("x"))
        return make_torus(r, c, id_bound=id_bound or r * c)
    if spec.startswith("random:"):
        kv = _parse_kv(spec.split(":", 1)[1])
        n = int(kv["n"])
        return random_connected_graph(
            n, seed=int(kv.get("seed", 0)), id_bound=id_bound or n
        )
    if spec.lstrip().startswith("{"):
        return graph_from_json(json.loads(spec))
    try:
        with open(spec) as fh:
            return graph_from_json(json.load(fh))
    except OSError as exc:
        raise UsageError(f"cannot read graph spec {spec!r}: {exc}") from exc


def parse_algorithm(spec: str):
    """Algorithm selector: cv3, universal:<task>, or constant:<label>."""
    if spec == "cv3":
        return algorithms.cv3()
    if spec.startswith("universal:"):
        return algorithms.universal(task_from_spec(spec.split(":", 1)[1]))
    if spec.startswith("constant:"):
        raw = spec.split(":", 1)[1]
        label = int(raw) if raw.lstrip("-").isdigit() else raw
        return AsyncAlgorithm(
            name=spec, radius=lambda _b: 0, rule=lambda view: label
        )
    raise UsageError(f"unknown algorithm spec {spec!r}")


def parse_schedule(spec: str, g: PortGraph, default_seed=0) -> Schedule:
    if spec == "sync":
        return sync_schedule(g)
    if spec.startswith("random:"):
        kv = _parse_kv(spec.split(":", 1)[1])
        return random_schedule(
            g,
            seed=int(kv.get("seed", default_seed)),
            window=int(kv.get("window", 0)),
            p_never=float(kv.get("never", 0.0)),
            p_crash=float(kv.get("crash", 0.0)),
        )
    if spec.lstrip().startswith("{"):
        return schedule_from_json(json.loads(spec))
    try:
        with open(spec) as fh:
            return schedule_from_json(json.load(fh))
    except OSError as exc:
        raise UsageError(f"cannot read schedule spec {spec!r}: {exc}") from exc


def parse_enumeration(spec: str) -> dict:
    """Enumeration shorthand: enumerate:maxwake=W[,never][,crash]."""
    if not spec.startswith("enumerate:"):
        raise UsageError(f"not an enumeration spec: {spec!r}")
    kv = _parse_kv(spec.split(":", 1)[1])
    return {
        "max_wake": int(kv.get("maxwake", 0)),
        "include_never": bool(kv.get("never", False)),
        "include_crash": bool(kv.get("crash", False)),
    }


def _build(config: RunConfig):
    """Resolve a config into (graph, task, algorithm-to-run, tau, radius)."""
    if config.model not in MODELS:
        raise UsageError(f"model must be one of {MODELS}, got {config.model!r}")
    g = parse_graph(config.graph, id_bound=config.id_bound)
    id_bound = config.id_bound or g.id_bound
    if id_bound < g.node_count:
        raise UsageError(
            f"id bound {id_bound} is below the node count {g.node_count}"
        )
    task = task_from_spec(config.task)
    algo = parse_algorithm(config.algo)

    if algo.name == "cv3" and not is_oriented_ring(g):
        raise UsageError("cv3 requires an oriented ring")
    if config.model == "decoupled":
        if g.node_count <= SYMMETRY_NODE_LIMIT and not is_symmetric(g):
            raise UsageError("the decoupled model requires a symmetric graph")

    tau = radius = None
    if config.model == "local":
        if config.transform:
            raise UsageError("--transform applies to the async/decoupled models")
        if not isinstance(algo, LocalAlgorithm):
            raise UsageError(f"{algo.name} is not a synchronous algorithm")
    else:
        if config.transform:
            if not isinstance(algo, LocalAlgorithm):
                raise UsageError(f"{algo.name} cannot be transformed")
            tau, radius = transform_radii(algo, id_bound)
            algo = transform(algo, id_bound)
        elif not isinstance(algo, AsyncAlgorithm):
            raise UsageError(
                f"{algo.name} is synchronous; add --transform to run it "
                f"under the {config.model} model"
            )
    return g, id_bound, task, algo, tau, radius


def _node_rows(g, s, labeling):
    rows = []
    for v in range(g.node_count):
        rows.append(
            {
                "node": v,
                "id": g.ids[v],
                "wake": "never" if s.wake[v] is NEVER else s.wake[v],
                "fate": s.fate[v],
                "output": labeling[v],
            }
        )
    return rows


def _execute(config, g, id_bound, algo, s):
    if config.model == "local":
        return run_local(g, algo, id_bound)
    if config.model == "async":
        return run_async(g, s, algo, id_bound)
    return run_decoupled(
        g, s, algo, id_bound, trust_symmetry=g.node_count > SYMMETRY_NODE_LIMIT
    )


def cmd_run(config: RunConfig) -> dict:
    """Execute one run and verify it; the report always carries a verdict."""
    started = time.perf_counter()
    g, id_bound, task, algo, tau, radius = _build(config)
    s = (
        sync_schedule(g)
        if config.model == "local"
        else parse_schedule(config.schedule, g, default_seed=config.seed)
    )
    labeling = _execute(config, g, id_bound, algo, s)
    verdict = check_partial(task, g, labeling)
    report = {
        "config": config.to_dict(),
        "verdict": "pass" if verdict.ok else "fail",
        "witness": verdict.witness,
        "nodes": _node_rows(g, s, labeling),
        "tau": tau,
        "snapshot_radius": radius,
        "schedule": schedule_to_json(s),
        "wall_time_s": round(time.perf_counter() - started, 6),
    }
    return report


def cmd_enumerate(
    config: RunConfig, max_wake: int, include_never: bool, include_crash: bool
) -> dict:
    """Run every enumerated schedule; report counts and the first failure."""
    started = time.perf_counter()
    if config.model == "local":
        raise UsageError("enumeration applies to the async/decoupled models")
    g, id_bound, task, algo, tau, radius = _build(config)
    total = passes = failures = 0
    first_counterexample = None
    for s in enumerate_schedules(g, max_wake, include_never, include_crash):
        labeling = _execute(config, g, id_bound, algo, s)
        verdict = check_partial(task, g, labeling)
        total += 1
        if verdict.ok:
            passes += 1
        else:
            failures += 1
            if first_counterexample is None:
                first_counterexample = {
                    "schedule": schedule_to_json(s),
                    "witness": verdict.witness,
                    "labeling": {str(v): labeling[v] for v in labeling},
                }
    return {
        "config": config.to_dict(),
        "max_wake": max_wake,
        "include_never": include_never,
        "include_crash": include_crash,
        "total": total,
        "passes": passes,
        "failures": failures,
        "first_counterexample": first_counterexample,
        "tau": tau,
        "snapshot_radius": radius,
        "wall_time_s": round(time.perf_counter() - started, 6),
    }


def cmd_compare(config: RunConfig, repeat: int = 1) -> dict:
    """Run async and decoupled on identical inputs and diff the outputs.

    With repeat > 1 and a random schedule spec, seeds seed..seed+repeat-1
    are compared; otherwise the configured schedule is compared once.
    """
    started = time.perf_counter()
    cfg = RunConfig.from_dict({**config.to_dict(), "model": "async"})
    g, id_bound, task, algo, tau, radius = _build(cfg)
    if g.node_count <= SYMMETRY_NODE_LIMIT:
        if not is_symmetric(g):
            raise UsageError("comparison requires a symmetric graph")
    schedules = []
    if repeat > 1:
        if not config.schedule.startswith("random:"):
            raise UsageError("repeat > 1 needs a random schedule spec")
        base = _parse_kv(config.schedule.split(":", 1)[1])
        base_seed = int(base.get("seed", config.seed))
        for k in range(repeat):
            kv = dict(base)
            kv["seed"] = base_seed + k
            spec = "random:" + ",".join(f"{a}={b}" for a, b in kv.items())
            schedules.append((spec, parse_schedule(spec, g)))
    else:
        schedules.append(
            (config.schedule, parse_schedule(config.schedule, g, config.seed))
        )

    runs = mismatch_count = 0
    first_mismatch = None
    for spec, s in schedules:
        out_a = run_async(g, s, algo, id_bound)
        out_d = run_decoupled(
            g, s, algo, id_bound, trust_symmetry=g.node_count > SYMMETRY_NODE_LIMIT
        )
        runs += 1
        diff = [v for v in range(g.node_count) if out_a[v] != out_d[v]]
        if diff:
            mismatch_count += 1
            if first_mismatch is None:
                first_mismatch = {
                    "schedule_spec": spec,
                    "schedule": schedule_to_json(s),
                    "nodes": diff,
                    "async": {str(v): out_a[v] for v in diff},
                    "decoupled": {str(v): out_d[v] for v in diff},
                }
    return {
        "config": config.to_dict(),
        "runs": runs,
        "mismatches": mismatch_count,
        "identical": mismatch_count == 0,
        "first_mismatch": first_mismatch,
        "tau": tau,
        "snapshot_radius": radius,
        "wall_time_s": round(time.perf_counter() - started, 6),
    }


def report_to_csv(report: dict) -> str:
    """Flatten a run report to CSV (one row per node, verdict in a footer)."""
    lines = ["node,id,wake,fate,output"]
    for row in report.get("nodes", []):
        out = "" if row["output"] is None else row["output"]
        lines.append(f"{row['node']},{row['id']},{row['wake']},{row['fate']},{out}")
    if "verdict" in report:
        lines.append(f"# verdict={report['verdict']}")
    elif "failures" in report:
        lines.append(
            f"# total={report['total']} passes={report['passes']} "
            f"failures={report['failures']}"
        )
    elif "mismatches" in report:
        lines.append(f"# runs={report['runs']} mismatches={report['mismatches']}")
    return "\n".join(lines) + "\n"
