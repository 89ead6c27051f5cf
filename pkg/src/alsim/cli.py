"""Command-line client for the experiment service.

By default the service runs in-process (no server needed); --server
points the client at a remote instance instead.  Exit codes: 0 pass,
1 verdict failure / mismatch, 2 usage or config error, 3 size-limit
guard tripped.
"""

from __future__ import annotations

import argparse
import json
import sys

import httpx

from .runner import parse_enumeration, report_to_csv
from .service import app

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_SIZE_LIMIT = 3


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DeprecationWarning)
        from fastapi.testclient import TestClient

    return TestClient(app, raise_server_exceptions=False)


def _common_flags(p: argparse.ArgumentParser):
    p.add_argument("--graph", help="ring:<n>, torus:<r>x<c>, random:n=..,seed=.., or a JSON file")
    p.add_argument("--task", help="coloring:<c> or mis")
    p.add_argument("--algo", help="cv3, universal:<task>, or constant:<label>")
    p.add_argument("--model", choices=["local", "async", "decoupled"])
    p.add_argument("--transform", action="store_true", default=None)
    p.add_argument("--schedule", help="sync, random:seed=S,window=W,never=P,crash=P, or a JSON file")
    p.add_argument("--N", type=int, dest="N", help="declared id bound")
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=["json", "csv"], dest="output_format")
    p.add_argument("--config", help="JSON file with a RunConfig (flags override it)")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--server", help="base URL of a running service; default is in-process")


def _payload(args) -> dict:
    payload = {}
    if args.config:
        with open(args.config) as fh:
            payload.update(json.load(fh))
    for key in ("graph", "task", "algo", "model", "transform", "schedule",
                "N", "seed", "output_format"):
        val = getattr(args, key, None)
        if val is not None:
            payload[key] = val
    for required in ("graph", "task", "algo"):
        if required not in payload:
            print(f"error: --{required} is required", file=sys.stderr)
            raise SystemExit(EXIT_USAGE)
    return payload


def _emit(report: dict, args):
    fmt = report.get("config", {}).get("output_format", "json")
    text = (
        report_to_csv(report)
        if fmt == "csv"
        else json.dumps(report, indent=2) + "\n"
    )
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _post(args, path: str, payload: dict) -> dict:
    with _client(args.server) as client:
        resp = client.post(path, json=payload)
    if resp.status_code == 400:
        body = resp.json()
        print(f"error: {body.get('detail')}", file=sys.stderr)
        code = body.get("code")
        raise SystemExit(EXIT_SIZE_LIMIT if code == "size-limit" else EXIT_USAGE)
    if resp.status_code == 422:
        print(f"error: invalid request: {resp.text}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    resp.raise_for_status()
    return resp.json()


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="alsim",
        description="Workbench for local graph computation under "
        "asynchronous, crash-prone processes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="one execution, checker-verified")
    _common_flags(p_run)

    p_enum = sub.add_parser(
        "enumerate", help="exhaustively run every schedule in a small window"
    )
    _common_flags(p_enum)
    p_enum.add_argument("--max-wake", type=int, default=None)
    p_enum.add_argument("--never", action="store_true", default=None,
                        help="include never-waking nodes")
    p_enum.add_argument("--crash", action="store_true", default=None,
                        help="include crash-before-output fates")

    p_cmp = sub.add_parser(
        "compare", help="diff async vs decoupled outputs on identical inputs"
    )
    _common_flags(p_cmp)
    p_cmp.add_argument("--repeat", type=int, default=1,
                       help="number of random-schedule seeds to compare")

    args = parser.parse_args(argv)
    payload = _payload(args)

    if args.command == "run":
        report = _post(args, "/run", payload)
        _emit(report, args)
        return EXIT_PASS if report["verdict"] == "pass" else EXIT_FAIL

    if args.command == "enumerate":
        enum = {"max_wake": 0, "include_never": False, "include_crash": False}
        sched = payload.get("schedule", "")
        if isinstance(sched, str) and sched.startswith("enumerate:"):
            enum.update(parse_enumeration(sched))
            payload["schedule"] = "sync"
        if args.max_wake is not None:
            enum["max_wake"] = args.max_wake
        if args.never is not None:
            enum["include_never"] = True
        if args.crash is not None:
            enum["include_crash"] = True
        payload.setdefault("model", "async")
        payload.update(enum)
        report = _post(args, "/enumerate", payload)
        _emit(report, args)
        return EXIT_PASS if report["failures"] == 0 else EXIT_FAIL

    payload.setdefault("model", "async")
    payload["repeat"] = args.repeat
    report = _post(args, "/compare", payload)
    _emit(report, args)
    return EXIT_PASS if report["identical"] else EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
