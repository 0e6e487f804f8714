"""Command line entry points.

    sectional validate FILE [--format ...]
    sectional build NAME --input FILE --out FILE
    sectional verify {tensor,crossed,smash,quotient,germ,convolution,all}
              --input FILE [FILE ...] [--ring R] [--seed N]
              [--format {json,text}] [--no-timestamp]

Exit codes: 0 everything passed, 1 a verification or validation failed
(the report carries witnesses; capability refusals count as failures with a
distinct status), 2 invalid input (unparseable file, dangling reference,
unknown selector target).
"""

from __future__ import annotations

import argparse
import datetime
import json
import re
import sys

from . import __version__
from .rings import Ring, ring_from_spec
from .validation import SectionalError, StructureError
from .workspace import (
    THEOREMS,
    Builder,
    WorkspaceError,
    WorkspaceFile,
    parse_workspace,
    run_workspace,
)


def _load(path: str) -> WorkspaceFile:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise WorkspaceError(f"{path}: {exc.strerror or exc}")
    return parse_workspace(text, path=path)


def parse_ring_override(text: str) -> Ring:
    if text == "q":
        return ring_from_spec({"kind": "q"})
    if text == "z":
        return ring_from_spec({"kind": "z"})
    match = re.fullmatch(r"zmod:?(\d+)", text)
    if match:
        return ring_from_spec({"kind": "zmod", "n": int(match.group(1))})
    try:
        return ring_from_spec(json.loads(text))
    except (json.JSONDecodeError, SectionalError):
        raise WorkspaceError(
            f"cannot parse ring override {text!r}; use q, z, zmodN, or a JSON literal"
        )


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    lines = [f"sectional {report['command']} report"]
    if "selector" in report:
        lines.append(f"selector: {report['selector']}  seed: {report.get('seed')}")
    if "timestamp" in report:
        lines.append(f"timestamp: {report['timestamp']}")
    for wsrep in report.get("workspaces", []):
        lines.append(f"-- {wsrep['path'] or '<stdin>'} (ring {wsrep['ring']})")
        for task in wsrep["tasks"]:
            mark = {"pass": "PASS", "fail": "FAIL", "capability": "SKIP"}[task["status"]]
            extra = ""
            if task.get("data"):
                keys = [
                    f"{k}={v}" for k, v in sorted(task["data"].items())
                    if not isinstance(v, (dict, list))
                ]
                if keys:
                    extra = "  [" + ", ".join(keys) + "]"
            lines.append(f"  [{mark}] task {task['index']}: {task['summary']}{extra}")
            if task.get("witness"):
                lines.append(f"         witness: {tuple(task['witness'])}")
            if task.get("message"):
                lines.append(f"         {task['message']}")
        lines.append(f"   ok: {wsrep['ok']}")
    lines.append(f"overall: {'ok' if report['ok'] else 'FAILED'}")
    return "\n".join(lines) + "\n"


def _cmd_validate(args) -> int:
    try:
        ws = _load(args.file)
    except WorkspaceError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    try:
        ring = (parse_ring_override(args.ring) if args.ring
                else ring_from_spec(ws.ring_spec or {"kind": "q"}))
    except (WorkspaceError, StructureError) as exc:
        print(str(exc), file=sys.stderr)
        return 2

    builder = Builder(ws, ring)
    tasks = []
    index = 0

    def attempt(summary, thunk):
        nonlocal index
        entry = {"index": index, "kind": "validate", "summary": summary,
                 "status": "pass", "data": {}}
        try:
            thunk()
        except StructureError as exc:
            failure = exc.report.first()
            entry["status"] = "fail"
            entry["witness"] = list(failure.witness) if failure else []
            entry["message"] = exc.report.summary()
        except SectionalError as exc:
            entry["status"] = "fail"
            entry["message"] = str(exc)
        tasks.append(entry)
        index += 1

    for name, stanza in ws.semigroupoids.items():
        attempt(f"validate semigroupoid {name}", lambda n=name: builder.semigroupoid(n))
        if "inv" in stanza:
            attempt(f"validate inverse structure {name}", lambda n=name: builder.inverse(n))
    for name in ws.homomorphisms:
        attempt(f"validate homomorphism {name}", lambda n=name: builder.homomorphism(n))
    for name in ws.actions:
        attempt(f"validate action {name}", lambda n=name: builder.action(n))
    for name in ws.bundles:
        attempt(f"validate bundle {name}", lambda n=name: builder.bundle(n))
    for name in ws.congruences:
        attempt(f"validate congruence {name}", lambda n=name: builder.congruence(n))
    for name in ws.bundle_actions:
        attempt(f"validate bundle action {name}", lambda n=name: builder.bundle_action(n))

    report = {
        "command": "validate",
        "tool": "sectional",
        "version": __version__,
        "workspaces": [{
            "path": ws.path,
            "ring": ring.describe(),
            "tasks": tasks,
            "ok": all(t["status"] == "pass" for t in tasks),
        }],
    }
    report["ok"] = report["workspaces"][0]["ok"]
    sys.stdout.write(_render(report, args.format))
    return 0 if report["ok"] else 1


def _cmd_build(args) -> int:
    try:
        ws = _load(args.input)
    except WorkspaceError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    task = next(
        (t for t in ws.tasks if t.kind == "build" and t.id == args.name), None
    )
    if task is None:
        print(f"{args.input}: no build task with id {args.name!r}", file=sys.stderr)
        return 2
    try:
        ring = (parse_ring_override(args.ring) if args.ring
                else ring_from_spec(ws.ring_spec or {"kind": "q"}))
    except (WorkspaceError, StructureError) as exc:
        print(str(exc), file=sys.stderr)
        return 2

    from .workspace import execute_task
    result = execute_task(Builder(ws, ring), task, 0, args.seed)
    if result.status != "pass":
        print(f"build failed: {result.message or result.witness}", file=sys.stderr)
        return 1
    payload = json.dumps(result.data["structure"], indent=2, sort_keys=True) + "\n"
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(payload)
    print(f"wrote {args.out} ({result.data['arrows']} arrows)")
    return 0


def _cmd_verify(args) -> int:
    ring = None
    try:
        if args.ring:
            ring = parse_ring_override(args.ring)
        workspaces = [_load(path) for path in args.input]
    except (WorkspaceError, StructureError) as exc:
        print(str(exc), file=sys.stderr)
        return 2

    reports = []
    for ws in workspaces:
        reports.append(run_workspace(
            ws, selector=args.selector, seed=args.seed,
            ring_override=ring, timing=not args.no_timestamp,
            parallel=args.parallel,
        ))
    if args.selector != "all" and all(r["matched_tasks"] == 0 for r in reports):
        print(f"no verify tasks match selector {args.selector!r}", file=sys.stderr)
        return 2

    report = {
        "command": "verify",
        "tool": "sectional",
        "version": __version__,
        "selector": args.selector,
        "seed": args.seed,
        "workspaces": reports,
        "ok": all(r["ok"] for r in reports),
    }
    if not args.no_timestamp:
        report["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    sys.stdout.write(_render(report, args.format))
    return 0 if report["ok"] else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sectional",
        description="exact workbench for finite semigroupoids, bundles, and "
                    "their sectional algebras",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="validate every structure in a file")
    p_val.add_argument("file")
    p_val.add_argument("--ring", default=None, help="override the coefficient ring")
    p_val.add_argument("--format", choices=("json", "text"), default="text")
    p_val.set_defaults(func=_cmd_validate)

    p_build = sub.add_parser("build", help="run a build task and write the result")
    p_build.add_argument("name", help="id of a build task in the input file")
    p_build.add_argument("--input", required=True)
    p_build.add_argument("--out", required=True)
    p_build.add_argument("--ring", default=None)
    p_build.add_argument("--seed", type=int, default=0)
    p_build.set_defaults(func=_cmd_build)

    p_ver = sub.add_parser("verify", help="run verification tasks")
    p_ver.add_argument("selector", choices=THEOREMS + ("all",))
    p_ver.add_argument("--input", required=True, nargs="+")
    p_ver.add_argument("--ring", default=None)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--format", choices=("json", "text"), default="text")
    p_ver.add_argument("--no-timestamp", action="store_true",
                       help="omit the timestamp and wall-time fields so reports "
                            "are byte-identical across runs")
    p_ver.add_argument("--parallel", action="store_true",
                       help="run independent tasks concurrently; report order "
                            "stays by task index")
    p_ver.set_defaults(func=_cmd_verify)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
