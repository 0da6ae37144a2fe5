"""Command-line entry points: batch analysis, drift injection, serving.

Exit codes: 0 success, 1 unreadable/unparseable input, 2 invalid parameters.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .declare import constraints_to_csv
from .inject import DRIFT_KINDS, inject_drift
from .log import (
    LogParseError,
    dumps_canonical,
    load_log,
    serialize_csv,
    serialize_xes,
)
from .render import render_acf_chart, render_drift_chart, render_drift_map
from .report import AnalysisParams, ParamError, analyze, edfg_to_dot
from .windows import WindowError

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_PARAMS = 2


def _fail(message: str, code: int) -> int:
    print(f"procdrift: error: {message}", file=sys.stderr)
    return code


def _load(path: str) -> object:
    try:
        return load_log(path)
    except FileNotFoundError:
        raise LogParseError(f"no such file: {path}")
    except OSError as exc:
        raise LogParseError(f"cannot read {path}: {exc}")


def _cmd_analyze(args: argparse.Namespace) -> int:
    try:
        log = _load(args.log)
    except LogParseError as exc:
        return _fail(str(exc), EXIT_PARSE)

    kwargs: dict = {}
    if args.win_size is not None:
        kwargs["win_size"] = args.win_size
    if args.win_step is not None:
        kwargs["win_step"] = args.win_step
    if args.templates is not None:
        kwargs["kinds"] = tuple(
            t.strip() for t in args.templates.split(",") if t.strip()
        )
    if args.cut_threshold is not None:
        kwargs["cut_threshold"] = args.cut_threshold
    if args.penalty is not None:
        kwargs["penalty"] = args.penalty

    try:
        report = analyze(log, AnalysisParams(**kwargs))
    except ParamError as exc:
        return _fail(f"invalid parameter {exc.field}: {exc}", EXIT_PARAMS)
    except WindowError as exc:
        return _fail(f"invalid windowing: {exc}", EXIT_PARAMS)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    data = report.to_json_dict()

    (out_dir / "report.json").write_text(dumps_canonical(data), encoding="utf-8")
    (out_dir / "driftmap.svg").write_text(render_drift_map(data), encoding="utf-8")
    for cluster in data["clusters"]:
        k = cluster["id"]
        (out_dir / f"chart-{k}.svg").write_text(
            render_drift_chart(data, k), encoding="utf-8"
        )
        (out_dir / f"acf-{k}.svg").write_text(
            render_acf_chart(data, k), encoding="utf-8"
        )
        rows = [dict(r, cluster=k) for r in cluster["constraints_minimized"]]
        (out_dir / f"constraints-{k}.csv").write_text(
            constraints_to_csv(rows), encoding="utf-8"
        )
        (out_dir / f"edfg-{k}.dot").write_text(
            edfg_to_dot(cluster["edfg"]), encoding="utf-8"
        )

    summary = {
        "out": str(out_dir),
        "n_traces": data["log"]["n_traces"],
        "n_windows": len(data["windows"]),
        "constraints": data["constraint_counts"],
        "n_clusters": len(data["clusters"]),
        "global_change_points": data["global_change_points"],
        "spread": data["spread"],
        "clusters": [
            {
                "id": c["id"],
                "size": c["size"],
                "erratic": c["erratic"],
                "tags": c["tags"],
                "change_points": c["change_points"],
            }
            for c in data["clusters"]
        ],
    }
    if args.format == "json":
        print(json.dumps(summary, indent=2))
    else:
        print(
            f"analyzed {summary['n_traces']} traces in {summary['n_windows']} windows; "
            f"{summary['constraints']['clustered']} constraint series in "
            f"{summary['n_clusters']} clusters (+{summary['constraints']['stable']} stable)"
        )
        for c in summary["clusters"]:
            tags = ",".join(c["tags"])
            print(
                f"  cluster {c['id']}: {c['size']} constraints, "
                f"erratic {c['erratic']:.2f}, drift points {c['change_points']}, [{tags}]"
            )
        print(f"wrote report.json and figures to {out_dir}/")
    return EXIT_OK


def _cmd_inject(args: argparse.Namespace) -> int:
    try:
        fractions = tuple(float(x) for x in args.at.split(","))
    except ValueError:
        return _fail(f"--at must be comma-separated numbers, got {args.at!r}", EXIT_PARAMS)
    if not fractions or any(not (0.0 < f < 1.0) for f in fractions):
        return _fail("--at fractions must lie strictly between 0 and 1", EXIT_PARAMS)

    try:
        log = _load(args.log)
    except LogParseError as exc:
        return _fail(str(exc), EXIT_PARSE)

    try:
        mutated, truth = inject_drift(log, args.kind, fractions, seed=args.seed)
    except ValueError as exc:
        return _fail(str(exc), EXIT_PARAMS)

    out_path = Path(args.out)
    if out_path.parent != Path(""):
        out_path.parent.mkdir(parents=True, exist_ok=True)
    if out_path.suffix.lower() == ".csv":
        out_path.write_text(serialize_csv(mutated), encoding="utf-8")
    else:
        out_path.write_bytes(serialize_xes(mutated))
    truth_path = out_path.with_name(out_path.stem + ".truth.json")
    truth_path.write_text(dumps_canonical(truth), encoding="utf-8")
    print(
        f"wrote {out_path} ({truth['kind']} drift at traces "
        f"{truth['trace_indices']}) and {truth_path}"
    )
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    bind = args.bind or os.environ.get("BIND_ADDR", "127.0.0.1:8000")
    host, _, port_text = bind.rpartition(":")
    if not host or not port_text.isdigit():
        return _fail(f"--bind must look like HOST:PORT, got {bind!r}", EXIT_PARAMS)
    data_dir = args.data_dir or os.environ.get("DATA_DIR", "procdrift-data")

    try:
        app = create_app(data_dir)
    except OSError as exc:
        return _fail(f"cannot use data dir {data_dir!r}: {exc}", EXIT_PARSE)
    try:
        uvicorn.run(app, host=host, port=int(port_text), log_level="warning")
    except (OSError, SystemExit) as exc:
        code = exc.code if isinstance(exc, SystemExit) else 1
        if code:
            return _fail(f"server failed to start on {bind}", EXIT_PARSE)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="procdrift",
        description="Detect, classify, and explain concept drift in process event logs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", help="run the full drift analysis on one log")
    p_an.add_argument("--log", required=True, help="path to an XES or CSV event log")
    p_an.add_argument("--win-size", type=int, default=None, help="traces per window")
    p_an.add_argument("--win-step", type=int, default=None, help="traces between window starts")
    p_an.add_argument(
        "--templates",
        default=None,
        help="comma-separated constraint template names (default: all nine)",
    )
    p_an.add_argument("--cut-threshold", type=float, default=None,
                      help="dendrogram cut distance for clustering")
    p_an.add_argument("--penalty", default=None,
                      help="change-point penalty: 'auto' or a positive number")
    p_an.add_argument("--out", default="procdrift-out", help="output directory")
    p_an.add_argument("--format", choices=("text", "json"), default="text",
                      help="summary format printed to stdout")
    p_an.set_defaults(func=_cmd_analyze)

    p_in = sub.add_parser("inject-drift", help="write a copy of a log with known drifts")
    p_in.add_argument("--log", required=True, help="path to the source log")
    p_in.add_argument("--kind", required=True, choices=DRIFT_KINDS)
    p_in.add_argument("--at", required=True,
                      help="comma-separated trace-position fractions in (0,1)")
    p_in.add_argument("--out", required=True,
                      help="output log path (.xes or .csv); ground truth goes to "
                           "<name>.truth.json alongside")
    p_in.add_argument("--seed", type=int, default=None,
                      help="override the content-derived RNG seed")
    p_in.set_defaults(func=_cmd_inject)

    p_sv = sub.add_parser("serve", help="start the HTTP analysis service")
    p_sv.add_argument("--bind", default=None, help="HOST:PORT (default 127.0.0.1:8000)")
    p_sv.add_argument("--data-dir", default=None,
                      help="directory for uploaded logs and reports")
    p_sv.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
