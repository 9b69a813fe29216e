"""Command-line entry points.

Subcommands: ``play`` (run or serve a hand), ``eval-perception``,
``gen-schedule``, ``aggregate``, and ``replay-counters``. Report paths
write report.json, report.csv, and report.png side by side. The listen
address and log directory honor HOLDEMLOOP_LISTEN and HOLDEMLOOP_LOG_DIR
environment overrides.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import bench, perception_eval, profiles, report
from .reference import TRAJECTORY_COUNTERS, trajectory_labels
from .server import SessionService, serve
from .session import SessionConfig, classify_failure, run_hand
from .tabletop import canonical_dumps

logger = logging.getLogger(__name__)


def _add_report_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--report", metavar="DIR", help="write report files under DIR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holdemloop",
        description="closed-loop tabletop hold'em simulator and evaluation suite",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    play = sub.add_parser("play", help="run one hand, headless or served")
    play.add_argument("--config", help="session config document")
    play.add_argument("--listen", help="host:port for the wire server")
    play.add_argument("--session-id", default="hand-1")
    play.add_argument("--out", help="write the session record here")
    play.add_argument(
        "--tick", type=float, default=0.0,
        help="seconds between served captures (camera cadence)",
    )

    evalp = sub.add_parser("eval-perception", help="score a perception problem set")
    evalp.add_argument("problem_set", help="problem-set directory")
    evalp.add_argument("--strict", action="store_true", help="error on malformed predictions")
    _add_report_arg(evalp)

    gen = sub.add_parser("gen-schedule", help="emit the 80-trial schedule")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="output directory")

    agg = sub.add_parser("aggregate", help="aggregate a trial outcome log")
    agg.add_argument("outcome_log", help="file with one outcome document per line")
    _add_report_arg(agg)

    rep = sub.add_parser("replay-counters", help="counters for a per-state label log")
    rep.add_argument("labels_file", help="file with one label per line, or i/ii/iii")
    rep.add_argument(
        "--reference",
        choices=sorted(TRAJECTORY_COUNTERS),
        help="compare against this published trajectory",
    )
    _add_report_arg(rep)

    prof = sub.add_parser("profiles", help="dump the named profiles")
    prof.add_argument("--out", required=True)
    return parser


def _cmd_play(args: argparse.Namespace) -> int:
    if args.config:
        config = SessionConfig.from_doc(json.loads(Path(args.config).read_text("utf-8")))
    else:
        config = SessionConfig(
            robot_agent={"kind": "heuristic"}, opponent_agent={"kind": "heuristic"}
        )

    listen = args.listen or os.environ.get("HOLDEMLOOP_LISTEN")
    if listen:
        host, _, port = listen.partition(":")
        service = SessionService()
        served = service.create_session(args.session_id, config)
        server, _ = serve(service, host or "127.0.0.1", int(port or 0))
        print(f"listening on {server.server_address[0]}:{server.server_address[1]}")
        try:
            service.run_session(served, state_tick=args.tick)
        finally:
            server.shutdown()
        record = served.session.record()
    else:
        record = run_hand(config)

    print(
        f"hand over: outcome={record.outcome} cause={record.termination_cause} "
        f"states={record.counters.states}"
    )
    print(canonical_dumps(record.counters.to_doc(), pretty=True), end="")
    print(f"failure classes: {classify_failure(record)}")

    out_path = args.out or _log_dir_file("session.json")
    if out_path:
        Path(out_path).parent.mkdir(parents=True, exist_ok=True)
        Path(out_path).write_bytes(record.encode())
        print(f"record written to {out_path}")
    return 0


def _log_dir_file(name: str) -> str | None:
    log_dir = os.environ.get("HOLDEMLOOP_LOG_DIR")
    return str(Path(log_dir) / name) if log_dir else None


def _cmd_eval_perception(args: argparse.Namespace) -> int:
    _, run = perception_eval.evaluate_problem_set(args.problem_set, strict=args.strict)
    print(report.perception_table(run))
    if args.report:
        out = report.write_perception_report(run, args.report)
        print(f"report files under {out}")
    return 0


def _cmd_gen_schedule(args: argparse.Namespace) -> int:
    schedule = bench.generate_schedule(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "schedule.json"
    doc = {"seed": args.seed, "trials": [s.to_doc() for s in schedule]}
    path.write_text(canonical_dumps(doc, pretty=True), encoding="utf-8")
    print(f"{len(schedule)} trials written to {path}")
    return 0


def _cmd_aggregate(args: argparse.Namespace) -> int:
    outcomes = []
    with open(args.outcome_log, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                outcomes.append(bench.TrialOutcome.from_doc(json.loads(line)))
    result = bench.aggregate_outcomes(outcomes)
    print(report.bench_table(result))
    if args.report:
        out = report.write_bench_report(result, args.report)
        print(f"report files under {out}")
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    if args.labels_file in ("i", "ii", "iii"):
        labels = trajectory_labels(args.labels_file)
        reference_key = args.reference or args.labels_file
    else:
        text = Path(args.labels_file).read_text(encoding="utf-8")
        labels = [line for line in text.splitlines() if line.strip()]
        reference_key = args.reference

    counters = bench.replay_labels(labels)
    if reference_key:
        check = bench.check_against_reference(counters, reference_key)
        print(report.replay_table(check))
        if args.report:
            out = report.write_replay_report(check, args.report)
            print(f"report files under {out}")
    else:
        print(canonical_dumps(counters.to_doc(), pretty=True), end="")
    return 0


def _cmd_profiles(args: argparse.Namespace) -> int:
    profiles.write_profile_file(args.out)
    print(f"profiles written to {args.out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    handlers = {
        "play": _cmd_play,
        "eval-perception": _cmd_eval_perception,
        "gen-schedule": _cmd_gen_schedule,
        "aggregate": _cmd_aggregate,
        "replay-counters": _cmd_replay,
        "profiles": _cmd_profiles,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
