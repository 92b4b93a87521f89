"""Command-line pipeline: synth -> ingest -> events -> networks -> stats -> predict.

Every command reads and writes plain CSV/JSON files so stages can be
rerun, resumed, and diffed.  Runs are reproducible: given identical
inputs, parameters, and seeds the artifacts are byte-identical, and each
run drops a provenance record (tool version, parameters, input digests)
next to its outputs.

Exit codes: 0 success, 2 missing input, 3 invalid parameter, 4 broken
internal invariant.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .contacts import build_tcn, joint_degree_distribution, reachability_curves
from .events import read_events_csv, extract_events, write_events_csv
from .ranking import build_report, write_report_json
from .sessions import (
    DEFAULT_TZ_OFFSET_MINUTES,
    clean_sessions,
    parse_sessions,
    write_rejects_csv,
    write_sessions_csv,
)
from .stats import (
    ShuffleConfig,
    artificial_deseason,
    delta_distribution,
    duration_distribution,
    histogram_metadata,
    integral_day_distribution,
    natural_deseason,
    size_distribution,
    summarize,
    write_histogram_csv,
)
from .synth import GeneratorConfig, generate
from .transmission import (
    aggregate_tg,
    build_tg,
    transmission_durations,
    write_aggregate_csv,
    write_degrees_csv,
    write_tg_edges_csv,
)
from .validation import InvariantViolation, check_event_set

DAY_SECONDS = 86400
REACH_PRESET_DAYS = (1, 2, 3, 5, 7, 8)

EXIT_OK = 0
EXIT_MISSING_INPUT = 2
EXIT_INVALID_PARAMETER = 3
EXIT_INVARIANT = 4


class ParameterError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); map usage errors to 3
        raise ParameterError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tempnet", description=__doc__.split("\n", 1)[0])
    parser.add_argument("--version", action="version", version=f"tempnet {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--out-dir", default=".", help="directory for artifacts")
        return p

    p = add("synth", "generate a synthetic session log")
    p.add_argument("--config", help="flat key=value generator config file")
    p.add_argument("--seed", type=int)
    p.add_argument("--n-users", type=int)
    p.add_argument("--n-aps", type=int)
    p.add_argument("--n-weeks", type=int)
    p.add_argument("--attendance-prob", type=float)
    p.add_argument("--free-sessions-per-week", type=float)
    p.add_argument("--no-weekly-schedule", action="store_true")
    p.set_defaults(handler=_cmd_synth)

    p = add("ingest", "parse and clean a raw session CSV (optionally gzipped)")
    p.add_argument("--input", required=True)
    p.add_argument("--tz-offset-minutes", type=int, default=None)
    p.set_defaults(handler=_cmd_ingest)

    p = add("events", "extract event interactions from cleaned sessions")
    p.add_argument("--input", required=True, help="cleaned session CSV")
    p.set_defaults(handler=_cmd_events)

    p = add("tcn", "build one temporal contact network window")
    p.add_argument("--input", required=True, help="event CSV")
    p.add_argument("--t1", type=int, default=None, help="window start (exclusive)")
    p.add_argument("--t2", type=int, default=None, help="window end (inclusive)")
    p.add_argument("--joint-days", type=int, default=None,
                   help="also emit the joint degree distribution at this window length")
    p.set_defaults(handler=_cmd_tcn)

    p = add("reach", "reachability curves over tiled windows")
    p.add_argument("--input", required=True, help="event CSV")
    p.add_argument("--delta-t-days", default=",".join(str(d) for d in REACH_PRESET_DAYS),
                   help="comma-separated window lengths in days")
    p.set_defaults(handler=_cmd_reach)

    p = add("tg", "build the transmission graph and its aggregate")
    p.add_argument("--input", required=True, help="event CSV")
    p.set_defaults(handler=_cmd_tg)

    p = add("stats", "empirical distributions and summary statistics")
    p.add_argument("--input", required=True, help="event CSV")
    p.add_argument("--size-filter", type=int, default=None)
    p.add_argument("--log-factor", type=float, default=1.5)
    p.set_defaults(handler=_cmd_stats)

    p = add("deseason", "remove circadian and weekly rhythm from durations")
    p.add_argument("--input", required=True, help="event CSV")
    p.add_argument("--method", choices=("natural", "artificial"), required=True)
    p.add_argument("--tz-offset-minutes", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rounds", type=int, default=None,
                   help="swap attempts, default 10x the event count")
    p.set_defaults(handler=_cmd_deseason)

    p = add("predict", "rank users and score the activity-potential predictor")
    p.add_argument("--input", required=True, help="event CSV")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--alpha", type=float)
    group.add_argument("--optimize", action="store_true")
    p.add_argument("--grid-step", type=float, default=0.01)
    p.add_argument("--top", type=int, default=10)
    p.set_defaults(handler=_cmd_predict)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "handler", None) is None:
            parser.print_help()
            return EXIT_OK
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        result = args.handler(args, out_dir)
    except ParameterError as exc:
        return _fail(EXIT_INVALID_PARAMETER, "invalid_parameter", str(exc))
    except FileNotFoundError as exc:
        return _fail(EXIT_MISSING_INPUT, "missing_input", str(exc))
    except ValueError as exc:
        return _fail(EXIT_INVALID_PARAMETER, "invalid_parameter", str(exc))
    except InvariantViolation as exc:
        return _fail(EXIT_INVARIANT, "invariant_violation", str(exc))
    except Exception as exc:  # anything else is an internal failure
        return _fail(EXIT_INVARIANT, "internal_error", f"{type(exc).__name__}: {exc}")
    _write_provenance(args, out_dir, result)
    return EXIT_OK


def _fail(code: int, kind: str, message: str) -> int:
    json.dump({"error": {"code": code, "kind": kind, "message": message}}, sys.stderr)
    sys.stderr.write("\n")
    return code


def _write_provenance(args, out_dir: Path, result: dict) -> None:
    parameters = {
        k: v for k, v in vars(args).items() if k not in ("handler",) and not callable(v)
    }
    record = {
        "tool": "tempnet",
        "version": __version__,
        "command": args.command,
        "parameters": parameters,
        "inputs": result.pop("inputs", {}),
        "artifacts": result.pop("artifacts", []),
        "summary": result,
    }
    path = out_dir / f"provenance_{args.command}.json"
    path.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _require_input(path_text: str) -> Path:
    path = Path(path_text)
    if not path.exists():
        raise FileNotFoundError(f"input file {path} does not exist")
    return path


def _tz_offset(args) -> int:
    flag = getattr(args, "tz_offset_minutes", None)
    if flag is not None:
        return flag
    env = os.environ.get("TEMPNET_TZ_OFFSET")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ParameterError(f"TEMPNET_TZ_OFFSET must be an integer, got {env!r}")
    return DEFAULT_TZ_OFFSET_MINUTES


def _load_events(path_text: str):
    path = _require_input(path_text)
    events = read_events_csv(path)
    check_event_set(events)
    return events, path


# ---------------------------------------------------------------- commands


def _cmd_synth(args, out_dir: Path) -> dict:
    cfg = GeneratorConfig.from_file(args.config) if args.config else GeneratorConfig()
    overrides = {
        "seed": args.seed,
        "n_users": args.n_users,
        "n_aps": args.n_aps,
        "n_weeks": args.n_weeks,
        "attendance_prob": args.attendance_prob,
        "free_sessions_per_week": args.free_sessions_per_week,
    }
    cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    if args.no_weekly_schedule:
        cfg = replace(cfg, weekly_schedule=False)
    cfg.validate()

    sessions = generate(cfg)
    target = out_dir / "sessions.csv"
    write_sessions_csv(sessions, target)
    return {
        "artifacts": [target.name],
        "config": {k: getattr(cfg, k) for k in cfg.__dataclass_fields__},
        "n_sessions": len(sessions),
    }


def _cmd_ingest(args, out_dir: Path) -> dict:
    path = _require_input(args.input)
    parsed = parse_sessions(path, tz_offset_minutes=_tz_offset(args))
    cleaned = clean_sessions(parsed.sessions)

    sessions_path = out_dir / "cleaned_sessions.csv"
    rejects_path = out_dir / "rejects.csv"
    write_sessions_csv(cleaned, sessions_path)
    write_rejects_csv(parsed.rejects, rejects_path)
    return {
        "artifacts": [sessions_path.name, rejects_path.name],
        "inputs": {str(path): _sha256(path)},
        "n_sessions": len(cleaned),
        "n_rejects": len(parsed.rejects),
    }


def _cmd_events(args, out_dir: Path) -> dict:
    path = _require_input(args.input)
    parsed = parse_sessions(path)
    if parsed.rejects:
        raise InvariantViolation(
            f"cleaned session input contains {len(parsed.rejects)} malformed rows"
        )
    events = extract_events(clean_sessions(parsed.sessions))
    target = out_dir / "events.csv"
    write_events_csv(events, target)
    return {
        "artifacts": [target.name],
        "inputs": {str(path): _sha256(path)},
        "n_events": len(events),
    }


def _cmd_tcn(args, out_dir: Path) -> dict:
    events, path = _load_events(args.input)
    if not len(events):
        raise InvariantViolation("event set is empty")
    span = events.span()
    t1 = args.t1 if args.t1 is not None else span[0] - 1
    t2 = args.t2 if args.t2 is not None else span[1]
    tcn = build_tcn(events, (t1, t2))

    edges_path = out_dir / "tcn_edges.csv"
    with edges_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["source", "target", "phi", "bidirectional"])
        for (i, j), phi in sorted(tcn.edges().items()):
            writer.writerow([i, j, phi, int(tcn.is_bidirectional(i, j))])

    reach_path = out_dir / "tcn_reachability.csv"
    with reach_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["user", "reachability"])
        for user in sorted(tcn.vertices):
            writer.writerow([user, tcn.out_degree(user)])

    artifacts = [edges_path.name, reach_path.name]
    if args.joint_days is not None:
        joint = joint_degree_distribution(events, args.joint_days * DAY_SECONDS)
        joint_path = out_dir / f"joint_degree_{args.joint_days}d.csv"
        with joint_path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["d_out", "d_in", "probability"])
            for (d_out, d_in), prob in sorted(joint.probabilities.items()):
                writer.writerow([d_out, d_in, repr(prob)])
        artifacts.append(joint_path.name)

    return {
        "artifacts": artifacts,
        "inputs": {str(path): _sha256(path)},
        "window": [t1, t2],
        "n_vertices": len(tcn.vertices),
        "n_edges": tcn.n_edges(),
    }


def _cmd_reach(args, out_dir: Path) -> dict:
    events, path = _load_events(args.input)
    try:
        days = [int(part) for part in args.delta_t_days.split(",") if part.strip()]
    except ValueError:
        raise ParameterError(f"--delta-t-days must be comma-separated integers, got {args.delta_t_days!r}")
    if not days:
        raise ParameterError("--delta-t-days must name at least one window length")
    points = reachability_curves(events, [d * DAY_SECONDS for d in days])

    target = out_dir / "reach_curve.csv"
    with target.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["delta_t_seconds", "tcn_avg", "acn_avg", "tcn_max", "acn_max"])
        for pt in points:
            writer.writerow(
                [pt.delta_t, repr(pt.tcn_avg), repr(pt.acn_avg), repr(pt.tcn_max), repr(pt.acn_max)]
            )
    return {
        "artifacts": [target.name],
        "inputs": {str(path): _sha256(path)},
        "truncated_lengths": [pt.delta_t for pt in points if pt.truncated],
    }


def _cmd_tg(args, out_dir: Path) -> dict:
    events, path = _load_events(args.input)
    tg = build_tg(events)
    agg = aggregate_tg(tg)

    edges_path = out_dir / "tg_edges.csv"
    aggregate_path = out_dir / "tg_aggregate.csv"
    degrees_path = out_dir / "tg_degrees.csv"
    write_tg_edges_csv(tg, edges_path)
    write_aggregate_csv(agg, aggregate_path)
    write_degrees_csv(agg, degrees_path)
    return {
        "artifacts": [edges_path.name, aggregate_path.name, degrees_path.name],
        "inputs": {str(path): _sha256(path)},
        "n_edges": tg.n_edges(),
    }


def _cmd_stats(args, out_dir: Path) -> dict:
    events, path = _load_events(args.input)
    tg = build_tg(events)
    deltas = transmission_durations(tg)

    histograms = {
        "event_duration_hist": duration_distribution(events, args.size_filter, args.log_factor),
        "event_size_hist": size_distribution(events),
        "delta_hist": delta_distribution(deltas, args.log_factor),
        "integral_day_hist": integral_day_distribution(deltas),
    }
    artifacts = []
    metadata = {}
    for name, hist in histograms.items():
        target = out_dir / f"{name}.csv"
        write_histogram_csv(hist, target)
        artifacts.append(target.name)
        metadata[name] = histogram_metadata(hist)

    summary_path = out_dir / "stats_summary.json"
    summary = {"histograms": metadata, **summarize(events, tg)}
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    artifacts.append(summary_path.name)
    return {
        "artifacts": artifacts,
        "inputs": {str(path): _sha256(path)},
        "n_transmission_edges": len(deltas),
    }


def _cmd_deseason(args, out_dir: Path) -> dict:
    events, path = _load_events(args.input)
    artifacts = []
    extras: dict = {}
    if args.method == "natural":
        tg = build_tg(events)
        deltas = natural_deseason(tg, _tz_offset(args))
        hist = delta_distribution(deltas)
        target = out_dir / "natural_delta_hist.csv"
        write_histogram_csv(hist, target)
        artifacts.append(target.name)
        extras["n_kept_edges"] = len(deltas)
        extras["n_total_edges"] = tg.n_edges()
    else:
        rounds = args.rounds if args.rounds is not None else max(1, 10 * len(events))
        if rounds < 1:
            raise ParameterError(f"--rounds must be >= 1, got {rounds}")
        result = artificial_deseason(events, ShuffleConfig(seed=args.seed, rounds=rounds))
        events_path = out_dir / "shuffled_events.csv"
        write_events_csv(result.events, events_path)
        artifacts.append(events_path.name)

        deltas = transmission_durations(build_tg(result.events))
        hist = delta_distribution(deltas)
        hist_path = out_dir / "shuffled_delta_hist.csv"
        write_histogram_csv(hist, hist_path)
        artifacts.append(hist_path.name)
        extras.update(
            attempted=result.attempted, applied=result.applied, rejected=result.rejected
        )
    return {"artifacts": artifacts, "inputs": {str(path): _sha256(path)}, **extras}


def _cmd_predict(args, out_dir: Path) -> dict:
    events, path = _load_events(args.input)
    if args.top < 1:
        raise ParameterError(f"--top must be >= 1, got {args.top}")
    alpha = None if args.optimize else args.alpha
    report = build_report(events, alpha=alpha, grid_step=args.grid_step)

    report_path = out_dir / "ranking_report.json"
    write_report_json(report, report_path)

    users_path = out_dir / "ranking_users.csv"
    with users_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["user", "kappa", "mpap", "ar"])
        for s in report.scores:
            writer.writerow([s.user, s.kappa, repr(s.mpap), repr(report.ar[s.user])])

    ranks_path = out_dir / "ranking_ranks.csv"
    with ranks_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["rank", "kappa", "mean_ar", "std_ar", "count"])
        for r in report.rank_table:
            writer.writerow([r.rank, r.kappa, repr(r.mean_ar), repr(r.std_ar), r.count])

    curve_path = out_dir / "f_curve.csv"
    with curve_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["alpha", "f"])
        for a, f in report.f_curve:
            writer.writerow([repr(a), repr(f)])

    return {
        "artifacts": [report_path.name, users_path.name, ranks_path.name, curve_path.name],
        "inputs": {str(path): _sha256(path)},
        "alpha_star": report.alpha_star,
        "top_users": report.top_users(args.top),
    }


if __name__ == "__main__":
    raise SystemExit(main())
