"""Command line entry points.

    verdant simulate --scenario dry-start --out report.json
    verdant serve --scenario dry-start --port 8000 --speed 60

``--scenario`` accepts either a path to a scenario JSON file or the name
of a shipped scenario. Exit codes are a stable contract: 0 success,
1 validation error (bad flags, unreadable/invalid inputs), 2 runtime
fault.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .events import EventKind
from .service import PersistenceError, ServiceError, serve
from .sim import (Scenario, ScenarioError, Trace, builtin_scenario,
                  builtin_scenario_names, load_scenario, run)
from .thresholds import ProfileError, ThresholdProfile, default_profile, load_profile

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


class _Parser(argparse.ArgumentParser):
    """argparse with the exit-code contract (usage errors are validation)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_VALIDATION)


def _resolve_scenario(spec: str, seed: int | None) -> Scenario:
    path = Path(spec)
    if path.exists():
        scenario = load_scenario(path)
    elif spec in builtin_scenario_names():
        scenario = builtin_scenario(spec)
    else:
        raise ScenarioError(
            "scenario", f"{spec!r} is neither a file nor a builtin scenario "
            f"({', '.join(builtin_scenario_names())})")
    if seed is not None:
        scenario = replace(scenario, seed=seed)
    return scenario


def _resolve_profile(spec: str | None) -> ThresholdProfile:
    if spec is None:
        return default_profile()
    return load_profile(Path(spec))


def build_report(trace: Trace) -> dict:
    """Machine-readable run summary; deterministic for a given trace."""
    moistures = [entry["frame"]["soil_moisture"] for entry in trace.entries]
    open_ticks = sum(1 for entry in trace.entries if entry["commands"]["valve_open"])
    counts = {kind.value: 0 for kind in EventKind}
    for event in trace.events:
        counts[event["kind"]] += 1
    return {
        "scenario": trace.scenario_name,
        "seed": trace.seed,
        "tick_s": trace.tick_s,
        "duration_s": trace.duration_s,
        "ticks": len(trace.entries),
        "soil_moisture": {
            "min": min(moistures),
            "max": max(moistures),
            "mean": sum(moistures) / len(moistures),
        },
        "valve_open_seconds": open_ticks * trace.tick_s,
        "event_counts": counts,
        "final_state": trace.final_state,
    }


def _print_summary(report: dict) -> None:
    moisture = report["soil_moisture"]
    print(f"scenario {report['scenario']} (seed {report['seed']}): "
          f"{report['ticks']} ticks of {report['tick_s']:g}s")
    print(f"  soil moisture min/mean/max: {moisture['min']:.1f} / "
          f"{moisture['mean']:.1f} / {moisture['max']:.1f} %")
    print(f"  valve open for {report['valve_open_seconds']:g}s of simulated time")
    fired = {k: v for k, v in report["event_counts"].items() if v}
    print(f"  events: {fired if fired else 'none'}")
    final = report["final_state"]
    if final.get("health"):
        print(f"  final health: {final['health']['score']}% "
              f"({'healthy' if final['health']['healthy'] else 'not healthy'}), "
              f"band {final['moisture_band']}")


def cmd_simulate(args) -> int:
    scenario = _resolve_scenario(args.scenario, args.seed)
    profile = _resolve_profile(args.profile)
    trace = run(scenario, profile)
    report = build_report(trace)
    payload = json.dumps(report, indent=2) + "\n"
    if args.trace:
        trace.write_ndjson(args.trace)
    if args.out:
        Path(args.out).write_text(payload)
        _print_summary(report)
        print(f"report written to {args.out}")
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def cmd_serve(args) -> int:
    scenario = _resolve_scenario(args.scenario, args.seed)
    profile = _resolve_profile(args.profile)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    serve(scenario, profile, port=args.port, speed=args.speed, host=args.host,
          data_dir=args.data_dir, ui_dir=args.ui)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="verdant",
                     description="Smart-garden simulator, controller and telemetry service")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a scenario headless and write a report")
    p_sim.add_argument("--scenario", required=True,
                       help="scenario file or builtin name")
    p_sim.add_argument("--profile", help="threshold profile JSON (default: shipped profile)")
    p_sim.add_argument("--seed", type=int, help="override the scenario seed")
    p_sim.add_argument("--out", help="write the JSON report here (default: stdout)")
    p_sim.add_argument("--trace", help="also write the per-tick NDJSON trace here")
    p_sim.set_defaults(func=cmd_simulate)

    p_srv = sub.add_parser("serve", help="run the telemetry service over a live simulation")
    p_srv.add_argument("--scenario", required=True,
                       help="scenario file or builtin name")
    p_srv.add_argument("--profile", help="threshold profile JSON (default: shipped profile)")
    p_srv.add_argument("--seed", type=int, help="override the scenario seed")
    p_srv.add_argument("--port", type=int, default=8000,
                       help="listen port; 0 picks an ephemeral port (default: 8000)")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--speed", type=float, default=60.0,
                       help="simulated seconds per wall second (default: 60)")
    p_srv.add_argument("--data-dir",
                       help=f"persistence directory (default: $VERDANT_DATA_DIR or ./verdant_data)")
    p_srv.add_argument("--ui", help="serve a built dashboard from this directory")
    p_srv.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, ProfileError, PersistenceError) as exc:
        print(f"verdant: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except KeyboardInterrupt:
        return EXIT_OK
    except ServiceError as exc:
        print(f"verdant: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001 - the fault contract wants a clean exit code
        print(f"verdant: unexpected failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
