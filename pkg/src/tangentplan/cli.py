"""Command-line interface.

Verbs: gen (scenario generation), plan (static or unknown-environment),
simulate (pop-up replanning over an offline plan), bench (suite -> CSV),
render (scenario/plan -> SVG). Outputs are byte-deterministic for
identical inputs and seeds; timing fields stay null unless --timing is
given, since wall-clock values would break that.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time

from .bench import run_suite
from .constraints import ConstraintLimits, check
from .generators import ENV_KINDS, MAZE_SPECS, generate_environment, generate_maze
from .online import SensorModel, plan_unknown, replan_popup
from .planner import PathPlan, PlannerConfig, plan_static
from .render import render_svg
from .scenario import Scenario, dumps_stable, load_scenario, save_scenario
from .smoothing import clearance_margin, smooth


def _plan_payload(
    sc: Scenario,
    plan: PathPlan,
    samples_per_segment: int,
    time_s: float | None,
    log=None,
    timing: bool = False,
) -> dict:
    curve = smooth(plan.route, samples_per_segment)
    limits = ConstraintLimits()
    report = check(plan, curve, limits)
    eps = sc.default_eps()
    clearance_ok = clearance_margin(curve, sc.field()) >= -eps
    constraints = report.to_dict()
    constraints["smoothing_clearance_ok"] = clearance_ok
    payload = {
        "route": [[x, y] for x, y in plan.route],
        "length_km": plan.length,
        "time_s": time_s,
        "iterations": plan.iterations,
        "status": "ok" if clearance_ok else "smoothing-clearance-violated",
        "trace": [step.to_dict() for step in plan.trace],
        "constraints": constraints,
    }
    if log is not None:
        payload["flight"] = {
            "visited": [[x, y] for x, y in log.visited],
            "perception": [
                {"at": [x, y], "newly_visible": list(ids)} for (x, y), ids in log.perception_events
            ],
            "replans": [
                {
                    "at": [ev.position[0], ev.position[1]],
                    "conflict": [list(ev.conflict[0]), list(ev.conflict[1])],
                    "subroute": [[x, y] for x, y in ev.subroute],
                    "latency_s": ev.latency_s if timing else None,
                }
                for ev in log.replan_events
            ],
        }
    return payload


def _write_outputs(args, sc: Scenario, plan: PathPlan, payload: dict) -> None:
    text = dumps_stable(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if getattr(args, "svg", None):
        curve = smooth(plan.route, args.smooth)
        render_svg(sc, plan, curve, out=args.svg)


def cmd_plan(args) -> int:
    sc = load_scenario(args.scenario)
    cfg = PlannerConfig()
    log = None
    if args.mode == "static":
        if args.timing:
            times = []
            for _ in range(5):
                t0 = time.perf_counter()
                plan = plan_static(sc, cfg)
                times.append(time.perf_counter() - t0)
            time_s = statistics.median(times)
        else:
            plan = plan_static(sc, cfg)
            time_s = None
    else:
        sensor = SensorModel(args.range)
        if args.timing:
            t0 = time.perf_counter()
            plan, log = plan_unknown(sc, args.l, sensor, cfg)
            time_s = time.perf_counter() - t0
        else:
            plan, log = plan_unknown(sc, args.l, sensor, cfg)
            time_s = None
    payload = _plan_payload(sc, plan, args.smooth, time_s, log, args.timing)
    _write_outputs(args, sc, plan, payload)
    return 0


def cmd_simulate(args) -> int:
    sc = load_scenario(args.scenario)
    cfg = PlannerConfig()
    sensor = SensorModel(args.range)
    offline = plan_static(sc, cfg)
    t0 = time.perf_counter()
    plan, log = replan_popup(sc, offline, sc.popups, sensor, cfg)
    time_s = time.perf_counter() - t0 if args.timing else None
    payload = _plan_payload(sc, plan, args.smooth, time_s, log, args.timing)
    payload["offline_route"] = [[x, y] for x, y in offline.route]
    _write_outputs(args, sc, plan, payload)
    return 0


def cmd_gen(args) -> int:
    if args.env == "maze":
        sc = generate_maze(args.maze, seed=args.seed)
    else:
        sc = generate_environment(args.env, args.field, args.n, args.seed)
    save_scenario(sc, args.out)
    return 0


def cmd_bench(args) -> int:
    rows = run_suite(args.suite, args.oracle_cell, args.out, repeats=args.repeats)
    ok = sum(1 for r in rows if r.status.startswith("ok"))
    sys.stdout.write(f"{len(rows)} instances, {ok} planned, csv -> {args.out}\n")
    return 0


def cmd_render(args) -> int:
    sc = load_scenario(args.scenario)
    plan = None
    curve = None
    if args.plan:
        import json

        with open(args.plan, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        route = [(float(x), float(y)) for x, y in payload["route"]]
        plan = PathPlan(route=route, length=0.0)
        if len(route) >= 2:
            curve = smooth(route, args.smooth)
    render_svg(sc, plan, curve, out=args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tangentplan", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="plan a route for a scenario file")
    p.add_argument("--scenario", required=True)
    p.add_argument("--mode", choices=("static", "unknown"), default="static")
    p.add_argument("--l", type=float, default=3.0, help="limited flight distance, km (unknown mode)")
    p.add_argument("--range", type=float, default=10.0, help="sensor range, km (unknown mode)")
    p.add_argument("--smooth", type=int, default=20, help="curve samples per spline segment")
    p.add_argument("--out", help="plan JSON destination (default stdout)")
    p.add_argument("--svg", help="also render an SVG here")
    p.add_argument("--timing", action="store_true", help="fill time_s (breaks byte determinism)")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("simulate", help="fly an offline plan against the scenario's pop-ups")
    p.add_argument("--scenario", required=True)
    p.add_argument("--range", type=float, default=10.0)
    p.add_argument("--smooth", type=int, default=20)
    p.add_argument("--out", help="plan JSON destination (default stdout)")
    p.add_argument("--svg")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("gen", help="generate a scenario file")
    p.add_argument("--env", required=True, choices=ENV_KINDS + ("maze",))
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--field", type=float, default=100.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--maze", default="M1", choices=sorted(MAZE_SPECS))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run the benchmark over a directory of scenarios")
    p.add_argument("--suite", required=True)
    p.add_argument("--oracle-cell", type=float, default=1.0)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("render", help="render a scenario (and optional plan) to SVG")
    p.add_argument("--scenario", required=True)
    p.add_argument("--plan")
    p.add_argument("--smooth", type=int, default=20)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
