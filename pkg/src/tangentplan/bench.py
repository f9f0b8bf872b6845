"""Benchmark runner: plan every scenario in a suite directory, time the
planner (median of repeated runs, planner call only), run the grid
reference, and write one CSV row per instance.
"""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass
from pathlib import Path

from .geometry import DegenerateTangency
from .oracle import grid_astar_oracle
from .planner import PlanningFailed, plan_static
from .scenario import InvalidScenario, Scenario, load_scenario


@dataclass
class BenchmarkRow:
    instance: str
    env: str
    num_obstacles: int
    length_km: float | None
    cpu_s: float | None
    iterations: int | None
    astar_km: float | None
    astar_cpu_s: float | None
    seed: str
    status: str

    def to_csv_row(self) -> list[str]:
        def fmt(v, spec):
            return "" if v is None else format(v, spec)

        return [
            self.instance,
            self.env,
            str(self.num_obstacles),
            fmt(self.length_km, ".3f"),
            fmt(self.cpu_s, ".6f"),
            "" if self.iterations is None else str(self.iterations),
            fmt(self.astar_km, ".3f"),
            fmt(self.astar_cpu_s, ".6f"),
            self.seed,
            self.status,
        ]


CSV_HEADER = [
    "instance",
    "env",
    "num_b",
    "length_km",
    "cpu_s",
    "iterations",
    "astar_km",
    "astar_cpu_s",
    "seed",
    "status",
]


def _env_of(name: str) -> str:
    head = name.split("-", 1)[0]
    return head if head else "?"


def _seed_of(name: str) -> str:
    for part in name.split("-"):
        if part.startswith("s") and part[1:].isdigit():
            return part[1:]
    return ""


def bench_scenario(sc: Scenario, oracle_cell: float | None, repeats: int = 5) -> BenchmarkRow:
    plan = None
    status = "ok"
    times = []
    try:
        for _ in range(max(1, repeats)):
            t0 = time.perf_counter()
            plan = plan_static(sc)
            times.append(time.perf_counter() - t0)
    except (PlanningFailed, DegenerateTangency, InvalidScenario) as exc:
        status = type(exc).__name__
    cpu = statistics.median(times) if times else None

    astar = astar_cpu = None
    if oracle_cell is not None:
        t0 = time.perf_counter()
        astar = grid_astar_oracle(sc, oracle_cell)
        astar_cpu = time.perf_counter() - t0
        if astar is None and status == "ok":
            status = "ok-oracle-unreachable"

    return BenchmarkRow(
        instance=sc.name,
        env=_env_of(sc.name),
        num_obstacles=len(sc.obstacles),
        length_km=None if plan is None else plan.length,
        cpu_s=cpu,
        iterations=None if plan is None else plan.iterations,
        astar_km=astar,
        astar_cpu_s=astar_cpu,
        seed=_seed_of(sc.name),
        status=status,
    )


def run_suite(
    suite_dir, oracle_cell: float | None, out_csv, repeats: int = 5
) -> list[BenchmarkRow]:
    paths = sorted(Path(suite_dir).glob("*.json"))
    if not paths:
        raise FileNotFoundError(f"no scenario files in {suite_dir}")
    rows = [bench_scenario(load_scenario(p), oracle_cell, repeats) for p in paths]
    if out_csv is not None:
        with open(out_csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for row in rows:
                writer.writerow(row.to_csv_row())
    return rows
