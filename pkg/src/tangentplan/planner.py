"""Offline planner: grow one collision-free path by tangent intersection.

The planner keeps a list of determined waypoints (collision-free when
connected in order), a stack of candidate waypoints whose top is the
current destination, and the sequence of obstacles avoided so far. Each
loop iteration either moves the destination onto the determined path or
detours around the first-collided obstacle via one of two tangent
sub-paths, picked by four prioritized rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from . import kernels
from .geometry import (
    DegenerateTangency,
    EllipseObstacle,
    ObstacleField,
    Point,
    PointInsideObstacle,
    Segment,
    SubPathCandidate,
    first_collided,
    sub_paths,
)
from .scenario import InvalidScenario, Scenario


class PlanningFailed(Exception):
    """The planner hit its iteration cap or an unrecoverable geometric state."""


@dataclass(frozen=True)
class PlannerConfig:
    eps: float | None = None
    max_iterations: int | None = None
    tie_break: str = "xy"

    def __post_init__(self):
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.tie_break != "xy":
            raise ValueError(f"unknown tie_break rule {self.tie_break!r}")

    def resolve_eps(self, scenario: Scenario) -> float:
        return self.eps if self.eps is not None else scenario.default_eps()

    def resolve_cap(self, n_obstacles: int, extra: int = 0) -> int:
        if self.max_iterations is not None:
            return self.max_iterations
        return max(200, 50 * n_obstacles) + extra


@dataclass(frozen=True)
class TraceStep:
    """One planner iteration, auditable from the outside."""

    origin: Point
    destination: Point
    collided: int | None = None
    entry_t: float | None = None
    candidates: tuple[SubPathCandidate, SubPathCandidate] | None = None
    rule: int | None = None
    chosen: Point | None = None
    appended_to: str = "determined"
    detour_collided: int | None = None

    def to_dict(self) -> dict:
        return {
            "o": list(self.origin),
            "d": list(self.destination),
            "hit": self.collided,
            "t": self.entry_t,
            "cand": None
            if self.candidates is None
            else [list(c.waypoint) for c in self.candidates],
            "rule": self.rule,
            "chosen": None if self.chosen is None else list(self.chosen),
            "to": self.appended_to,
            "detour_hit": self.detour_collided,
        }


@dataclass
class PathPlan:
    route: list[Point]
    length: float
    trace: list[TraceStep] = dc_field(default_factory=list)
    iterations: int = 0

    def waypoint_count(self) -> int:
        return len(self.route)


def route_length(points) -> float:
    total = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        total += math.hypot(x1 - x0, y1 - y0)
    return total


def _leg_eval(seg: Segment, fld: ObstacleField):
    return kernels.segment_eval(seg.p[0], seg.p[1], seg.q[0], seg.q[1], fld.params)


def _collision_count(seg: Segment, fld: ObstacleField, eps: float) -> int:
    if len(fld) == 0:
        return 0
    mins, _ = _leg_eval(seg, fld)
    return int((mins < -eps).sum())


def _collides_with(seg: Segment, fld: ObstacleField, obstacle_id: int, eps: float) -> bool:
    row = fld.row_of[obstacle_id]
    mins, _ = kernels.segment_eval(
        seg.p[0], seg.p[1], seg.q[0], seg.q[1], fld.params[row : row + 1]
    )
    return bool(mins[0] < -eps)


def select_subpath(
    cand_a: SubPathCandidate,
    cand_b: SubPathCandidate,
    avoided: list[int],
    obstacles,
    eps: float,
) -> tuple[SubPathCandidate, int]:
    """Pick one of two sub-paths by four prioritized rules.

    1. Prefer the candidate whose origin leg does not collide with the most
       recently avoided obstacle (keeps the search from doubling back).
    2. Prefer the origin leg colliding with fewer distinct obstacles.
    3. Prefer the destination leg colliding with fewer distinct obstacles.
    4. Prefer the shorter candidate.
    Rule k applies only when rules 1..k-1 are indifferent; an exact tie
    after rule 4 falls to lexicographic (x, then y) order of the waypoint.
    """
    fld = obstacles if isinstance(obstacles, ObstacleField) else ObstacleField.from_obstacles(obstacles)

    if avoided:
        last = avoided[-1]
        if last in fld.row_of:
            a_hits = _collides_with(cand_a.origin_leg, fld, last, eps)
            b_hits = _collides_with(cand_b.origin_leg, fld, last, eps)
            if a_hits != b_hits:
                return (cand_a, 1) if b_hits else (cand_b, 1)

    a_o = _collision_count(cand_a.origin_leg, fld, eps)
    b_o = _collision_count(cand_b.origin_leg, fld, eps)
    if a_o != b_o:
        return (cand_a, 2) if a_o < b_o else (cand_b, 2)

    a_d = _collision_count(cand_a.destination_leg, fld, eps)
    b_d = _collision_count(cand_b.destination_leg, fld, eps)
    if a_d != b_d:
        return (cand_a, 3) if a_d < b_d else (cand_b, 3)

    if cand_a.length != cand_b.length:
        return (cand_a, 4) if cand_a.length < cand_b.length else (cand_b, 4)
    return (cand_a, 4) if cand_a.waypoint <= cand_b.waypoint else (cand_b, 4)


def _perturbed(O: Point, D: Point, eps: float) -> Point:
    dx = D[0] - O[0]
    dy = D[1] - O[1]
    norm = math.hypot(dx, dy)
    if norm == 0.0:
        return (D[0] + eps * 1e3, D[1])
    delta = eps * 1e3 / norm
    return (D[0] - dy * delta, D[1] + dx * delta)


def _avoidance_step(
    O: Point,
    D: Point,
    obs: EllipseObstacle,
    avoided: list[int],
    count_field: ObstacleField,
    eps: float,
):
    """Build both sub-paths and select one, retrying once with a perturbed
    destination when the tangent construction degenerates."""

    def attempt(dest: Point):
        cands = sub_paths(O, dest, obs)
        chosen, rule = select_subpath(cands[0], cands[1], avoided, count_field, eps)
        t = chosen.waypoint
        if math.hypot(t[0] - O[0], t[1] - O[1]) <= eps or math.hypot(t[0] - dest[0], t[1] - dest[1]) <= eps:
            raise DegenerateTangency("waypoint coincides with origin or destination")
        return cands, chosen, rule

    try:
        return attempt(D)
    except DegenerateTangency:
        return attempt(_perturbed(O, D, eps))


def plan_static(scenario: Scenario, config: PlannerConfig | None = None) -> PathPlan:
    """Full-knowledge planning from start to end over all obstacles."""
    cfg = config or PlannerConfig()
    eps = cfg.resolve_eps(scenario)
    cap = cfg.resolve_cap(len(scenario.obstacles))
    scenario.validate()
    fld = scenario.field()
    return _run_static(scenario.start, scenario.end, fld, eps, cap)


def plan_static_between(
    start: Point, end: Point, fld: ObstacleField, eps: float, cap: int
) -> PathPlan:
    """Static planning between two arbitrary points over a packed field
    (used by pop-up replanning)."""
    margins_s = kernels.point_margins(start[0], start[1], fld.params) if len(fld) else None
    margins_e = kernels.point_margins(end[0], end[1], fld.params) if len(fld) else None
    if margins_s is not None and margins_s.min() <= 0.0:
        raise InvalidScenario(f"start {start} inside an inflated obstacle")
    if margins_e is not None and margins_e.min() <= 0.0:
        raise InvalidScenario(f"end {end} inside an inflated obstacle")
    return _run_static(start, end, fld, eps, cap)


def _run_static(start: Point, end: Point, fld: ObstacleField, eps: float, cap: int) -> PathPlan:
    determined: list[Point] = [start]
    candidates: list[Point] = [end]
    avoided: list[int] = []
    trace: list[TraceStep] = []
    iterations = 0

    while candidates:
        iterations += 1
        if iterations > cap:
            raise PlanningFailed(f"iteration cap {cap} reached after avoiding {len(avoided)} obstacles")
        origin = determined[-1]
        dest = candidates[-1]

        hit = first_collided(Segment(origin, dest), fld, eps)
        if hit is None:
            determined.append(dest)
            candidates.pop()
            trace.append(TraceStep(origin, dest, chosen=dest, appended_to="determined"))
            continue

        hit_id, entry_t = hit
        obs = fld.obstacles[fld.row_of[hit_id]]
        try:
            cands, chosen, rule = _avoidance_step(origin, dest, obs, avoided, fld, eps)
        except PointInsideObstacle as exc:
            raise PlanningFailed(f"waypoint landed inside an overlapping obstacle: {exc}") from exc
        waypoint = chosen.waypoint

        detour_hit = first_collided(Segment(origin, waypoint), fld, eps)
        if detour_hit is None:
            determined.append(waypoint)
            appended = "determined"
        else:
            candidates.append(waypoint)
            appended = "candidates"
        avoided.append(hit_id)
        trace.append(
            TraceStep(
                origin,
                dest,
                collided=hit_id,
                entry_t=entry_t,
                candidates=cands,
                rule=rule,
                chosen=waypoint,
                appended_to=appended,
                detour_collided=None if detour_hit is None else detour_hit[0],
            )
        )

    return PathPlan(determined, route_length(determined), trace, iterations)
