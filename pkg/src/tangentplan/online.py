"""Online planning under limited sensing.

Two modes. `plan_unknown` builds the whole route in an initially unknown
field: obstacles become known when their boundary enters sensor range, and
collision-free legs are truncated to the limited flight distance so the
craft re-perceives frequently. `replan_popup` flies a precomputed route
and splices in local detours when pop-up obstacles appear on it.

Both produce a FlightLog whose flown segments are checkable against the
full ground-truth obstacle set.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field as dc_field

from . import kernels
from .geometry import (
    DegenerateTangency,
    ObstacleField,
    Point,
    PointInsideObstacle,
    Segment,
    first_collided,
    signed_margin,
)
from .planner import (
    PathPlan,
    PlannerConfig,
    PlanningFailed,
    TraceStep,
    _avoidance_step,
    plan_static_between,
    route_length,
)
from .scenario import InvalidScenario, PopupEvent, Scenario


class DeadEnd(Exception):
    """The craft's current position is enclosed by a discovered obstacle."""


@dataclass(frozen=True)
class SensorModel:
    range_km: float

    def __post_init__(self):
        if not self.range_km > 0.0:
            raise ValueError("sensor range must be > 0")


@dataclass
class ReplanEvent:
    position: Point
    conflict: tuple[Point, Point]
    subroute: list[Point]
    latency_s: float


@dataclass
class FlightLog:
    visited: list[Point] = dc_field(default_factory=list)
    perception_events: list[tuple[Point, tuple[int, ...]]] = dc_field(default_factory=list)
    replan_events: list[ReplanEvent] = dc_field(default_factory=list)


def visible_set(position: Point, sensor: SensorModel, obstacles) -> set[int]:
    """Ids of obstacles whose inflated boundary is within sensor range
    (closed: exactly at range counts as visible)."""
    fld = obstacles if isinstance(obstacles, ObstacleField) else ObstacleField.from_obstacles(obstacles)
    if len(fld) == 0:
        return set()
    d = kernels.boundary_distances(position[0], position[1], fld.params)
    return {int(fld.ids[i]) for i in range(len(fld)) if d[i] <= sensor.range_km}


def plan_unknown(
    scenario: Scenario,
    l: float,
    sensor: SensorModel,
    config: PlannerConfig | None = None,
) -> tuple[PathPlan, FlightLog]:
    """Plan and fly in one pass with sensing at every reached waypoint.

    Collision checks use only the obstacles discovered so far; legs along a
    collision-free bearing are capped at l, which keeps every flown leg
    inside the area already sensed (requires sensor range > l).
    """
    if not l > 0.0:
        raise ValueError("limited flight distance l must be > 0")
    if not sensor.range_km > l:
        raise InvalidScenario(
            f"sensor range {sensor.range_km} must exceed the flight step {l}; "
            "the craft would out-fly its perception"
        )
    cfg = config or PlannerConfig()
    eps = cfg.resolve_eps(scenario)
    cap = cfg.resolve_cap(len(scenario.obstacles), extra=int(3.0 * scenario.diagonal / l) + 50)
    scenario.validate()

    full = scenario.field()
    known_ids = {o.id for o, flag in zip(scenario.obstacles, scenario.initially_known) if flag}
    known = full.subset(known_ids)

    determined: list[Point] = [scenario.start]
    candidates: list[Point] = [scenario.end]
    avoided: list[int] = []
    trace: list[TraceStep] = []
    log = FlightLog(visited=[scenario.start])
    perceived_at = -1
    iterations = 0

    while candidates:
        iterations += 1
        if iterations > cap:
            exc = PlanningFailed(f"iteration cap {cap} reached in unknown-environment flight")
            exc.flight_log = log
            raise exc
        origin = determined[-1]
        dest = candidates[-1]

        if perceived_at < len(determined) - 1:
            perceived_at = len(determined) - 1
            newly = visible_set(origin, sensor, full) - known_ids
            if newly:
                known_ids |= newly
                known = full.subset(known_ids)
            log.perception_events.append((origin, tuple(sorted(newly))))

        hit = first_collided(Segment(origin, dest), known, eps)
        if hit is None:
            dx = dest[0] - origin[0]
            dy = dest[1] - origin[1]
            span = math.hypot(dx, dy)
            if span > l:
                f = l / span
                step = (origin[0] + dx * f, origin[1] + dy * f)
                determined.append(step)
                log.visited.append(step)
                trace.append(TraceStep(origin, dest, chosen=step, appended_to="determined"))
            else:
                determined.append(dest)
                candidates.pop()
                log.visited.append(dest)
                trace.append(TraceStep(origin, dest, chosen=dest, appended_to="determined"))
            continue

        hit_id, entry_t = hit
        obs = known.obstacles[known.row_of[hit_id]]
        try:
            cands, chosen, rule = _avoidance_step(origin, dest, obs, avoided, known, eps)
        except PointInsideObstacle as exc:
            if signed_margin(obs, origin) <= 0.0:
                err = DeadEnd(f"craft position {origin} enclosed by discovered obstacle {hit_id}")
            else:
                err = PlanningFailed(f"candidate destination inside an obstacle: {exc}")
            err.flight_log = log
            raise err from exc
        candidates.append(chosen.waypoint)
        avoided.append(hit_id)
        trace.append(
            TraceStep(
                origin,
                dest,
                collided=hit_id,
                entry_t=entry_t,
                candidates=cands,
                rule=rule,
                chosen=chosen.waypoint,
                appended_to="candidates",
            )
        )

    plan = PathPlan(determined, route_length(determined), trace, iterations)
    return plan, log


def replan_popup(
    scenario: Scenario,
    offline: PathPlan,
    events: list[PopupEvent],
    sensor: SensorModel,
    config: PlannerConfig | None = None,
) -> tuple[PathPlan, FlightLog]:
    """Fly an offline route, splicing in detours around pop-up obstacles.

    The base obstacle set is taken as fully known (the offline plan was
    computed against it). Pop-ups activate either on first visibility from
    a reached waypoint or when the flown distance passes their trigger;
    once a perceived pop-up collides with a remaining segment, that segment
    alone is re-planned and the splice re-checked, falling back to a
    re-plan straight to the end-point if the local splice fails.
    """
    cfg = config or PlannerConfig()
    eps = cfg.resolve_eps(scenario)
    route: list[Point] = list(offline.route)
    if len(route) < 2:
        raise ValueError("offline plan must contain at least start and end")

    base = list(scenario.obstacles)
    known_obstacles = list(base)
    known = ObstacleField.from_obstacles(known_obstacles)
    pending = list(events)
    active: list[PopupEvent] = []

    log = FlightLog(visited=[route[0]])
    trace: list[TraceStep] = []
    iterations = 0
    flown = 0.0
    i = 0

    def perceive(position: Point) -> bool:
        nonlocal pending, active, known, known_obstacles
        changed = False
        newly: list[int] = []
        still_pending = []
        for ev in pending:
            if ev.trigger is not None and ev.trigger <= flown:
                active.append(ev)
            else:
                still_pending.append(ev)
        pending = still_pending

        still_pending = []
        for ev in pending:
            if ev.trigger is None and _boundary_distance(position, ev.obstacle) <= sensor.range_km:
                known_obstacles.append(ev.obstacle)
                newly.append(ev.obstacle.id)
                changed = True
            else:
                still_pending.append(ev)
        pending = still_pending

        still_active = []
        for ev in active:
            if _boundary_distance(position, ev.obstacle) <= sensor.range_km:
                known_obstacles.append(ev.obstacle)
                newly.append(ev.obstacle.id)
                changed = True
            else:
                still_active.append(ev)
        active = still_active

        if changed:
            known = ObstacleField.from_obstacles(known_obstacles)
        log.perception_events.append((position, tuple(sorted(newly))))
        return changed

    while i < len(route) - 1:
        position = route[i]
        perceive(position)

        while True:
            conflict_j = None
            for j in range(i, len(route) - 1):
                if first_collided(Segment(route[j], route[j + 1]), known, eps) is not None:
                    conflict_j = j
                    break
            if conflict_j is None:
                break
            j = conflict_j
            seg_from, seg_to = route[j], route[j + 1]
            cap = cfg.resolve_cap(len(known))
            t0 = time.perf_counter()
            try:
                sub = plan_static_between(seg_from, seg_to, known, eps, cap)
                new_route = route[:j] + sub.route + route[j + 2 :]
            except (PlanningFailed, DegenerateTangency, InvalidScenario) as exc:
                if signed_margin_min(seg_from, known) <= 0.0:
                    err = DeadEnd(f"craft position {seg_from} enclosed by a pop-up obstacle")
                    err.flight_log = log
                    raise err from exc
                try:
                    sub = plan_static_between(seg_from, scenario.end, known, eps, cap)
                    new_route = route[:j] + sub.route
                except (PlanningFailed, DegenerateTangency, InvalidScenario) as exc2:
                    err = PlanningFailed(f"replanning failed between {seg_from} and the end-point: {exc2}")
                    err.flight_log = log
                    raise err from exc2
            latency = time.perf_counter() - t0
            route = new_route
            iterations += sub.iterations
            trace.extend(sub.trace)
            log.replan_events.append(ReplanEvent(position, (seg_from, seg_to), list(sub.route), latency))

        nxt = route[i + 1]
        flown += math.hypot(nxt[0] - route[i][0], nxt[1] - route[i][1])
        i += 1
        log.visited.append(nxt)

    plan = PathPlan(route, route_length(route), trace, iterations)
    return plan, log


def _boundary_distance(p: Point, obstacle) -> float:
    import numpy as np

    params = np.array([obstacle.params_row()], dtype=np.float64)
    return float(kernels.boundary_distances(p[0], p[1], params)[0])


def signed_margin_min(p: Point, fld: ObstacleField) -> float:
    if len(fld) == 0:
        return math.inf
    return float(kernels.point_margins(p[0], p[1], fld.params).min())
