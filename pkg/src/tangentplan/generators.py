"""Seeded scenario generators: five obstacle-environment classes, canned
maze layouts built from elongated-ellipse walls, and pop-up injection.

Every generator is a pure function of its parameters and seed.
"""

from __future__ import annotations

import math

import numpy as np

from .geometry import EllipseObstacle, ObstacleField, Point, Segment, first_collided
from .scenario import PopupEvent, Scenario

ENV_KINDS = ("E1", "E2", "E3", "E4", "E5")


class GenerationFailed(Exception):
    pass


def _margins(p: Point, obstacles) -> float:
    if not obstacles:
        return math.inf
    from . import kernels

    fld = ObstacleField.from_obstacles(obstacles)
    return float(kernels.point_margins(p[0], p[1], fld.params).min())


def _sample_endpoints(rng, field: float, obstacles, tries: int = 600) -> tuple[Point, Point]:
    for _ in range(tries):
        sx = rng.uniform(0.03 * field, 0.10 * field)
        sy = rng.uniform(0.12 * field, 0.88 * field)
        ex = rng.uniform(0.90 * field, 0.97 * field)
        ey = rng.uniform(0.12 * field, 0.88 * field)
        s = (float(sx), float(sy))
        e = (float(ex), float(ey))
        if _margins(s, obstacles) > 0.05 and _margins(e, obstacles) > 0.05:
            return s, e
    raise GenerationFailed("could not place start/end outside the obstacles")


def _wall_ellipse(idx: int, p0, p1, thickness: float, r_safe: float) -> EllipseObstacle:
    cx = 0.5 * (p0[0] + p1[0])
    cy = 0.5 * (p0[1] + p1[1])
    length = math.hypot(p1[0] - p0[0], p1[1] - p0[1])
    theta = math.atan2(p1[1] - p0[1], p1[0] - p0[0])
    return EllipseObstacle(idx, cx, cy, max(length / 2.0, thickness), thickness / 2.0, theta, r_safe)


def _corridor_walls(rng, field: float, r_safe: float, start_id: int, max_walls: int):
    """Vertical wall lines with random gaps; each contiguous piece is one
    elongated ellipse."""
    obstacles = []
    idx = start_id
    xs = [field * f + rng.uniform(-0.04, 0.04) * field for f in (0.36, 0.64)]
    for wx in xs:
        if idx - start_id >= max_walls:
            break
        n_gaps = int(rng.integers(1, 3))
        gap_w = rng.uniform(0.09, 0.15, size=n_gaps) * field
        gap_c = np.sort(rng.uniform(0.18, 0.82, size=n_gaps)) * field
        cuts = [0.02 * field]
        for c, w in zip(gap_c, gap_w):
            cuts.append(max(c - w / 2.0, cuts[-1]))
            cuts.append(min(c + w / 2.0, 0.98 * field))
        cuts.append(0.98 * field)
        thickness = rng.uniform(field / 90.0, field / 60.0)
        for y0, y1 in zip(cuts[0::2], cuts[1::2]):
            if y1 - y0 < 2.0 * thickness:
                continue
            if idx - start_id >= max_walls:
                break
            obstacles.append(_wall_ellipse(idx, (wx, y0), (wx, y1), thickness, r_safe))
            idx += 1
    return obstacles


def _place_circles(
    rng,
    field: float,
    count: int,
    r_lo: float,
    r_hi: float,
    r_safe: float,
    start_id: int,
    walls,
    circle_gap: float | None,
):
    """Random circles; circle_gap None allows mutual overlap, otherwise it
    enforces center separation > sum of inflated radii + circle_gap.
    Circles always stay clear of corridor walls so wall gaps stay open."""
    from . import kernels

    wall_field = ObstacleField.from_obstacles(walls) if walls else None
    circles: list[EllipseObstacle] = []
    idx = start_id
    budget = 400 * count + 400
    while len(circles) < count:
        if budget <= 0:
            raise GenerationFailed(f"could not place {count} circles in a {field} km field")
        budget -= 1
        r = float(rng.uniform(r_lo, r_hi))
        cx = float(rng.uniform(r + 1.0, field - r - 1.0))
        cy = float(rng.uniform(r + 1.0, field - r - 1.0))
        if wall_field is not None and len(wall_field):
            d = kernels.boundary_distances(cx, cy, wall_field.params)
            if d.min() <= r + r_safe + 1.0:
                continue
        if circle_gap is not None:
            ok = True
            for o in circles:
                if math.hypot(cx - o.cx, cy - o.cy) <= (r + r_safe) + (o.a + o.r_safe) + circle_gap:
                    ok = False
                    break
            if not ok:
                continue
        circles.append(EllipseObstacle(idx, cx, cy, r, r, 0.0, r_safe))
        idx += 1
    return circles


def generate_environment(
    kind: str,
    field: float,
    n: int,
    seed: int,
    r_safe: float = 0.5,
    name: str | None = None,
) -> Scenario:
    """One scenario of the requested environment class.

    E1 sparse obstacles with corridor walls, E2 sparse circles, E3 dense
    non-overlapping circles, E4 dense overlapping circles, E5 dense
    overlapping circles with corridor walls.
    """
    if kind not in ENV_KINDS:
        raise ValueError(f"kind must be one of {ENV_KINDS}, got {kind!r}")
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    walls: list[EllipseObstacle] = []
    if kind in ("E1", "E5") and n >= 4:
        walls = _corridor_walls(rng, field, r_safe, 0, max_walls=min(6, n - 2))
    rest = n - len(walls)

    if kind in ("E1", "E2"):
        circles = _place_circles(
            rng, field, rest, field / 50, field / 25, r_safe, len(walls), walls, field / 20
        )
    elif kind == "E3":
        circles = _place_circles(
            rng, field, rest, field / 70, field / 40, r_safe, len(walls), walls, 0.25
        )
    else:  # E4, E5
        circles = _place_circles(
            rng, field, rest, field / 75, field / 48, r_safe, len(walls), walls, None
        )
    obstacles = walls + circles

    start, end = _sample_endpoints(rng, field, obstacles)
    return Scenario(
        name=name or f"{kind}-n{n}-f{int(field)}-s{seed}",
        width=field,
        height=field,
        start=start,
        end=end,
        obstacles=obstacles,
        r_safe=r_safe,
    )


# --- mazes -----------------------------------------------------------------

# Each spec: field size, start, end and straight walls (from, to, thickness).
# The canned layouts cover pocket traps, escape traps, S-corridors and
# nested rings; all six are solvable by the static planner.
#
# Junction rule: where two walls meet, one wall runs through (protruding
# past the joint) and the other butts into its side, ending just past the
# through wall's centerline. That seals the inflated shapes without taper
# pinholes and keeps the through wall's tips, where detour waypoints land,
# clear of the partner wall.
MAZE_SPECS: dict[str, dict] = {
    # pocket trap between start and end, mouth facing the start
    "M1": {
        "field": 100.0,
        "start": [12.0, 50.0],
        "end": [88.0, 50.0],
        "walls": [
            {"from": [55.0, 25.0], "to": [55.0, 75.0], "thickness": 3.0},
            {"from": [30.0, 30.0], "to": [54.5, 30.0], "thickness": 3.0},
            {"from": [30.0, 70.0], "to": [54.5, 70.0], "thickness": 3.0},
        ],
    },
    # start enclosed on three sides, mouth facing away from the end
    "M2": {
        "field": 100.0,
        "start": [50.0, 40.0],
        "end": [50.0, 88.0],
        "walls": [
            {"from": [30.0, 60.0], "to": [70.0, 60.0], "thickness": 3.0},
            {"from": [35.0, 22.0], "to": [35.0, 59.5], "thickness": 3.0},
            {"from": [65.0, 22.0], "to": [65.0, 59.5], "thickness": 3.0},
        ],
    },
    # interleaved horizontal walls forcing an S-shaped route
    "M3": {
        "field": 100.0,
        "start": [50.0, 12.0],
        "end": [50.0, 88.0],
        "walls": [
            {"from": [4.0, 40.0], "to": [62.0, 40.0], "thickness": 3.0},
            {"from": [38.0, 65.0], "to": [96.0, 65.0], "thickness": 3.0},
        ],
    },
    # end pocketed by a C-ring opening away from the start
    "M4": {
        "field": 100.0,
        "start": [14.0, 50.0],
        "end": [60.0, 50.0],
        "walls": [
            {"from": [45.0, 30.0], "to": [45.0, 70.0], "thickness": 3.0},
            {"from": [45.5, 65.0], "to": [75.0, 65.0], "thickness": 3.0},
            {"from": [45.5, 35.0], "to": [75.0, 35.0], "thickness": 3.0},
        ],
    },
    # two offset baffle walls with opposite gaps
    "M5": {
        "field": 100.0,
        "start": [12.0, 50.0],
        "end": [88.0, 50.0],
        "walls": [
            {"from": [40.0, 14.0], "to": [40.0, 74.0], "thickness": 3.0},
            {"from": [60.0, 26.0], "to": [60.0, 86.0], "thickness": 3.0},
        ],
    },
    # nested C-rings with opposite openings around the end
    "M6": {
        "field": 100.0,
        "start": [10.0, 50.0],
        "end": [62.0, 50.0],
        "walls": [
            {"from": [52.0, 36.0], "to": [52.0, 64.0], "thickness": 3.0},
            {"from": [52.5, 60.0], "to": [72.0, 60.0], "thickness": 3.0},
            {"from": [52.5, 40.0], "to": [72.0, 40.0], "thickness": 3.0},
            {"from": [82.0, 24.0], "to": [82.0, 76.0], "thickness": 3.0},
            {"from": [40.0, 72.0], "to": [81.5, 72.0], "thickness": 3.0},
            {"from": [40.0, 28.0], "to": [81.5, 28.0], "thickness": 3.0},
        ],
    },
}


def generate_maze(spec, seed: int = 0, r_safe: float = 0.5) -> Scenario:
    """Scenario from a wall spec (a dict or the name of a canned layout).

    The canned layouts are fully deterministic; the seed only matters for
    specs that request jittered walls ("jitter" key, km amplitude).
    """
    if isinstance(spec, str):
        name = spec
        if spec not in MAZE_SPECS:
            raise ValueError(f"unknown maze {spec!r}; have {sorted(MAZE_SPECS)}")
        spec = MAZE_SPECS[spec]
    else:
        name = spec.get("name", "maze")
    rng = np.random.default_rng(seed)
    jitter = float(spec.get("jitter", 0.0))
    obstacles = []
    for i, w in enumerate(spec["walls"]):
        p0 = [float(w["from"][0]), float(w["from"][1])]
        p1 = [float(w["to"][0]), float(w["to"][1])]
        if jitter > 0.0:
            p0 = [p0[0] + rng.uniform(-jitter, jitter), p0[1] + rng.uniform(-jitter, jitter)]
            p1 = [p1[0] + rng.uniform(-jitter, jitter), p1[1] + rng.uniform(-jitter, jitter)]
        obstacles.append(_wall_ellipse(i, p0, p1, float(w["thickness"]), r_safe))

    field = float(spec["field"])
    start = (float(spec["start"][0]), float(spec["start"][1]))
    end = (float(spec["end"][0]), float(spec["end"][1]))
    if _margins(start, obstacles) <= 0.0 or _margins(end, obstacles) <= 0.0:
        raise GenerationFailed("maze start or end lies inside a wall")
    return Scenario(
        name=name,
        width=field,
        height=field,
        start=start,
        end=end,
        obstacles=obstacles,
        r_safe=r_safe,
    )


def inject_popups(
    scenario: Scenario,
    route,
    seed: int,
    count: int = 1,
    radius: tuple[float, float] = (1.5, 3.0),
    trigger: float | None = None,
    sensor_range: float = 10.0,
) -> Scenario:
    """Copy of a scenario with pop-up circles planted on the given route.

    Each pop-up sits on a route segment a little past its start waypoint,
    close enough that it enters sensor range no later than the craft's
    arrival there; the conflict is therefore always perceived before the
    segment is flown.
    """
    rng = np.random.default_rng(seed)
    ahead_lo, ahead_hi = 0.45 * sensor_range, 0.62 * sensor_range
    segs = [(i, Segment(p, q)) for i, (p, q) in enumerate(zip(route, route[1:]))]
    segs = [s for s in segs if s[1].length > ahead_hi + radius[1] + 1.0]
    if not segs:
        raise GenerationFailed("route has no segment long enough to plant a pop-up on")
    next_id = max(scenario.all_ids(), default=-1) + 1
    popups = list(scenario.popups)
    for k in range(count):
        for _ in range(200):
            i, seg = segs[int(rng.integers(len(segs)))]
            ahead = float(rng.uniform(ahead_lo, ahead_hi))
            f = ahead / seg.length
            mx = seg.p[0] + f * (seg.q[0] - seg.p[0])
            my = seg.p[1] + f * (seg.q[1] - seg.p[1])
            r = float(rng.uniform(*radius))
            if ahead - r - scenario.r_safe < 0.5:
                continue
            ob = EllipseObstacle(next_id + k, mx, my, r, r, 0.0, scenario.r_safe)
            if _margins(scenario.start, [ob]) <= 0.1 or _margins(scenario.end, [ob]) <= 0.1:
                continue
            if first_collided(seg, [ob], 1e-9) is None:
                continue
            popups.append(PopupEvent(ob, trigger))
            break
        else:
            raise GenerationFailed("could not place a conflicting pop-up")
    return Scenario(
        name=scenario.name + f"-popup{count}",
        width=scenario.width,
        height=scenario.height,
        start=scenario.start,
        end=scenario.end,
        obstacles=list(scenario.obstacles),
        initially_known=list(scenario.initially_known),
        popups=popups,
        r_safe=scenario.r_safe,
    )
