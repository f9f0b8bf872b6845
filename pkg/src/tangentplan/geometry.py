"""Exact 2D primitives for elliptical obstacles.

Every query is performed in a normalized frame: translate the obstacle to
the origin, rotate its axes onto x/y, and scale the inflated semi-axes to
the unit circle. Membership, segment collision and tangent construction
all reduce to unit-circle cases there, and the batch kernels in
`kernels.py` run the identical arithmetic over packed obstacle arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels

Point = tuple[float, float]


class PointInsideObstacle(Exception):
    """Tangents were requested from a point on or inside an inflated obstacle."""


class DegenerateTangency(Exception):
    """A paired origin/destination tangent has no finite intersection."""


@dataclass(frozen=True)
class EllipseObstacle:
    """Elliptical obstacle inflated by a safety margin.

    All feasibility checks run against the inflated ellipse with semi-axes
    (a + r_safe, b + r_safe). theta is the inclination of the semi-major
    axis, normalized into [0, pi).
    """

    id: int
    cx: float
    cy: float
    a: float
    b: float
    theta: float = 0.0
    r_safe: float = 0.0

    def __post_init__(self):
        for v in (self.cx, self.cy, self.a, self.b, self.theta, self.r_safe):
            if not math.isfinite(v):
                raise ValueError("obstacle parameters must be finite")
        if not self.a >= self.b > 0.0:
            raise ValueError(f"require a >= b > 0, got a={self.a}, b={self.b}")
        if self.r_safe < 0.0:
            raise ValueError("safety margin must be >= 0")
        object.__setattr__(self, "theta", self.theta % math.pi)

    @property
    def ea(self) -> float:
        return self.a + self.r_safe

    @property
    def eb(self) -> float:
        return self.b + self.r_safe

    def params_row(self) -> tuple[float, ...]:
        ct = math.cos(self.theta)
        st = math.sin(self.theta)
        return (self.cx, self.cy, ct, st, 1.0 / self.ea, 1.0 / self.eb, self.ea, self.eb)


@dataclass(frozen=True)
class Segment:
    p: Point
    q: Point

    @property
    def length(self) -> float:
        return math.hypot(self.q[0] - self.p[0], self.q[1] - self.p[1])


@dataclass(frozen=True)
class SubPathCandidate:
    """One of the two detours around an obstacle: O -> F -> D.

    F is the intersection of an origin tangent with the destination tangent
    on the same side of the obstacle.
    """

    waypoint: Point
    origin_leg: Segment
    destination_leg: Segment
    length: float


@dataclass(frozen=True)
class ObstacleField:
    """Obstacles packed for the batch kernels, sorted by id."""

    obstacles: tuple[EllipseObstacle, ...]
    params: np.ndarray
    ids: np.ndarray
    row_of: dict = field(repr=False, default_factory=dict)

    @classmethod
    def from_obstacles(cls, obstacles) -> "ObstacleField":
        obs = tuple(sorted(obstacles, key=lambda o: o.id))
        if obs:
            params = np.array([o.params_row() for o in obs], dtype=np.float64)
        else:
            params = np.empty((0, 8), dtype=np.float64)
        ids = np.array([o.id for o in obs], dtype=np.int64)
        return cls(obs, params, ids, {o.id: i for i, o in enumerate(obs)})

    def __len__(self) -> int:
        return len(self.obstacles)

    def subset(self, keep_ids) -> "ObstacleField":
        keep = set(keep_ids)
        return ObstacleField.from_obstacles([o for o in self.obstacles if o.id in keep])


def _single_field(obs: EllipseObstacle) -> np.ndarray:
    return np.array([obs.params_row()], dtype=np.float64)


def signed_margin(obs: EllipseObstacle, p: Point) -> float:
    """Inflated-ellipse quadratic form minus one: >= 0 feasible, < 0 penetrating."""
    return float(kernels.point_margins(p[0], p[1], _single_field(obs))[0])


def segment_eval_single(obs: EllipseObstacle, s: Segment) -> tuple[float, float]:
    """(minimum margin along s, boundary entry parameter or inf) for one obstacle."""
    mins, entries = kernels.segment_eval(s.p[0], s.p[1], s.q[0], s.q[1], _single_field(obs))
    return float(mins[0]), float(entries[0])


def segment_collides(obs: EllipseObstacle, s: Segment, eps: float) -> float | None:
    """Entry parameter where s penetrates deeper than eps, or None.

    Tangential contact (margin within eps of zero) is not a collision:
    planned edges are tangents by construction and the safety clearance
    lives in r_safe.
    """
    if eps <= 0.0:
        raise ValueError("eps must be > 0")
    min_margin, entry = segment_eval_single(obs, s)
    if min_margin < -eps:
        return entry
    return None


def first_collided(s: Segment, obstacles, eps: float) -> tuple[int, float] | None:
    """The colliding obstacle whose penetration starts closest to s.p.

    Ties on the entry parameter go to the lower obstacle id. Accepts a
    sequence of obstacles or a pre-packed ObstacleField.
    """
    fld = obstacles if isinstance(obstacles, ObstacleField) else ObstacleField.from_obstacles(obstacles)
    if len(fld) == 0:
        return None
    mins, entries = kernels.segment_eval(s.p[0], s.p[1], s.q[0], s.q[1], fld.params)
    hit = mins < -eps
    if not hit.any():
        return None
    ts = np.where(hit, entries, np.inf)
    row = int(np.argmin(ts))
    return int(fld.ids[row]), float(ts[row])


def _to_unit(obs: EllipseObstacle, p: Point) -> tuple[float, float]:
    ct = math.cos(obs.theta)
    st = math.sin(obs.theta)
    dx = p[0] - obs.cx
    dy = p[1] - obs.cy
    return (dx * ct + dy * st) / obs.ea, (dy * ct - dx * st) / obs.eb


def _from_unit(obs: EllipseObstacle, w: tuple[float, float]) -> Point:
    ct = math.cos(obs.theta)
    st = math.sin(obs.theta)
    ux = w[0] * obs.ea
    uy = w[1] * obs.eb
    return (obs.cx + ux * ct - uy * st, obs.cy + ux * st + uy * ct)


def tangent_points(obs: EllipseObstacle, p: Point) -> tuple[Point, Point]:
    """Both points where tangent lines from p touch the inflated ellipse.

    Raises PointInsideObstacle unless p is strictly outside.
    """
    if signed_margin(obs, p) <= 0.0:
        raise PointInsideObstacle(f"point {p} is not strictly outside obstacle {obs.id}")
    wx, wy = _to_unit(obs, p)
    d2 = wx * wx + wy * wy
    k = math.sqrt(d2 - 1.0) / d2
    t1 = (wx / d2 - k * wy, wy / d2 + k * wx)
    t2 = (wx / d2 + k * wy, wy / d2 - k * wx)
    return _from_unit(obs, t1), _from_unit(obs, t2)


def _cross(ox: float, oy: float, ax: float, ay: float, bx: float, by: float) -> float:
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def _line_intersection(p1: Point, d1: tuple[float, float], p2: Point, d2: tuple[float, float]) -> Point:
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    scale = math.hypot(*d1) * math.hypot(*d2)
    if abs(denom) <= 1e-14 * scale:
        raise DegenerateTangency("paired tangent lines are parallel")
    t = ((p2[0] - p1[0]) * d2[1] - (p2[1] - p1[1]) * d2[0]) / denom
    return (p1[0] + t * d1[0], p1[1] + t * d1[1])


def sub_paths(O: Point, D: Point, obs: EllipseObstacle) -> tuple[SubPathCandidate, SubPathCandidate]:
    """The two candidate detours around obs for the leg O -> D.

    Each origin tangent is paired with the destination tangent whose
    tangency point lies on the same side of the directed line O -> D; the
    candidate waypoint is the intersection of the paired lines. Raises
    DegenerateTangency when a paired intersection does not exist (the
    caller perturbs D and retries).
    """
    to1, to2 = tangent_points(obs, O)
    td1, td2 = tangent_points(obs, D)

    def side(t: Point) -> float:
        return _cross(O[0], O[1], D[0], D[1], t[0], t[1])

    # When OD crosses the obstacle the tangency points straddle the line and
    # this pairs same-side tangents; when it does not (callers outside the
    # planner), it pairs near side with near side.
    so = sorted((to1, to2), key=side)
    sd = sorted((td1, td2), key=side)

    cands = []
    for t_o, t_d in ((so[0], sd[0]), (so[1], sd[1])):
        d_o = (t_o[0] - O[0], t_o[1] - O[1])
        d_d = (t_d[0] - D[0], t_d[1] - D[1])
        f = _line_intersection(O, d_o, D, d_d)
        length = math.hypot(f[0] - O[0], f[1] - O[1]) + math.hypot(D[0] - f[0], D[1] - f[1])
        cands.append(SubPathCandidate(f, Segment(O, f), Segment(f, D), length))
    return cands[0], cands[1]
