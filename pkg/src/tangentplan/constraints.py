"""Post-hoc platform-constraint evaluation.

The planner itself does not enforce these; they are checked on the
finished route (leg lengths against the raw waypoints, turning radius
against the smoothed curve) and reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .smoothing import SmoothedCurve, max_curvature


@dataclass(frozen=True)
class ConstraintLimits:
    l_max: float = 300.0  # maximum range, km
    leg_min: float = 0.1  # minimum route leg length, km
    r_min: float = 0.2  # minimum turning radius, km

    def __post_init__(self):
        if min(self.l_max, self.leg_min, self.r_min) <= 0.0:
            raise ValueError("constraint limits must be strictly positive")


@dataclass(frozen=True)
class ConstraintReport:
    total_length: float
    range_ok: bool
    min_leg: float
    leg_ok: bool
    max_curvature: float
    turn_ok: bool

    def to_dict(self) -> dict:
        return {
            "total_length_km": self.total_length,
            "range_ok": self.range_ok,
            "min_leg_km": self.min_leg,
            "leg_ok": self.leg_ok,
            "max_curvature_per_km": self.max_curvature,
            "turn_ok": self.turn_ok,
        }


def total_length(waypoints) -> float:
    """Sum of Euclidean leg lengths along a waypoint sequence."""
    pts = list(waypoints)
    if not pts:
        raise ValueError("need at least one waypoint")
    total = 0.0
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        total += math.hypot(x1 - x0, y1 - y0)
    return total


def check(plan, curve: SmoothedCurve, limits: ConstraintLimits) -> ConstraintReport:
    """Fill a constraint report for a plan and its smoothed curve."""
    length = total_length(plan.route)
    legs = [
        math.hypot(x1 - x0, y1 - y0)
        for (x0, y0), (x1, y1) in zip(plan.route, plan.route[1:])
    ]
    min_leg = min(legs) if legs else 0.0
    kappa = max_curvature(curve) if curve.samples.shape[0] >= 3 else 0.0
    return ConstraintReport(
        total_length=length,
        range_ok=length <= limits.l_max,
        min_leg=min_leg,
        leg_ok=min_leg >= limits.leg_min,
        max_curvature=kappa,
        turn_ok=kappa <= 1.0 / limits.r_min,
    )
