"""Cubic B-spline smoothing of a waypoint route.

The route's waypoints act as the control polygon, with the first and last
point each repeated three times so the sampled curve is clamped to the
route endpoints. Discrete curvature comes from the circumscribed circle of
consecutive sample triples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .geometry import ObstacleField, Point


class TooFewWaypoints(Exception):
    pass


class TooFewSamples(Exception):
    pass


@dataclass
class SmoothedCurve:
    samples: np.ndarray  # (M, 2)
    curvature: np.ndarray  # (M,), 1/km, zero at the two end samples
    samples_per_segment: int


def basis(t: float) -> tuple[float, float, float, float]:
    """The four cubic B-spline blending weights at local parameter t."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must be in [0, 1], got {t}")
    t2 = t * t
    t3 = t2 * t
    g0 = (-t3 + 3.0 * t2 - 3.0 * t + 1.0) / 6.0
    g1 = (3.0 * t3 - 6.0 * t2 + 4.0) / 6.0
    g2 = (-3.0 * t3 + 3.0 * t2 + 3.0 * t + 1.0) / 6.0
    g3 = t3 / 6.0
    return g0, g1, g2, g3


def menger_curvature(p0: Point, p1: Point, p2: Point) -> float:
    """Inverse radius of the circle through three points (0 for collinear)."""
    ax, ay = p1[0] - p0[0], p1[1] - p0[1]
    bx, by = p2[0] - p1[0], p2[1] - p1[1]
    cx, cy = p2[0] - p0[0], p2[1] - p0[1]
    area2 = abs(ax * by - ay * bx)
    la = math.hypot(ax, ay)
    lb = math.hypot(bx, by)
    lc = math.hypot(cx, cy)
    denom = la * lb * lc
    if denom == 0.0:
        return 0.0
    return 2.0 * area2 / denom


def smooth(waypoints, samples_per_segment: int = 20) -> SmoothedCurve:
    """Sample the clamped cubic B-spline through the route's control polygon."""
    pts = [(float(x), float(y)) for x, y in waypoints]
    if len(pts) < 2:
        raise TooFewWaypoints("need at least 2 waypoints to smooth")
    if samples_per_segment < 2:
        raise ValueError("samples_per_segment must be >= 2")

    control = [pts[0], pts[0]] + pts + [pts[-1], pts[-1]]
    n_segments = len(control) - 3
    ts = np.arange(samples_per_segment) / samples_per_segment

    xs = []
    ys = []
    for i in range(n_segments):
        p0, p1, p2, p3 = control[i], control[i + 1], control[i + 2], control[i + 3]
        for t in ts:
            g0, g1, g2, g3 = basis(float(t))
            xs.append(g0 * p0[0] + g1 * p1[0] + g2 * p2[0] + g3 * p3[0])
            ys.append(g0 * p0[1] + g1 * p1[1] + g2 * p2[1] + g3 * p3[1])
    # close the curve at t=1 of the final segment
    g0, g1, g2, g3 = basis(1.0)
    p0, p1, p2, p3 = control[-4], control[-3], control[-2], control[-1]
    xs.append(g0 * p0[0] + g1 * p1[0] + g2 * p2[0] + g3 * p3[0])
    ys.append(g0 * p0[1] + g1 * p1[1] + g2 * p2[1] + g3 * p3[1])

    samples = np.column_stack([xs, ys])
    m = samples.shape[0]
    curvature = np.zeros(m)
    for j in range(1, m - 1):
        curvature[j] = menger_curvature(
            tuple(samples[j - 1]), tuple(samples[j]), tuple(samples[j + 1])
        )
    return SmoothedCurve(samples, curvature, samples_per_segment)


def max_curvature(curve: SmoothedCurve) -> float:
    """Largest discrete curvature over interior sample triples."""
    if curve.samples.shape[0] < 3:
        raise TooFewSamples("need at least 3 samples for a curvature estimate")
    return float(curve.curvature[1:-1].max())


def clearance_margin(curve: SmoothedCurve, fld: ObstacleField) -> float:
    """Worst signed margin of the sampled curve against a packed field.

    Reported, not enforced: smoothing may cut slightly inside the control
    polygon corners and the safety margin is expected to absorb it.
    """
    if len(fld) == 0:
        return math.inf
    m = kernels.min_margins(
        np.ascontiguousarray(curve.samples[:, 0]),
        np.ascontiguousarray(curve.samples[:, 1]),
        fld.params,
    )
    return float(m.min())
