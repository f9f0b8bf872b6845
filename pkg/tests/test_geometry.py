"""Geometry primitives against frozen values and independent constructions."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tangentplan.geometry import (
    DegenerateTangency,
    EllipseObstacle,
    PointInsideObstacle,
    Segment,
    first_collided,
    segment_collides,
    signed_margin,
    sub_paths,
    tangent_points,
)

EPS = 1e-7
UNIT = EllipseObstacle(0, 0.0, 0.0, 1.0, 1.0)


# --- independent tangent construction (parametric boundary + bisection) ----

def oracle_tangent_points(obs, p, n=4096):
    ct, st_ = math.cos(obs.theta), math.sin(obs.theta)

    def boundary(phi):
        ux = obs.ea * math.cos(phi)
        uy = obs.eb * math.sin(phi)
        return (obs.cx + ux * ct - uy * st_, obs.cy + ux * st_ + uy * ct)

    def deriv(phi):
        ux = -obs.ea * math.sin(phi)
        uy = obs.eb * math.cos(phi)
        return (ux * ct - uy * st_, ux * st_ + uy * ct)

    def f(phi):
        bx, by = boundary(phi)
        dx, dy = deriv(phi)
        return (bx - p[0]) * dy - (by - p[1]) * dx

    roots = []
    prev = f(0.0)
    for i in range(1, n + 1):
        phi = 2 * math.pi * i / n
        cur = f(phi)
        if prev * cur < 0.0:
            lo, hi = 2 * math.pi * (i - 1) / n, phi
            flo = f(lo)
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                fm = f(mid)
                if flo * fm <= 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            roots.append(0.5 * (lo + hi))
        prev = cur
    return [boundary(r) for r in roots]


def oracle_sub_paths(O, D, obs):
    def side(t):
        return (D[0] - O[0]) * (t[1] - O[1]) - (D[1] - O[1]) * (t[0] - O[0])

    tos = sorted(oracle_tangent_points(obs, O), key=side)
    tds = sorted(oracle_tangent_points(obs, D), key=side)
    cands = []
    for to, td in zip(tos, tds):
        a = np.array([[to[0] - O[0], -(td[0] - D[0])], [to[1] - O[1], -(td[1] - D[1])]])
        b = np.array([D[0] - O[0], D[1] - O[1]])
        t, _ = np.linalg.solve(a, b)
        f = (O[0] + t * (to[0] - O[0]), O[1] + t * (to[1] - O[1]))
        cands.append((f, math.dist(O, f) + math.dist(f, D)))
    return cands


# --- signed_margin ----------------------------------------------------------

def test_signed_margin_unit_circle():
    assert signed_margin(UNIT, (2.0, 0.0)) == pytest.approx(3.0, abs=1e-12)
    assert signed_margin(UNIT, (1.0, 0.0)) == pytest.approx(0.0, abs=1e-12)
    assert signed_margin(UNIT, (0.0, 0.0)) == pytest.approx(-1.0, abs=1e-12)


def test_signed_margin_uses_inflated_axes():
    obs = EllipseObstacle(0, 0.0, 0.0, 1.0, 1.0, 0.0, r_safe=1.0)
    assert signed_margin(obs, (2.0, 0.0)) == pytest.approx(0.0, abs=1e-12)


@given(
    st.floats(-10, 10),
    st.floats(-10, 10),
    st.floats(0.1, math.pi - 0.01),
    st.floats(-20, 20),
    st.floats(-20, 20),
)
@settings(max_examples=200, deadline=None)
def test_signed_margin_rigid_motion_invariant(tx, ty, rot, px, py):
    obs = EllipseObstacle(0, 1.0, -2.0, 3.0, 1.5, 0.4, 0.2)
    g0 = signed_margin(obs, (px, py))
    c, s = math.cos(rot), math.sin(rot)

    def move(p):
        return (c * p[0] - s * p[1] + tx, s * p[0] + c * p[1] + ty)

    mc = move((obs.cx, obs.cy))
    obs2 = EllipseObstacle(0, mc[0], mc[1], obs.a, obs.b, obs.theta + rot, obs.r_safe)
    g1 = signed_margin(obs2, move((px, py)))
    assert g1 == pytest.approx(g0, abs=1e-9)


# --- segment_collides -------------------------------------------------------

def test_segment_collision_cases():
    assert segment_collides(UNIT, Segment((-2, 0), (2, 0)), EPS) == pytest.approx(0.25, abs=1e-12)
    assert segment_collides(UNIT, Segment((-2, 2), (2, 2)), EPS) is None
    # exact tangency is not a collision
    assert segment_collides(UNIT, Segment((-2, 1), (2, 1)), EPS) is None


def test_segment_collides_rejects_bad_eps():
    with pytest.raises(ValueError):
        segment_collides(UNIT, Segment((-2, 0), (2, 0)), 0.0)


def test_degenerate_segment_is_point_query():
    assert segment_collides(UNIT, Segment((0.5, 0.0), (0.5, 0.0)), EPS) == 0.0
    assert segment_collides(UNIT, Segment((2.0, 0.0), (2.0, 0.0)), EPS) is None


# --- first_collided ---------------------------------------------------------

def test_first_collided_orders_by_entry():
    b1 = EllipseObstacle(0, 3.0, 0.0, 1.0, 1.0)
    b2 = EllipseObstacle(1, 6.0, 0.0, 1.0, 1.0)
    seg = Segment((0.0, 0.0), (9.0, 0.0))
    hit = first_collided(seg, [b1, b2], EPS)
    assert hit is not None
    assert hit[0] == 0
    assert hit[1] == pytest.approx(2.0 / 9.0, abs=1e-12)


def test_first_collided_overlapping():
    o1 = EllipseObstacle(0, 3.0, 0.0, 2.0, 2.0)
    o2 = EllipseObstacle(1, 4.0, 0.0, 2.0, 2.0)
    hit = first_collided(Segment((0.0, 0.0), (9.0, 0.0)), [o1, o2], EPS)
    assert hit == (0, pytest.approx(1.0 / 9.0, abs=1e-12))


def test_first_collided_none():
    b1 = EllipseObstacle(0, 3.0, 0.0, 1.0, 1.0)
    b2 = EllipseObstacle(1, 6.0, 0.0, 1.0, 1.0)
    assert first_collided(Segment((0.0, 3.0), (9.0, 3.0)), [b1, b2], EPS) is None
    assert first_collided(Segment((0.0, 0.0), (9.0, 0.0)), [], EPS) is None


def test_first_collided_tie_breaks_by_id():
    # two identical obstacles: same entry parameter, lower id wins
    twin_a = EllipseObstacle(7, 3.0, 0.0, 1.0, 1.0)
    twin_b = EllipseObstacle(3, 3.0, 0.0, 1.0, 1.0)
    hit = first_collided(Segment((0.0, 0.0), (9.0, 0.0)), [twin_a, twin_b], EPS)
    assert hit[0] == 3


def test_first_collided_matches_per_obstacle_bruteforce():
    rng = np.random.default_rng(11)
    for _ in range(60):
        obstacles = [
            EllipseObstacle(
                i,
                float(rng.uniform(-20, 20)),
                float(rng.uniform(-20, 20)),
                float(rng.uniform(1, 4)),
                float(rng.uniform(0.5, 1)),
                float(rng.uniform(0, math.pi)),
                0.3,
            )
            for i in range(10)
        ]
        seg = Segment(
            (float(rng.uniform(-30, 30)), float(rng.uniform(-30, 30))),
            (float(rng.uniform(-30, 30)), float(rng.uniform(-30, 30))),
        )
        hit = first_collided(seg, obstacles, EPS)
        per = [(o.id, segment_collides(o, seg, EPS)) for o in obstacles]
        per = [(i, t) for i, t in per if t is not None]
        if not per:
            assert hit is None
        else:
            best = min(per, key=lambda it: (it[1], it[0]))
            assert hit == best


# --- tangent_points ---------------------------------------------------------

def test_tangent_points_unit_circle():
    t1, t2 = tangent_points(UNIT, (2.0, 0.0))
    got = sorted([t1, t2], key=lambda t: t[1])
    assert got[0] == pytest.approx((0.5, -math.sqrt(3) / 2), abs=1e-12)
    assert got[1] == pytest.approx((0.5, math.sqrt(3) / 2), abs=1e-12)


def test_tangent_points_axis_aligned_ellipse():
    obs = EllipseObstacle(0, 0.0, 0.0, 2.0, 1.0)
    t1, t2 = tangent_points(obs, (4.0, 0.0))
    got = sorted([t1, t2], key=lambda t: t[1])
    assert got[0] == pytest.approx((1.0, -math.sqrt(3) / 2), abs=1e-12)
    assert got[1] == pytest.approx((1.0, math.sqrt(3) / 2), abs=1e-12)


def test_tangent_points_boundary_point_rejected():
    with pytest.raises(PointInsideObstacle):
        tangent_points(UNIT, (1.0, 0.0))
    with pytest.raises(PointInsideObstacle):
        tangent_points(UNIT, (0.5, 0.0))


def test_tangent_points_properties_random():
    # tangency: T on the boundary and (T - p) orthogonal to the boundary normal
    rng = np.random.default_rng(12)
    for _ in range(80):
        obs = EllipseObstacle(
            0,
            float(rng.uniform(-5, 5)),
            float(rng.uniform(-5, 5)),
            float(rng.uniform(1, 4)),
            float(rng.uniform(0.5, 1)),
            float(rng.uniform(0, math.pi)),
            float(rng.uniform(0, 0.8)),
        )
        p = (float(rng.uniform(-20, 20)), float(rng.uniform(-20, 20)))
        if signed_margin(obs, p) <= 0.1:
            continue
        for t in tangent_points(obs, p):
            assert abs(signed_margin(obs, t)) <= 1e-9
            ct, st_ = math.cos(obs.theta), math.sin(obs.theta)
            dx, dy = t[0] - obs.cx, t[1] - obs.cy
            u = (dx * ct + dy * st_) / obs.ea
            v = (dy * ct - dx * st_) / obs.eb
            # gradient of the quadratic form, back in world coordinates
            gu, gv = 2 * u / obs.ea, 2 * v / obs.eb
            n = (gu * ct - gv * st_, gu * st_ + gv * ct)
            d = (t[0] - p[0], t[1] - p[1])
            assert abs(n[0] * d[0] + n[1] * d[1]) <= 1e-9 * math.hypot(*d) * math.hypot(*n) * 10


def test_tangent_points_match_oracle():
    obs = EllipseObstacle(0, 1.5, -0.5, 2.5, 1.0, 0.7, 0.3)
    p = (7.0, 3.0)
    got = sorted(tangent_points(obs, p))
    want = sorted(oracle_tangent_points(obs, p))
    assert len(want) == 2
    for g, w in zip(got, want):
        assert g == pytest.approx(w, abs=1e-7)


# --- sub_paths ---------------------------------------------------------------

def test_sub_paths_symmetric_unit_circle():
    ca, cb = sub_paths((-3.0, 0.0), (3.0, 0.0), UNIT)
    ys = sorted([ca.waypoint[1], cb.waypoint[1]])
    fy = 3.0 / (2.0 * math.sqrt(2.0))
    assert ys[0] == pytest.approx(-fy, abs=1e-9)
    assert ys[1] == pytest.approx(fy, abs=1e-9)
    expect_len = 2.0 * math.hypot(3.0, fy)
    assert ca.length == pytest.approx(expect_len, abs=1e-9)
    assert cb.length == pytest.approx(expect_len, abs=1e-9)


def test_sub_paths_half_radius_circle():
    # tangency condition: origin-leg line at distance exactly 0.5 from center
    small = EllipseObstacle(0, 0.0, 0.0, 0.5, 0.5)
    ca, cb = sub_paths((-3.0, 0.0), (3.0, 0.0), small)
    fy = 3.0 * math.sqrt(0.25 / 8.75)
    ys = sorted([ca.waypoint[1], cb.waypoint[1]])
    assert ys[0] == pytest.approx(-fy, abs=1e-9)
    assert ys[1] == pytest.approx(fy, abs=1e-9)
    # frozen from the analytic derivation
    assert fy == pytest.approx(0.50709255283711, abs=1e-11)


def test_sub_paths_asymmetric_against_oracle():
    # circle large enough that the diagonal O->D actually crosses it
    big = EllipseObstacle(0, 0.0, 0.0, 2.3, 2.3)
    O, D = (-4.0, 0.0), (0.0, 4.0)
    ca, cb = sub_paths(O, D, big)
    want = oracle_sub_paths(O, D, big)
    got = sorted([(ca.waypoint, ca.length), (cb.waypoint, cb.length)], key=lambda c: c[1])
    want.sort(key=lambda c: c[1])
    for (gf, gl), (wf, wl) in zip(got, want):
        assert gf == pytest.approx(wf, abs=1e-7)
        assert gl == pytest.approx(wl, abs=1e-7)
    # the outer detour is longer than the inner one
    assert got[0][1] < got[1][1]


def test_sub_paths_non_crossing_pairs_near_and_far():
    # obstacle fully off the segment: candidates are the near and far detours
    O, D = (-3.0, 0.0), (0.0, 3.0)
    ca, cb = sub_paths(O, D, UNIT)
    want = sorted(oracle_sub_paths(O, D, UNIT), key=lambda c: c[1])
    got = sorted([(ca.waypoint, ca.length), (cb.waypoint, cb.length)], key=lambda c: c[1])
    for (gf, gl), (wf, wl) in zip(got, want):
        assert gf == pytest.approx(wf, abs=1e-7)
        assert gl == pytest.approx(wl, abs=1e-7)
    assert got[0][1] < got[1][1]


def test_sub_paths_structure_and_leg_safety():
    rng = np.random.default_rng(13)
    used = 0
    while used < 60:
        obs = EllipseObstacle(
            0,
            float(rng.uniform(-3, 3)),
            float(rng.uniform(-3, 3)),
            float(rng.uniform(1, 3)),
            float(rng.uniform(0.5, 1)),
            float(rng.uniform(0, math.pi)),
            0.4,
        )
        O = (float(rng.uniform(-20, -8)), float(rng.uniform(-10, 10)))
        D = (float(rng.uniform(8, 20)), float(rng.uniform(-10, 10)))
        seg = Segment(O, D)
        if signed_margin(obs, O) <= 0.05 or signed_margin(obs, D) <= 0.05:
            continue
        if segment_collides(obs, seg, EPS) is None:
            continue
        used += 1
        for cand in sub_paths(O, D, obs):
            assert cand.origin_leg.p == O
            assert cand.origin_leg.q == cand.waypoint
            assert cand.destination_leg.p == cand.waypoint
            assert cand.destination_leg.q == D
            assert cand.length == pytest.approx(
                cand.origin_leg.length + cand.destination_leg.length, rel=1e-9
            )
            # legs are tangent-or-outside for the generating obstacle
            assert segment_collides(obs, cand.origin_leg, EPS) is None
            assert segment_collides(obs, cand.destination_leg, EPS) is None


def test_sub_paths_commute_with_rigid_motion():
    obs = EllipseObstacle(0, 0.5, 0.5, 2.0, 1.0, 0.3, 0.2)
    O, D = (-6.0, -1.0), (7.0, 2.0)
    base = sub_paths(O, D, obs)
    rng = np.random.default_rng(14)
    for _ in range(25):
        rot = float(rng.uniform(0, 2 * math.pi))
        tx, ty = (float(v) for v in rng.uniform(-30, 30, 2))
        c, s = math.cos(rot), math.sin(rot)

        def move(p):
            return (c * p[0] - s * p[1] + tx, s * p[0] + c * p[1] + ty)

        mc = move((obs.cx, obs.cy))
        obs2 = EllipseObstacle(0, mc[0], mc[1], obs.a, obs.b, obs.theta + rot, obs.r_safe)
        moved = sub_paths(move(O), move(D), obs2)
        for b, m in zip(base, moved):
            assert m.waypoint == pytest.approx(move(b.waypoint), abs=1e-9)
            assert m.length == pytest.approx(b.length, abs=1e-9)


def test_sub_paths_rejects_interior_endpoints():
    with pytest.raises(PointInsideObstacle):
        sub_paths((0.0, 0.0), (3.0, 0.0), UNIT)
    with pytest.raises(PointInsideObstacle):
        sub_paths((-3.0, 0.0), (0.5, 0.0), UNIT)


def test_degenerate_tangency_on_parallel_pairing():
    from tangentplan.geometry import _line_intersection

    with pytest.raises(DegenerateTangency):
        _line_intersection((0.0, 0.0), (1.0, 1.0), (5.0, 0.0), (2.0, 2.0))


# --- obstacle validation -----------------------------------------------------

def test_obstacle_validation():
    with pytest.raises(ValueError):
        EllipseObstacle(0, 0.0, 0.0, 1.0, 2.0)  # a < b
    with pytest.raises(ValueError):
        EllipseObstacle(0, 0.0, 0.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        EllipseObstacle(0, math.nan, 0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        EllipseObstacle(0, 0.0, 0.0, 1.0, 1.0, 0.0, -0.1)
    assert EllipseObstacle(0, 0.0, 0.0, 1.0, 1.0, theta=math.pi * 1.5).theta == pytest.approx(
        math.pi / 2
    )
