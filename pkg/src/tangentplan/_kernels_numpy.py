"""Pure-numpy implementations of the hot geometry kernels.

All kernels operate on a packed obstacle parameter array with one row per
obstacle and columns

    0 cx, 1 cy, 2 cos(theta), 3 sin(theta),
    4 1/ea, 5 1/eb, 6 ea, 7 eb

where ea = a + r_safe and eb = b + r_safe are the inflated semi-axes.
The formulas here are mirrored verbatim in the numba twin module so that
both backends produce bit-identical results (only +, -, *, / and sqrt).
"""

import numpy as np


def point_margins(px, py, params):
    """Signed margin of one point against every obstacle.

    Margin is the inflated-ellipse quadratic form minus one: >= 0 outside
    or on the boundary, < 0 inside.
    """
    dx = px - params[:, 0]
    dy = py - params[:, 1]
    ct = params[:, 2]
    st = params[:, 3]
    wx = (dx * ct + dy * st) * params[:, 4]
    wy = (dy * ct - dx * st) * params[:, 5]
    return wx * wx + wy * wy - 1.0


def segment_eval(px, py, qx, qy, params):
    """Evaluate segment p->q against every obstacle.

    Returns (min_margin, entry_t): the minimum signed margin along the
    segment and the parameter in [0, 1] where the segment first crosses the
    inflated boundary (inf when the segment never reaches the boundary).
    A degenerate segment (p == q) is treated as a point query.
    """
    cx = params[:, 0]
    cy = params[:, 1]
    ct = params[:, 2]
    st = params[:, 3]
    iea = params[:, 4]
    ieb = params[:, 5]

    dxp = px - cx
    dyp = py - cy
    wpx = (dxp * ct + dyp * st) * iea
    wpy = (dyp * ct - dxp * st) * ieb
    dxq = qx - cx
    dyq = qy - cy
    wqx = (dxq * ct + dyq * st) * iea
    wqy = (dyq * ct - dxq * st) * ieb

    dwx = wqx - wpx
    dwy = wqy - wpy
    aa = dwx * dwx + dwy * dwy
    bb = wpx * dwx + wpy * dwy
    cc = wpx * wpx + wpy * wpy - 1.0

    point_like = aa <= 0.0
    safe_aa = np.where(point_like, 1.0, aa)
    tm = np.clip(-bb / safe_aa, 0.0, 1.0)
    tm = np.where(point_like, 0.0, tm)
    mx = wpx + tm * dwx
    my = wpy + tm * dwy
    min_margin = mx * mx + my * my - 1.0

    disc = bb * bb - aa * cc
    sq = np.sqrt(np.maximum(disc, 0.0))
    t1 = (-bb - sq) / safe_aa
    t2 = (-bb + sq) / safe_aa
    crosses = (disc > 0.0) & (t2 >= 0.0) & (t1 <= 1.0) & ~point_like
    entry = np.where(crosses, np.maximum(t1, 0.0), np.inf)
    entry = np.where(point_like, np.where(cc < 0.0, 0.0, np.inf), entry)
    return min_margin, entry


def min_margins(xs, ys, params):
    """Minimum signed margin over all obstacles for each point of a polyline."""
    if params.shape[0] == 0:
        return np.full(xs.shape[0], np.inf)
    dx = xs[:, None] - params[None, :, 0]
    dy = ys[:, None] - params[None, :, 1]
    ct = params[None, :, 2]
    st = params[None, :, 3]
    wx = (dx * ct + dy * st) * params[None, :, 4]
    wy = (dy * ct - dx * st) * params[None, :, 5]
    m = wx * wx + wy * wy - 1.0
    return m.min(axis=1)


def boundary_distances(px, py, params):
    """Euclidean distance from a point to each inflated obstacle boundary.

    Points inside an obstacle get distance 0. Circles are solved exactly;
    ellipses by a fixed-schedule bisection on the standard one-parameter
    closest-point equation, which keeps the arithmetic identical across
    backends.
    """
    n = params.shape[0]
    if n == 0:
        return np.empty(0)
    cx = params[:, 0]
    cy = params[:, 1]
    ct = params[:, 2]
    st = params[:, 3]
    ea = params[:, 6]
    eb = params[:, 7]

    dx = px - cx
    dy = py - cy
    u = np.abs(dx * ct + dy * st)
    v = np.abs(dy * ct - dx * st)

    out = np.zeros(n)
    circle = ea == eb
    out = np.where(circle, np.maximum(np.sqrt(u * u + v * v) - ea, 0.0), out)

    ell = ~circle
    inside = (u * params[:, 4]) ** 2 + (v * params[:, 5]) ** 2 - 1.0 <= 0.0
    work = ell & ~inside
    if np.any(work):
        r = np.sqrt(u * u + v * v)
        lo = np.zeros(n)
        hi = ea * (r + ea)
        fhi = (ea * u / (hi + ea * ea)) ** 2 + (eb * v / (hi + eb * eb)) ** 2 - 1.0
        for _ in range(8):
            grow = fhi >= 0.0
            hi = np.where(grow, hi * 2.0, hi)
            fhi = (ea * u / (hi + ea * ea)) ** 2 + (eb * v / (hi + eb * eb)) ** 2 - 1.0
        for _ in range(90):
            mid = 0.5 * (lo + hi)
            fm = (ea * u / (mid + ea * ea)) ** 2 + (eb * v / (mid + eb * eb)) ** 2 - 1.0
            take_hi = fm >= 0.0
            lo = np.where(take_hi, mid, lo)
            hi = np.where(take_hi, hi, mid)
        t = 0.5 * (lo + hi)
        bx = ea * ea * u / (t + ea * ea)
        by = eb * eb * v / (t + eb * eb)
        d = np.sqrt((bx - u) ** 2 + (by - v) ** 2)
        out = np.where(work, d, out)
    return out
