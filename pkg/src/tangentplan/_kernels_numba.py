"""Numba twins of the hot geometry kernels.

Same packed parameter layout and the exact same arithmetic as
`_kernels_numpy`; the loops here just run one obstacle at a time under
@njit. Importing this module triggers no compilation; the first call does.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def point_margins(px, py, params):
    n = params.shape[0]
    out = np.empty(n)
    for i in range(n):
        dx = px - params[i, 0]
        dy = py - params[i, 1]
        ct = params[i, 2]
        st = params[i, 3]
        wx = (dx * ct + dy * st) * params[i, 4]
        wy = (dy * ct - dx * st) * params[i, 5]
        out[i] = wx * wx + wy * wy - 1.0
    return out


@njit(cache=True)
def segment_eval(px, py, qx, qy, params):
    n = params.shape[0]
    min_margin = np.empty(n)
    entry = np.empty(n)
    for i in range(n):
        cx = params[i, 0]
        cy = params[i, 1]
        ct = params[i, 2]
        st = params[i, 3]
        iea = params[i, 4]
        ieb = params[i, 5]

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

        if aa <= 0.0:
            min_margin[i] = cc
            entry[i] = 0.0 if cc < 0.0 else np.inf
            continue

        tm = -bb / aa
        if tm < 0.0:
            tm = 0.0
        elif tm > 1.0:
            tm = 1.0
        mx = wpx + tm * dwx
        my = wpy + tm * dwy
        min_margin[i] = mx * mx + my * my - 1.0

        disc = bb * bb - aa * cc
        if disc > 0.0:
            sq = np.sqrt(disc)
            t1 = (-bb - sq) / aa
            t2 = (-bb + sq) / aa
            if t2 >= 0.0 and t1 <= 1.0:
                entry[i] = t1 if t1 > 0.0 else 0.0
            else:
                entry[i] = np.inf
        else:
            entry[i] = np.inf
    return min_margin, entry


@njit(cache=True)
def min_margins(xs, ys, params):
    m = xs.shape[0]
    n = params.shape[0]
    out = np.full(m, np.inf)
    for j in range(m):
        x = xs[j]
        y = ys[j]
        best = np.inf
        for i in range(n):
            dx = x - params[i, 0]
            dy = y - params[i, 1]
            ct = params[i, 2]
            st = params[i, 3]
            wx = (dx * ct + dy * st) * params[i, 4]
            wy = (dy * ct - dx * st) * params[i, 5]
            g = wx * wx + wy * wy - 1.0
            if g < best:
                best = g
        out[j] = best
    return out


@njit(cache=True)
def boundary_distances(px, py, params):
    n = params.shape[0]
    out = np.zeros(n)
    for i in range(n):
        cx = params[i, 0]
        cy = params[i, 1]
        ct = params[i, 2]
        st = params[i, 3]
        ea = params[i, 6]
        eb = params[i, 7]

        dx = px - cx
        dy = py - cy
        u = abs(dx * ct + dy * st)
        v = abs(dy * ct - dx * st)

        if ea == eb:
            d = np.sqrt(u * u + v * v) - ea
            out[i] = d if d > 0.0 else 0.0
            continue

        gu = u * params[i, 4]
        gv = v * params[i, 5]
        if gu * gu + gv * gv - 1.0 <= 0.0:
            out[i] = 0.0
            continue

        r = np.sqrt(u * u + v * v)
        lo = 0.0
        hi = ea * (r + ea)
        fhi = (ea * u / (hi + ea * ea)) ** 2 + (eb * v / (hi + eb * eb)) ** 2 - 1.0
        for _ in range(8):
            if fhi >= 0.0:
                hi = hi * 2.0
            fhi = (ea * u / (hi + ea * ea)) ** 2 + (eb * v / (hi + eb * eb)) ** 2 - 1.0
        for _ in range(90):
            mid = 0.5 * (lo + hi)
            fm = (ea * u / (mid + ea * ea)) ** 2 + (eb * v / (mid + eb * eb)) ** 2 - 1.0
            if fm >= 0.0:
                lo = mid
            else:
                hi = mid
        t = 0.5 * (lo + hi)
        bx = ea * ea * u / (t + ea * ea)
        by = eb * eb * v / (t + eb * eb)
        out[i] = np.sqrt((bx - u) ** 2 + (by - v) ** 2)
    return out
