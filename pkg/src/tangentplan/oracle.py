"""Grid-based shortest-path reference.

8-connected A* over an occupancy grid whose cells are blocked when their
center falls inside any inflated obstacle. Serves as a desk-scale length
reference for the tangent planner; a plain Dijkstra over the same grid
cross-checks the A* implementation.
"""

from __future__ import annotations

import heapq
import math

import numpy as np

from .scenario import Scenario

SQRT2 = math.sqrt(2.0)


def occupancy_grid(scenario: Scenario, cell: float) -> np.ndarray:
    """Boolean blocked-array indexed [iy, ix]; cell centers at ((i+0.5)c, (j+0.5)c)."""
    if cell <= 0.0:
        raise ValueError("cell size must be > 0")
    nx = max(1, int(round(scenario.width / cell)))
    ny = max(1, int(round(scenario.height / cell)))
    blocked = np.zeros((ny, nx), dtype=bool)
    xs = (np.arange(nx) + 0.5) * cell
    ys = (np.arange(ny) + 0.5) * cell
    for o in scenario.obstacles:
        ct = math.cos(o.theta)
        st = math.sin(o.theta)
        hx = math.hypot(o.ea * ct, o.eb * st)
        hy = math.hypot(o.ea * st, o.eb * ct)
        ix0 = max(0, int((o.cx - hx) / cell) - 1)
        ix1 = min(nx, int((o.cx + hx) / cell) + 2)
        iy0 = max(0, int((o.cy - hy) / cell) - 1)
        iy1 = min(ny, int((o.cy + hy) / cell) + 2)
        if ix0 >= ix1 or iy0 >= iy1:
            continue
        gx, gy = np.meshgrid(xs[ix0:ix1], ys[iy0:iy1])
        dx = gx - o.cx
        dy = gy - o.cy
        wx = (dx * ct + dy * st) / o.ea
        wy = (dy * ct - dx * st) / o.eb
        blocked[iy0:iy1, ix0:ix1] |= wx * wx + wy * wy - 1.0 < 0.0
    return blocked


def _cell_of(p, cell: float, nx: int, ny: int) -> tuple[int, int]:
    ix = min(max(int(p[0] / cell), 0), nx - 1)
    iy = min(max(int(p[1] / cell), 0), ny - 1)
    return ix, iy


_STEPS = (
    (1, 0, 1.0),
    (-1, 0, 1.0),
    (0, 1, 1.0),
    (0, -1, 1.0),
    (1, 1, SQRT2),
    (1, -1, SQRT2),
    (-1, 1, SQRT2),
    (-1, -1, SQRT2),
)


def _grid_search(scenario: Scenario, cell: float, use_heuristic: bool) -> float | None:
    blocked = occupancy_grid(scenario, cell)
    ny, nx = blocked.shape
    start = _cell_of(scenario.start, cell, nx, ny)
    goal = _cell_of(scenario.end, cell, nx, ny)
    if blocked[start[1], start[0]] or blocked[goal[1], goal[0]]:
        return None

    def heuristic(ix: int, iy: int) -> float:
        if not use_heuristic:
            return 0.0
        dx = abs(ix - goal[0])
        dy = abs(iy - goal[1])
        return cell * (max(dx, dy) + (SQRT2 - 1.0) * min(dx, dy))

    g = np.full((ny, nx), np.inf)
    g[start[1], start[0]] = 0.0
    heap = [(heuristic(*start), 0, start[0], start[1])]
    counter = 1
    while heap:
        f, _, ix, iy = heapq.heappop(heap)
        gc = g[iy, ix]
        if (ix, iy) == goal:
            return float(gc)
        if f > gc + heuristic(ix, iy):
            continue
        for dx, dy, w in _STEPS:
            jx, jy = ix + dx, iy + dy
            if not (0 <= jx < nx and 0 <= jy < ny) or blocked[jy, jx]:
                continue
            if dx != 0 and dy != 0 and (blocked[iy, jx] or blocked[jy, ix]):
                continue  # no corner cutting
            ng = gc + w * cell
            if ng < g[jy, jx]:
                g[jy, jx] = ng
                heapq.heappush(heap, (ng + heuristic(jx, jy), counter, jx, jy))
                counter += 1
    return None


def grid_astar_oracle(scenario: Scenario, cell: float) -> float | None:
    """Shortest grid-path length in km, or None when unreachable."""
    return _grid_search(scenario, cell, use_heuristic=True)


def grid_dijkstra(scenario: Scenario, cell: float) -> float | None:
    """Heuristic-free reference over the exact same grid (for cross-checks)."""
    return _grid_search(scenario, cell, use_heuristic=False)
