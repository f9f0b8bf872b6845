#!/usr/bin/env python3
"""Throughput comparison of the numba and numpy kernel backends.

Times the four hot kernels on packed obstacle arrays of growing size and
prints a table plus an end-to-end planner comparison. Run:

    python3 benchmarks/compare_backends.py
"""

import time

import numpy as np

from tangentplan import _kernels_numba as knb
from tangentplan import _kernels_numpy as knp


def make_params(n, rng):
    cx, cy = rng.uniform(0, 200, (2, n))
    th = rng.uniform(0, np.pi, n)
    a = rng.uniform(1, 8, n)
    b = a * rng.uniform(0.2, 1.0, n)
    rs = np.full(n, 0.5)
    ea, eb = a + rs, b + rs
    return np.column_stack([cx, cy, np.cos(th), np.sin(th), 1 / ea, 1 / eb, ea, eb])


def bench(fn, args, repeat=2000):
    fn(*args)  # warm (JIT compile on the numba side)
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat


def main():
    rng = np.random.default_rng(42)
    print(f"{'kernel':<22}{'n':>6}{'numpy us':>12}{'numba us':>12}{'speedup':>9}")
    for n in (10, 50, 150, 600):
        params = make_params(n, rng)
        xs = rng.uniform(0, 200, 400)
        ys = rng.uniform(0, 200, 400)
        cases = [
            ("point_margins", (5.0, 5.0, params)),
            ("segment_eval", (5.0, 5.0, 190.0, 140.0, params)),
            ("min_margins", (xs, ys, params)),
            ("boundary_distances", (5.0, 5.0, params)),
        ]
        for name, args in cases:
            t_np = bench(getattr(knp, name), args)
            t_nb = bench(getattr(knb, name), args)
            print(f"{name:<22}{n:>6}{t_np * 1e6:>12.2f}{t_nb * 1e6:>12.2f}{t_np / t_nb:>9.2f}x")

    # end-to-end: the same plan under each backend (selection is import-time,
    # so emulate by monkeypatching the kernels module)
    from tangentplan import kernels
    from tangentplan.generators import generate_environment
    from tangentplan.planner import plan_static

    sc = generate_environment("E3", 200, 150, 7)
    results = {}
    for label, impl in (("numpy", knp), ("numba", knb)):
        saved = (kernels.point_margins, kernels.segment_eval, kernels.min_margins, kernels.boundary_distances)
        kernels.point_margins = impl.point_margins
        kernels.segment_eval = impl.segment_eval
        kernels.min_margins = impl.min_margins
        kernels.boundary_distances = impl.boundary_distances
        try:
            plan_static(sc)  # warm
            t0 = time.perf_counter()
            for _ in range(20):
                plan = plan_static(sc)
            results[label] = (time.perf_counter() - t0) / 20, plan.length
        finally:
            (kernels.point_margins, kernels.segment_eval, kernels.min_margins, kernels.boundary_distances) = saved

    print()
    for label, (dt, length) in results.items():
        print(f"plan_static E3 n=150 f=200 [{label:>5}]: {dt * 1e3:8.2f} ms  length={length:.3f}")
    assert abs(results["numpy"][1] - results["numba"][1]) < 1e-12, "backends disagree"


if __name__ == "__main__":
    main()
