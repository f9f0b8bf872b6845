"""Backend selection for the hot geometry kernels.

The numba backend is the default when numba imports cleanly; setting
TANGENTPLAN_BACKEND=numpy forces the pure-numpy fallback, and
TANGENTPLAN_BACKEND=numba insists on numba (raising if unavailable).
Both backends share the same packed-array layout and arithmetic; see
benchmarks/compare_backends.py for a throughput comparison.
"""

import os

from . import _kernels_numpy


def _select():
    choice = os.environ.get("TANGENTPLAN_BACKEND", "auto").lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"TANGENTPLAN_BACKEND must be auto, numba or numpy, got {choice!r}")
    if choice == "numpy":
        return "numpy", _kernels_numpy
    try:
        from . import _kernels_numba
    except ImportError:
        if choice == "numba":
            raise
        return "numpy", _kernels_numpy
    return "numba", _kernels_numba


ACTIVE_BACKEND, _impl = _select()

point_margins = _impl.point_margins
segment_eval = _impl.segment_eval
min_margins = _impl.min_margins
boundary_distances = _impl.boundary_distances


def warmup():
    """Trigger JIT compilation (no-op on the numpy backend)."""
    import numpy as np

    params = np.array([[0.0, 0.0, 1.0, 0.0, 0.5, 1.0, 2.0, 1.0]])
    point_margins(3.0, 0.0, params)
    segment_eval(-3.0, 0.0, 3.0, 0.5, params)
    min_margins(np.array([3.0, 4.0]), np.array([0.0, 0.0]), params)
    boundary_distances(4.0, 1.0, params)
