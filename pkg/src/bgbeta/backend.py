"""Kernel backend selection.

``BGB_BACKEND=numba|numpy|auto`` (default auto) picks the implementation of
the hot kernels; ``BGB_DISABLE_NUMBA=1`` forces the pure-numpy path.  Both
backends expose the same functions and draw from the same random streams; see
``benchmarks/bench_backends.py`` for a speed comparison.
"""

from __future__ import annotations

import os

from . import _kernels_numpy


def _select():
    if os.environ.get("BGB_DISABLE_NUMBA", "").strip() in ("1", "true", "yes"):
        return _kernels_numpy
    choice = os.environ.get("BGB_BACKEND", "auto").strip().lower()
    if choice in ("numpy", "purenumpy"):
        return _kernels_numpy
    if choice == "numba":
        from . import _kernels_numba

        return _kernels_numba
    try:
        from . import _kernels_numba

        return _kernels_numba
    except ImportError:
        return _kernels_numpy


K = _select()
BACKEND = K.BACKEND_NAME


def get_kernels():
    return K
