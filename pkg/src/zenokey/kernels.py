"""Sampling backend selection.

Prefers the compiled kernel, falls back to the numpy implementation
when the extension is absent (pure-source install).  Both produce
identical arrays for identical inputs; the benchmark script and the
parity tests compare them directly.
"""

from __future__ import annotations

import numpy as np

from .rng import ROUND_STRIDE

try:
    from . import _sampling_cy as _impl

    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on build environment
    from . import _sampling_py as _impl

    BACKEND = "python"

assert ROUND_STRIDE == 8, "kernels assume the 8-slot round stride"


def sample_rounds(
    seed: int,
    n_rounds: int,
    engage_p_b: float,
    engage_p_c: float,
    cum_tables: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Sample (bob, charlie, engaged_b, engaged_c, atom) arrays."""
    tables = np.ascontiguousarray(cum_tables, dtype=np.float64)
    if tables.shape != (2, 2, 2, 2, 32):
        raise ValueError(f"cumulative tables have shape {tables.shape}")
    return _impl.sample_rounds(seed, n_rounds, engage_p_b, engage_p_c, tables)
