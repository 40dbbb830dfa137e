"""Pure-numpy sampling kernel, bit-compatible with the compiled one.

Rounds are grouped by their (bob, charlie, engaged_b, engaged_c) table
index so each group is one vectorized searchsorted.  searchsorted with
side="right" returns the first index whose cumulative value exceeds the
draw, which is exactly the compiled kernel's first-passage linear scan,
including tie behavior at zero-width atoms.
"""

from __future__ import annotations

import numpy as np

from .rng import ROUND_STRIDE, u01_array


def sample_rounds(
    seed: int,
    n_rounds: int,
    engage_p_b: float,
    engage_p_c: float,
    cum_tables: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    base = np.arange(n_rounds, dtype=np.uint64) * np.uint64(ROUND_STRIDE)
    bob = (u01_array(seed, base) >= 0.5).astype(np.uint8)
    charlie = (u01_array(seed, base + np.uint64(1)) >= 0.5).astype(np.uint8)
    eng_b = (u01_array(seed, base + np.uint64(2)) < engage_p_b).astype(np.uint8)
    eng_c = (u01_array(seed, base + np.uint64(3)) < engage_p_c).astype(np.uint8)
    draws = u01_array(seed, base + np.uint64(4))

    tables = cum_tables.reshape(16, 32)
    code = bob * 8 + charlie * 4 + eng_b * 2 + eng_c
    atoms = np.empty(n_rounds, dtype=np.uint8)
    for combo in np.unique(code):
        mask = code == combo
        found = np.searchsorted(tables[combo], draws[mask], side="right")
        atoms[mask] = np.minimum(found, 31).astype(np.uint8)
    return bob, charlie, eng_b, eng_c, atoms
