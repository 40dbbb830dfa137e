"""Counter-based random number generation for reproducible sessions.

Every random decision in a session is addressed by an absolute counter,
so rounds can be sampled independently, in any order, on any backend.
The generator is a stateless SplitMix64-style mixer: the value at
counter ``c`` for seed ``s`` is ``mix(s + c * GAMMA)``.  The same
arithmetic is implemented three times (here as scalar Python, in
``_sampling_py`` vectorized over numpy uint64, and in ``_sampling_cy``
as a C loop) and all three produce identical bits.

Counter layout: each round owns a stride of ROUND_STRIDE counters.
Slot 0 is Bob's bit, slot 1 Charlie's bit, slots 2 and 3 the per-arm
tamper engagement draws, slot 4 the outcome atom.  Remaining slots are
reserved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB

ROUND_STRIDE = 8

SLOT_BOB = 0
SLOT_CHARLIE = 1
SLOT_ENGAGE_B = 2
SLOT_ENGAGE_C = 3
SLOT_OUTCOME = 4

_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


def mix64(seed: int, counter: int) -> int:
    """Return the 64-bit word at an absolute counter position."""
    z = (seed + counter * GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def u01(seed: int, counter: int) -> float:
    """Uniform double in [0, 1) from the top 53 bits of mix64."""
    return (mix64(seed, counter) >> 11) * _INV_2_53


def u01_array(seed: int, counters: np.ndarray) -> np.ndarray:
    """Vectorized u01 over an array of uint64 counters (bit-identical)."""
    z = (np.uint64(seed & MASK64) + counters.astype(np.uint64) * np.uint64(GAMMA))
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * _INV_2_53


def normalize_seed(seed: int) -> int:
    """Reduce an arbitrary integer seed to the canonical 64-bit value."""
    return int(seed) & MASK64


@dataclass(frozen=True)
class RoundStream:
    """Addressable view of one round's slice of the random stream."""

    seed: int
    round_index: int

    def draw(self, slot: int) -> float:
        if not 0 <= slot < ROUND_STRIDE:
            raise ValueError(f"slot must be in [0, {ROUND_STRIDE}), got {slot}")
        base = self.round_index * ROUND_STRIDE
        return u01(normalize_seed(self.seed), base + slot)
