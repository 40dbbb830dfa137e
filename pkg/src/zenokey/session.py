"""Monte Carlo sessions: sampled rounds, sifting, tamper models.

A session draws both parties' bits uniformly per round, samples each
round's terminal event from the exact joint distribution, and sifts:
rounds where D1 clicked are announced and their bits kept.  Sampling is
reduced to table lookup: for every combination of (bob bit, charlie
bit, tamper engagement B, tamper engagement C) the exact distribution
over 32 atoms (8 terminal cells x probe-fired flags) is precomputed
once, so a round costs five counter-based uniform draws regardless of
cycle counts.  The per-round draw layout lives in the rng module; the
inner sampling loop is provided by a compiled kernel when available.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterator

import numpy as np

from . import kernels
from .protocol import (
    TERMINAL_CELLS,
    Action,
    Party,
    RoundOutcome,
    action_for,
    outcome_atoms,
)
from .rng import (
    SLOT_ENGAGE_B,
    SLOT_ENGAGE_C,
    SLOT_OUTCOME,
    RoundStream,
    normalize_seed,
)
from .state import Detector, Polarization

TABLE_TOL = 1e-9


class TamperKind(Enum):
    NONE = "none"
    BLOCK_ALWAYS = "block_always"
    PRESENCE_PROBE = "presence_probe"
    POL_FLIP = "pol_flip"


@dataclass(frozen=True)
class TamperModel:
    """Per-arm channel interference, engaged per round with the given
    probability.  block_always forces the arm to block, pol_flip flips
    the returning polarization, presence_probe decoheres channel
    presence at every passage and records whether it found the photon.
    """

    kind: TamperKind = TamperKind.NONE
    probability: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError("tamper probability must lie in [0, 1]")

    @property
    def engage_probability(self) -> float:
        return 0.0 if self.kind is TamperKind.NONE else self.probability


@dataclass(frozen=True)
class ProtocolConfig:
    m: int
    n: int
    rounds: int
    seed: int
    tamper_b: TamperModel = TamperModel()
    tamper_c: TamperModel = TamperModel()
    record_polarization: bool = False

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ValueError("cycle counts M and N must be >= 1")
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")


# Cell index -> Detector for the eight terminal cells.
_CELL_DETECTOR = np.array(
    [int(det) for det, _pol in TERMINAL_CELLS], dtype=np.uint8
)


def _arm_flags(tamper: TamperModel, engaged: bool, action: Action):
    if not engaged:
        return action, False, False
    if tamper.kind is TamperKind.BLOCK_ALWAYS:
        return Action.BLOCK, False, False
    if tamper.kind is TamperKind.PRESENCE_PROBE:
        return action, True, False
    if tamper.kind is TamperKind.POL_FLIP:
        return action, False, True
    return action, False, False


@lru_cache(maxsize=32)
def _cumulative_tables(
    m: int, n: int, tamper_b: TamperModel, tamper_c: TamperModel
) -> np.ndarray:
    """Cumulative atom tables indexed by (bob, charlie, engaged_b, engaged_c)."""
    tables = np.zeros((2, 2, 2, 2, 32), dtype=np.float64)
    for bob_bit in (0, 1):
        for charlie_bit in (0, 1):
            base_b = action_for(Party.BOB, bob_bit)
            base_c = action_for(Party.CHARLIE, charlie_bit)
            for eng_b in (0, 1):
                for eng_c in (0, 1):
                    act_b, probed_b, flip_b = _arm_flags(tamper_b, bool(eng_b), base_b)
                    act_c, probed_c, flip_c = _arm_flags(tamper_c, bool(eng_c), base_c)
                    masses = outcome_atoms(
                        m,
                        n,
                        act_b,
                        act_c,
                        probed_b=probed_b,
                        probed_c=probed_c,
                        flip_b=flip_b,
                        flip_c=flip_c,
                    ).ravel()
                    total = masses.sum()
                    if abs(total - 1.0) > TABLE_TOL:
                        raise ValueError(
                            f"outcome masses sum to {total!r}, conservation broken"
                        )
                    cum = np.cumsum(masses)
                    cum[-1] = 1.0
                    tables[bob_bit, charlie_bit, eng_b, eng_c] = cum
    tables.setflags(write=False)
    return tables


def session_tables(config: ProtocolConfig) -> np.ndarray:
    return _cumulative_tables(config.m, config.n, config.tamper_b, config.tamper_c)


def run_round(
    bob_bit: int, charlie_bit: int, config: ProtocolConfig, stream: RoundStream
) -> RoundOutcome:
    """Sample one round's terminal for fixed bits at a stream position.

    Uses the same draws a full session would use at that round index,
    so a session round whose drawn bits match reproduces this outcome.
    """
    if bob_bit not in (0, 1) or charlie_bit not in (0, 1):
        raise ValueError("bits must be 0 or 1")
    tables = session_tables(config)
    eng_b = stream.draw(SLOT_ENGAGE_B) < config.tamper_b.engage_probability
    eng_c = stream.draw(SLOT_ENGAGE_C) < config.tamper_c.engage_probability
    cum = tables[bob_bit, charlie_bit, int(eng_b), int(eng_c)]
    atom = int(np.searchsorted(cum, stream.draw(SLOT_OUTCOME), side="right"))
    atom = min(atom, 31)
    cell, fired_b, fired_c = atom >> 2, (atom >> 1) & 1, atom & 1
    detector, pol = TERMINAL_CELLS[cell]
    if not config.record_polarization:
        pol = None
    return RoundOutcome(detector, pol, bool(fired_b), bool(fired_c))


@dataclass
class SessionRecord:
    """Complete per-round log of one session plus aggregates."""

    config: ProtocolConfig
    bob_bits: np.ndarray
    charlie_bits: np.ndarray
    cells: np.ndarray
    outcomes: np.ndarray
    fired_b: np.ndarray
    fired_c: np.ndarray
    kept: np.ndarray
    counts: dict[str, int] = field(default_factory=dict)
    mismatches: int = 0
    engaged_b_count: int = 0
    engaged_c_count: int = 0
    fired_b_count: int = 0
    fired_c_count: int = 0

    @property
    def rounds(self) -> int:
        return int(self.bob_bits.shape[0])

    @property
    def kept_count(self) -> int:
        return int(self.kept.sum())

    @property
    def kept_fraction(self) -> float:
        return self.kept_count / self.rounds

    @property
    def qber(self) -> float:
        return self.mismatches / self.kept_count if self.kept_count else 0.0

    def outcome_label(self, i: int) -> str:
        return Detector(int(self.outcomes[i])).label

    def iter_rounds(self) -> Iterator[tuple[int, int, int, str, int]]:
        for i in range(self.rounds):
            yield (
                i,
                int(self.bob_bits[i]),
                int(self.charlie_bits[i]),
                self.outcome_label(i),
                int(self.kept[i]),
            )

    def exit_polarization_counts(self) -> dict[str, int]:
        """H/V click tallies at D1 and D2 (diagnostic)."""
        out: dict[str, int] = {}
        for cell, (det, pol) in enumerate(TERMINAL_CELLS):
            if pol is None:
                continue
            key = f"{det.label}_{Polarization(pol).name}"
            out[key] = int(np.sum(self.cells == cell))
        return out


@dataclass(frozen=True)
class SiftedKeys:
    """The bits both parties keep after Alice announces the D1 rounds."""

    bob_key: str
    charlie_key: str
    kept_round_indices: list[int]

    def __len__(self) -> int:
        return len(self.bob_key)


def sift(record: SessionRecord) -> SiftedKeys:
    """Keep exactly the D1 rounds, in round order."""
    idx = np.flatnonzero(record.kept)
    bob = "".join("01"[b] for b in record.bob_bits[idx])
    charlie = "".join("01"[b] for b in record.charlie_bits[idx])
    return SiftedKeys(bob, charlie, [int(i) for i in idx])


def run_session(config: ProtocolConfig) -> tuple[SessionRecord, SiftedKeys]:
    """Run a full session: sample every round, aggregate, and sift."""
    tables = session_tables(config)
    bob, charlie, eng_b, eng_c, atoms = kernels.sample_rounds(
        normalize_seed(config.seed),
        config.rounds,
        config.tamper_b.engage_probability,
        config.tamper_c.engage_probability,
        tables,
    )
    cells = (atoms >> 2).astype(np.uint8)
    fired_b = ((atoms >> 1) & 1).astype(bool)
    fired_c = (atoms & 1).astype(bool)
    outcomes = _CELL_DETECTOR[cells]
    kept = outcomes == int(Detector.D1)
    tallies = np.bincount(outcomes, minlength=8)
    counts = {
        det.label: int(tallies[int(det)])
        for det in (
            Detector.D1,
            Detector.D2,
            Detector.D3_B,
            Detector.D3_C,
            Detector.D4_B,
            Detector.D4_C,
        )
    }
    record = SessionRecord(
        config=config,
        bob_bits=bob,
        charlie_bits=charlie,
        cells=cells,
        outcomes=outcomes,
        fired_b=fired_b,
        fired_c=fired_c,
        kept=kept,
        counts=counts,
        mismatches=int(np.sum(bob[kept] != charlie[kept])),
        engaged_b_count=int(eng_b.sum()),
        engaged_c_count=int(eng_c.sum()),
        fired_b_count=int(fired_b.sum()),
        fired_c_count=int(fired_c.sum()),
    )
    return record, sift(record)
