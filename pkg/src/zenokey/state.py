"""Single-photon amplitude bookkeeping over labeled optical modes.

The state of one photon is a complex amplitude for every
(mode, polarization) pair plus a loss ledger: real probability that has
been absorbed by each detector.  Unitaries move amplitude around,
absorptions move squared amplitude into the ledger, and the invariant

    sum |amplitude|^2  +  sum ledger  =  1   (within 1e-12)

holds after every operation.  Only the single-photon subspace is
modeled; there are no vacuum or multi-photon terms.
"""

from __future__ import annotations

from enum import Enum, IntEnum

import numpy as np

UNITARY_TOL = 1e-12


class Polarization(IntEnum):
    H = 0
    V = 1


class Mode(IntEnum):
    """Spatial mode labels of the two-arm interferometer."""

    SOURCE = 0
    ARM_OUTER_B = 1
    ARM_INNER_B = 2
    CHANNEL_B = 3
    ARM_OUTER_C = 4
    ARM_INNER_C = 5
    CHANNEL_C = 6
    EXIT_1 = 7
    EXIT_2 = 8


class Detector(IntEnum):
    """Absorbing elements that terminate amplitude.

    The probe entries are instrumentation hooks; their ledger slots stay
    zero unless a tamper or audit study is active.
    """

    D1 = 0
    D2 = 1
    D3_B = 2
    D3_C = 3
    D4_B = 4
    D4_C = 5
    PROBE_B = 6
    PROBE_C = 7

    @property
    def label(self) -> str:
        return self.name


class Arm(str, Enum):
    B = "B"
    C = "C"


N_MODES = len(Mode)
N_DETECTORS = len(Detector)

_X_FLIP = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)


def _check_unitary(matrix: np.ndarray) -> np.ndarray:
    u = np.asarray(matrix, dtype=np.complex128)
    if u.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {u.shape}")
    dev = np.abs(u.conj().T @ u - np.eye(2)).max()
    if dev > UNITARY_TOL:
        raise ValueError(f"matrix is not unitary (max deviation {dev:.3e})")
    return u


class PhotonState:
    """Amplitudes over (mode, polarization) plus the detector loss ledger.

    Operations mutate the state in place and return it, so call sites can
    chain or ignore the return value.  Use :meth:`copy` for value
    semantics.
    """

    __slots__ = ("amps", "ledger")

    def __init__(self) -> None:
        self.amps = np.zeros((N_MODES, 2), dtype=np.complex128)
        self.ledger = np.zeros(N_DETECTORS, dtype=np.float64)

    def copy(self) -> "PhotonState":
        out = PhotonState.__new__(PhotonState)
        out.amps = self.amps.copy()
        out.ledger = self.ledger.copy()
        return out

    def amplitude(self, mode: Mode, pol: Polarization) -> complex:
        return complex(self.amps[mode, pol])

    def total_probability(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2) + self.ledger.sum())

    def mode_probability(self, mode: Mode) -> float:
        return float(np.sum(np.abs(self.amps[mode]) ** 2))

    def apply_two_mode_unitary(
        self, mode_a: Mode, mode_b: Mode, matrix: np.ndarray
    ) -> "PhotonState":
        """Mix amplitudes at two modes, independently per polarization."""
        u = _check_unitary(matrix)
        if mode_a == mode_b:
            raise ValueError("two-mode unitary needs two distinct modes")
        pair = self.amps[[mode_a, mode_b], :]
        self.amps[[mode_a, mode_b], :] = u @ pair
        return self

    def apply_pol_unitary(self, mode: Mode, matrix: np.ndarray) -> "PhotonState":
        """Mix the H and V amplitudes at a single mode."""
        u = _check_unitary(matrix)
        self.amps[mode, :] = u @ self.amps[mode, :]
        return self

    def absorb(
        self,
        mode: Mode,
        detector: Detector,
        pol: Polarization | None = None,
    ) -> "PhotonState":
        """Move |amplitude|^2 at a mode (optionally one polarization)
        into the ledger entry of a detector and zero the amplitudes."""
        if pol is None:
            self.ledger[detector] += np.sum(np.abs(self.amps[mode]) ** 2)
            self.amps[mode, :] = 0.0
        else:
            self.ledger[detector] += abs(self.amps[mode, pol]) ** 2
            self.amps[mode, pol] = 0.0
        return self

    def decohere_presence(self, mode: Mode, draw: float) -> bool:
        """Measure "is the photon at this mode?" without absorbing it.

        With probability equal to the mode's amplitude weight the state
        collapses onto the mode (everything else zeroed, including the
        ledger: conditioning on presence excludes the recorded loss
        events).  Otherwise the mode is projected out and the remainder
        renormalized.  Deterministic given ``draw``; returns True when
        the photon was found present.
        """
        p = self.mode_probability(mode)
        if draw < p:
            keep = self.amps[mode].copy()
            self.amps[:] = 0.0
            self.ledger[:] = 0.0
            self.amps[mode] = keep / np.sqrt(p)
            return True
        rest = 1.0 - p
        if rest <= 0.0:
            raise ValueError("absent branch has zero probability")
        self.amps[mode, :] = 0.0
        self.amps /= np.sqrt(rest)
        self.ledger /= rest
        return False

    def __repr__(self) -> str:
        live = {
            f"{Mode(m).name}/{Polarization(p).name}": complex(self.amps[m, p])
            for m in range(N_MODES)
            for p in range(2)
            if self.amps[m, p] != 0
        }
        lost = {
            Detector(d).name: float(self.ledger[d])
            for d in range(N_DETECTORS)
            if self.ledger[d] != 0
        }
        return f"PhotonState(amps={live}, ledger={lost})"


def new_state(mode: Mode, pol: Polarization) -> PhotonState:
    """Fresh photon: unit amplitude at one (mode, polarization)."""
    state = PhotonState()
    state.amps[mode, pol] = 1.0
    return state
