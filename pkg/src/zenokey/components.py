"""Optical elements as fixed specializations of the state primitives.

Phase conventions (pinned by the test suite):
  * beamsplitter: transmission 1/sqrt(2) real, reflection i/sqrt(2).
    With this choice, identical arm returns interfere destructively at
    exit port 1 and constructively at exit port 2.
  * polarizing beamsplitter and end mirrors: phase +1.
  * rotator: R(theta) sends H -> cos(theta) H + sin(theta) V and
    V -> -sin(theta) H + cos(theta) V.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .state import Detector, Mode, PhotonState, Polarization

BS_MATRIX = np.array(
    [
        [1.0 / np.sqrt(2.0), 1j / np.sqrt(2.0)],
        [1j / np.sqrt(2.0), 1.0 / np.sqrt(2.0)],
    ],
    dtype=np.complex128,
)

_POL_SWAP = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def beamsplitter(state: PhotonState, port1: Mode, port2: Mode) -> PhotonState:
    """50/50 beamsplitter on two spatial modes, per polarization."""
    return state.apply_two_mode_unitary(port1, port2, BS_MATRIX)


def polarization_rotator(state: PhotonState, mode: Mode, theta: float) -> PhotonState:
    return state.apply_pol_unitary(mode, rotation_matrix(theta))


def pbs(state: PhotonState, in_mode: Mode, h_out: Mode, v_out: Mode) -> PhotonState:
    """Polarizing beamsplitter: H routed to h_out, V routed to v_out.

    Implemented as polarization-wise mode exchange, which is unitary for
    occupied destinations and makes the same call serve the return pass.
    Routing a polarization to its own mode (h_out or v_out equal to
    in_mode) is the identity on that polarization, matching a PBS sitting
    inline on one rail.
    """
    if h_out == v_out:
        raise ValueError("pbs outputs must be distinct modes")
    amps = state.amps
    if h_out != in_mode:
        amps[in_mode, Polarization.H], amps[h_out, Polarization.H] = (
            amps[h_out, Polarization.H],
            amps[in_mode, Polarization.H],
        )
    if v_out != in_mode:
        amps[in_mode, Polarization.V], amps[v_out, Polarization.V] = (
            amps[v_out, Polarization.V],
            amps[in_mode, Polarization.V],
        )
    return state


def pockels_cell(state: PhotonState, mode: Mode, on: bool) -> PhotonState:
    """Switchable polarization flipper: H <-> V at the mode when on."""
    if on:
        state.apply_pol_unitary(mode, _POL_SWAP)
    return state


def mirror(state: PhotonState, mode: Mode) -> PhotonState:
    """End mirror, reflection phase +1: the identity on amplitudes."""
    return state


def circulator_route(port: Mode) -> Detector:
    """Map an exit port to the detector the circulator feeds."""
    if port == Mode.EXIT_1:
        return Detector.D1
    if port == Mode.EXIT_2:
        return Detector.D2
    raise ValueError(f"circulator routes only exit ports, got {port!r}")


@dataclass(frozen=True)
class SwitchSchedule:
    """Per-cycle on/off plan for every switchable element.

    Purely declarative: the engine derives its loop structure from
    (outer_cycles, inner_cycles, blocked) and this object records the
    equivalent hardware timing for inspection and tests.  SM entries are
    indexed by cycle boundary (one more entry than cycles); an SM is
    open (True) only when the photon enters or leaves its loop.
    """

    outer_cycles: int
    inner_cycles: int
    spr1_fires: tuple[bool, ...]
    sm1_open: tuple[bool, ...]
    spr2_fires: tuple[tuple[bool, ...], ...]
    sm2_open: tuple[tuple[bool, ...], ...]
    pc_on: tuple[tuple[bool, ...], ...]

    @classmethod
    def from_cycles(cls, m: int, n: int, blocked: bool) -> "SwitchSchedule":
        if m < 1 or n < 1:
            raise ValueError("cycle counts must be >= 1")
        gate = (True,) + (False,) * (n - 1) + (True,)
        return cls(
            outer_cycles=m,
            inner_cycles=n,
            spr1_fires=(True,) * m,
            sm1_open=(True,) + (False,) * (m - 1) + (True,),
            spr2_fires=((True,) * n,) * m,
            sm2_open=(gate,) * m,
            pc_on=((blocked,) * n,) * m,
        )
