"""Three-party round evolution and exact outcome distributions.

A round: Alice's H photon is split over arm B (Bob) and arm C
(Charlie), each arm runs its chained-Zeno box with the channel blocked
or passed according to that party's bit, the returns recombine on the
same beamsplitter, and the circulator routes the exits to D1/D2.  Bits
that differ produce identical arm actions, hence identical return
amplitudes, hence exact cancellation at exit port 1: D1 can only fire
when the bits agree, which is what makes D1 rounds key material.

Everything in this module is exact amplitude arithmetic; Monte Carlo
sampling lives in the session module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .components import beamsplitter, circulator_route, mirror, pockels_cell
from .state import Arm, Detector, Mode, PhotonState, Polarization, new_state
from .zeno import (
    ChannelHook,
    CqzeConfig,
    cqze_evolve,
    cqze_transfer,
    ideal_limit_check,
    monitored_transfer,
    probed_transfer,
)

ZERO_TOL = 1e-9

_SWAP = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)


class Party(Enum):
    BOB = "bob"
    CHARLIE = "charlie"


class Action(Enum):
    PASS = "pass"
    BLOCK = "block"


PARTY_ARM = {Party.BOB: Arm.B, Party.CHARLIE: Arm.C}


def action_for(party: Party, bit: int) -> Action:
    """Bit-to-action convention: Bob passes on 0, Charlie passes on 1."""
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    if party is Party.BOB:
        return Action.PASS if bit == 0 else Action.BLOCK
    return Action.PASS if bit == 1 else Action.BLOCK


@dataclass(frozen=True)
class BitEncoding:
    party: Party
    bit: int

    @property
    def action(self) -> Action:
        return action_for(self.party, self.bit)


@dataclass(frozen=True)
class RoundOutcome:
    """Sampled terminal event of one round."""

    terminal: Detector
    polarization: Polarization | None = None
    fired_b: bool = False
    fired_c: bool = False


# The eight terminal cells of one round, polarization-resolved at the
# exit detectors.  Sampling atoms extend each cell with the two
# probe-fired flags.
TERMINAL_CELLS: tuple[tuple[Detector, Polarization | None], ...] = (
    (Detector.D1, Polarization.H),
    (Detector.D1, Polarization.V),
    (Detector.D2, Polarization.H),
    (Detector.D2, Polarization.V),
    (Detector.D3_B, None),
    (Detector.D3_C, None),
    (Detector.D4_B, None),
    (Detector.D4_C, None),
)

TERMINAL_DETECTORS = (
    Detector.D1,
    Detector.D2,
    Detector.D3_B,
    Detector.D3_C,
    Detector.D4_B,
    Detector.D4_C,
)


@dataclass(frozen=True)
class OutcomeDistribution:
    """Exact terminal probabilities for one bit pair."""

    probabilities: dict[Detector, float]
    exit_polarization: dict[Detector, tuple[float, float]]

    def __getitem__(self, detector: Detector) -> float:
        return self.probabilities[detector]

    def total(self) -> float:
        return float(sum(self.probabilities.values()))


def _evolve_round(
    action_b: Action,
    action_c: Action,
    m: int,
    n: int,
    *,
    flip_b: bool = False,
    flip_c: bool = False,
    hook_b: ChannelHook | None = None,
    hook_c: ChannelHook | None = None,
) -> PhotonState:
    """Full interferometric round, returning the pre-detection state.

    Exit-port amplitudes are left in place (not yet absorbed) so callers
    can read polarization-resolved detection probabilities.
    """
    state = new_state(Mode.SOURCE, Polarization.H)
    # The source port is the beamsplitter input on the B rail.
    state.apply_two_mode_unitary(Mode.SOURCE, Mode.ARM_OUTER_B, _SWAP)
    beamsplitter(state, Mode.ARM_OUTER_B, Mode.ARM_OUTER_C)
    cqze_evolve(state, CqzeConfig(m, n, action_b is Action.BLOCK, Arm.B), hook_b)
    cqze_evolve(state, CqzeConfig(m, n, action_c is Action.BLOCK, Arm.C), hook_c)
    if flip_b:
        pockels_cell(state, Mode.ARM_OUTER_B, True)
    if flip_c:
        pockels_cell(state, Mode.ARM_OUTER_C, True)
    mirror(state, Mode.ARM_OUTER_B)
    mirror(state, Mode.ARM_OUTER_C)
    beamsplitter(state, Mode.ARM_OUTER_B, Mode.ARM_OUTER_C)
    state.apply_two_mode_unitary(Mode.ARM_OUTER_B, Mode.EXIT_1, _SWAP)
    state.apply_two_mode_unitary(Mode.ARM_OUTER_C, Mode.EXIT_2, _SWAP)
    return state


def round_distribution(
    bob_bit: int, charlie_bit: int, m: int, n: int
) -> OutcomeDistribution:
    """Exact outcome distribution for one bit pair at cycle counts M, N."""
    action_b = action_for(Party.BOB, bob_bit)
    action_c = action_for(Party.CHARLIE, charlie_bit)
    state = _evolve_round(action_b, action_c, m, n)
    probs: dict[Detector, float] = {}
    exit_pol: dict[Detector, tuple[float, float]] = {}
    for port in (Mode.EXIT_1, Mode.EXIT_2):
        det = circulator_route(port)
        ph = abs(state.amplitude(port, Polarization.H)) ** 2
        pv = abs(state.amplitude(port, Polarization.V)) ** 2
        probs[det] = ph + pv
        exit_pol[det] = (ph, pv)
    for det in (Detector.D3_B, Detector.D3_C, Detector.D4_B, Detector.D4_C):
        probs[det] = float(state.ledger[det])
    return OutcomeDistribution(probabilities=probs, exit_polarization=exit_pol)


def outcome_atoms(
    m: int,
    n: int,
    action_b: Action,
    action_c: Action,
    *,
    probed_b: bool = False,
    probed_c: bool = False,
    flip_b: bool = False,
    flip_c: bool = False,
) -> np.ndarray:
    """Exact joint masses over (terminal cell, fired_b, fired_c).

    Compositional counterpart of _evolve_round built from per-arm
    transfers: the never-fired arm returns combine coherently through
    the Michelson algebra (exit1 = (beta - gamma)/2, exit2 =
    i(beta + gamma)/2 per polarization, for unit-input transfers), while
    probe-fired branches have lost the other arm entirely and split
    their released mass evenly over the two exits.  Returns an (8, 2, 2)
    array indexed by TERMINAL_CELLS and the two fired flags; both-fired
    masses are structurally zero (a single photon cannot be found in
    both channels).
    """
    if (probed_b and flip_b) or (probed_c and flip_c):
        raise ValueError("an arm cannot be probed and flipped in the same round")

    def arm_parts(blocked: bool, probed: bool, flipped: bool):
        if probed:
            pt = probed_transfer(m, n, blocked)
            beta = np.array([pt.survivor_h, pt.survivor_v], dtype=np.complex128)
            fired = np.array(
                [pt.fired_h, pt.fired_v, pt.fired_d3, pt.fired_d4], dtype=np.float64
            )
            ledger = np.zeros(2)
        else:
            tr = cqze_transfer(CqzeConfig(m, n, blocked))
            beta = np.array([tr.a_h, tr.a_v], dtype=np.complex128)
            fired = np.zeros(4)
            ledger = np.array([tr.p_d3, tr.p_d4])
        if flipped:
            beta = beta[::-1].copy()
            fired = fired[[1, 0, 2, 3]]
        return beta, fired, ledger

    beta, fired_b_vec, ledger_b = arm_parts(action_b is Action.BLOCK, probed_b, flip_b)
    gamma, fired_c_vec, ledger_c = arm_parts(action_c is Action.BLOCK, probed_c, flip_c)

    masses = np.zeros((8, 2, 2), dtype=np.float64)
    exit1 = (beta - gamma) / 2.0
    exit2 = 1j * (beta + gamma) / 2.0
    masses[0, 0, 0] = abs(exit1[0]) ** 2
    masses[1, 0, 0] = abs(exit1[1]) ** 2
    masses[2, 0, 0] = abs(exit2[0]) ** 2
    masses[3, 0, 0] = abs(exit2[1]) ** 2
    masses[4, 0, 0] = ledger_b[0] / 2.0
    masses[5, 0, 0] = ledger_c[0] / 2.0
    masses[6, 0, 0] = ledger_b[1] / 2.0
    masses[7, 0, 0] = ledger_c[1] / 2.0
    # Fired branches: arm factor 1/2, released amplitude split 50/50
    # over the exits by the recombining beamsplitter.
    masses[0, 1, 0] += fired_b_vec[0] / 4.0
    masses[1, 1, 0] += fired_b_vec[1] / 4.0
    masses[2, 1, 0] += fired_b_vec[0] / 4.0
    masses[3, 1, 0] += fired_b_vec[1] / 4.0
    masses[4, 1, 0] += fired_b_vec[2] / 2.0
    masses[6, 1, 0] += fired_b_vec[3] / 2.0
    masses[0, 0, 1] += fired_c_vec[0] / 4.0
    masses[1, 0, 1] += fired_c_vec[1] / 4.0
    masses[2, 0, 1] += fired_c_vec[0] / 4.0
    masses[3, 0, 1] += fired_c_vec[1] / 4.0
    masses[5, 0, 1] += fired_c_vec[2] / 2.0
    masses[7, 0, 1] += fired_c_vec[3] / 2.0
    return masses


@dataclass(frozen=True)
class HardCheck:
    """One asserted zero-probability entry of the audit."""

    bob_bit: int
    charlie_bit: int
    arm: Arm
    quantity: str
    value: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.value <= self.bound


@dataclass(frozen=True)
class ProbeRow:
    """Non-assertive disturbance metric: probe in one channel."""

    probed_arm: Arm
    bob_bit: int
    charlie_bit: int
    p_fired: float
    p_fired_and_click: float
    p_click_unprobed: float
    p_click_probed: float


@dataclass(frozen=True)
class MonitorRow:
    """Non-assertive study: absorbing monitor parked in one channel."""

    arm: Arm
    action: Action
    captured: float
    survival: float
    p_d3: float
    p_d4: float


@dataclass(frozen=True)
class AuditReport:
    m: int
    n: int
    bound: float
    hard_checks: list[HardCheck] = field(default_factory=list)
    probe_rows: list[ProbeRow] = field(default_factory=list)
    monitor_rows: list[MonitorRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.hard_checks)


def audit_counterfactuality(m: int, n: int) -> AuditReport:
    """Check that no detected photon can have traversed a channel.

    Hard (asserted) part: for every bit pair, a blocked arm never feeds
    D3 and a passing arm never feeds D4, and no amplitude remains on a
    channel mode at release.  Soft part, reported but not asserted: the
    disturbance a presence probe in one channel causes (joint frequency
    of probe firing together with a D1/D2 click) and what an always-on
    absorbing monitor would capture.
    """
    report_checks: list[HardCheck] = []
    probe_rows: list[ProbeRow] = []
    for bob_bit in (0, 1):
        for charlie_bit in (0, 1):
            action_b = action_for(Party.BOB, bob_bit)
            action_c = action_for(Party.CHARLIE, charlie_bit)
            dist = round_distribution(bob_bit, charlie_bit, m, n)
            for arm, action in ((Arm.B, action_b), (Arm.C, action_c)):
                d3 = Detector.D3_B if arm is Arm.B else Detector.D3_C
                d4 = Detector.D4_B if arm is Arm.B else Detector.D4_C
                det = d3 if action is Action.BLOCK else d4
                report_checks.append(
                    HardCheck(
                        bob_bit,
                        charlie_bit,
                        arm,
                        f"P({det.label}) with channel {action.value}ed",
                        dist[det],
                        ZERO_TOL,
                    )
                )
            state = _evolve_round(action_b, action_c, m, n)
            for channel in (Mode.CHANNEL_B, Mode.CHANNEL_C):
                arm = Arm.B if channel is Mode.CHANNEL_B else Arm.C
                report_checks.append(
                    HardCheck(
                        bob_bit,
                        charlie_bit,
                        arm,
                        "channel amplitude at release",
                        state.mode_probability(channel),
                        ZERO_TOL,
                    )
                )
            p_click_plain = dist[Detector.D1] + dist[Detector.D2]
            for probed_arm in (Arm.B, Arm.C):
                masses = outcome_atoms(
                    m,
                    n,
                    action_b,
                    action_c,
                    probed_b=probed_arm is Arm.B,
                    probed_c=probed_arm is Arm.C,
                )
                fired_axis = 1 if probed_arm is Arm.B else 2
                fired = masses.sum(axis=(0, 3 - fired_axis))[1]
                fired_click = masses[:4].sum(axis=0).sum(axis=2 - fired_axis)[1]
                p_click_probed = masses[:4].sum()
                probe_rows.append(
                    ProbeRow(
                        probed_arm,
                        bob_bit,
                        charlie_bit,
                        float(fired),
                        float(fired_click),
                        float(p_click_plain),
                        float(p_click_probed),
                    )
                )
    monitor_rows = [
        MonitorRow(
            arm,
            action,
            mt.captured,
            abs(mt.a_h) ** 2 + abs(mt.a_v) ** 2,
            mt.p_d3,
            mt.p_d4,
        )
        for arm in (Arm.B, Arm.C)
        for action in (Action.PASS, Action.BLOCK)
        for mt in (
            monitored_transfer(CqzeConfig(m, n, action is Action.BLOCK, arm)),
        )
    ]
    return AuditReport(
        m=m,
        n=n,
        bound=ZERO_TOL,
        hard_checks=report_checks,
        probe_rows=probe_rows,
        monitor_rows=monitor_rows,
    )


@dataclass(frozen=True)
class SweepRow:
    """One M = N = K grid point of the cycle sweep."""

    k: int
    survival_blocked: float
    survival_unblocked: float
    survival_mean: float
    fidelity_to_v: float
    fidelity_to_h: float
    p_d1_agree: float
    p_d2_agree: float
    d1_d2_ratio: float | None
    kept_fraction: float


def sweep_cycles(k_list: list[int]) -> list[SweepRow]:
    """Survivals, fidelities and agree-case statistics at M = N = K."""
    rows = []
    for k in k_list:
        if k < 1:
            raise ValueError("sweep cycle counts must be >= 1")
        limit = ideal_limit_check(k)
        agree0 = round_distribution(0, 0, k, k)
        agree1 = round_distribution(1, 1, k, k)
        p_d1 = agree0[Detector.D1]
        p_d2 = agree0[Detector.D2]
        ratio = p_d1 / p_d2 if p_d2 > 0.0 else None
        kept = (agree0[Detector.D1] + agree1[Detector.D1]) / 4.0
        rows.append(
            SweepRow(
                k=k,
                survival_blocked=limit.survival_blocked,
                survival_unblocked=limit.survival_unblocked,
                survival_mean=(limit.survival_blocked + limit.survival_unblocked) / 2.0,
                fidelity_to_v=limit.fidelity_to_v,
                fidelity_to_h=limit.fidelity_to_h,
                p_d1_agree=p_d1,
                p_d2_agree=p_d2,
                d1_d2_ratio=ratio,
                kept_fraction=kept,
            )
        )
    return rows
