"""The chained-Zeno interferometer box.

One box sits in each arm.  Per outer cycle a small rotation feeds a V
component into an inner interferometer; per inner cycle another small
rotation feeds an H component toward the examined channel.  A blocked
channel absorbs that component every inner cycle (into D4), freezing
the inner state at V; an open channel returns it coherently, letting
the inner rotation run to completion so the whole inner excursion is
swallowed by D3 at the inner exit.  The net effect on the photon that
survives: blocked channels steer H toward V, open channels leave H
alone, and the photon never has to be found in the channel itself.

Angles are theta_outer = pi/(2M) and theta_inner = pi/(2N) so the
uninterrupted rotations total a quarter turn.  All evolution here is
exact amplitude arithmetic on PhotonState; nothing is sampled.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .components import (
    SwitchSchedule,
    mirror,
    pbs,
    pockels_cell,
    polarization_rotator,
)
from .state import Arm, Detector, Mode, PhotonState, Polarization, new_state

ARM_OUTER = {Arm.B: Mode.ARM_OUTER_B, Arm.C: Mode.ARM_OUTER_C}
ARM_INNER = {Arm.B: Mode.ARM_INNER_B, Arm.C: Mode.ARM_INNER_C}
ARM_CHANNEL = {Arm.B: Mode.CHANNEL_B, Arm.C: Mode.CHANNEL_C}
ARM_D3 = {Arm.B: Detector.D3_B, Arm.C: Detector.D3_C}
ARM_D4 = {Arm.B: Detector.D4_B, Arm.C: Detector.D4_C}
ARM_PROBE = {Arm.B: Detector.PROBE_B, Arm.C: Detector.PROBE_C}

ChannelHook = Callable[[PhotonState, int], None]


@dataclass(frozen=True)
class CqzeConfig:
    """Box parameters: cycle counts, channel action, which arm."""

    m: int
    n: int
    blocked: bool
    arm: Arm = Arm.B

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ValueError("cycle counts M and N must be >= 1")

    @property
    def theta_outer(self) -> float:
        return np.pi / (2.0 * self.m)

    @property
    def theta_inner(self) -> float:
        return np.pi / (2.0 * self.n)

    def schedule(self) -> SwitchSchedule:
        return SwitchSchedule.from_cycles(self.m, self.n, self.blocked)


@dataclass(frozen=True)
class CqzeTransfer:
    """Input -> output map of one box for a unit H input."""

    a_h: complex
    a_v: complex
    p_d3: float
    p_d4: float

    @property
    def survival(self) -> float:
        return abs(self.a_h) ** 2 + abs(self.a_v) ** 2

    @property
    def total(self) -> float:
        return self.survival + self.p_d3 + self.p_d4


def _passage_head(state: PhotonState, cfg: CqzeConfig) -> None:
    # SPR2 pulse, then PBS2 passes the new H component into the channel.
    polarization_rotator(state, ARM_INNER[cfg.arm], cfg.theta_inner)
    pbs(state, ARM_INNER[cfg.arm], ARM_CHANNEL[cfg.arm], ARM_INNER[cfg.arm])


def _passage_tail(state: PhotonState, cfg: CqzeConfig) -> None:
    channel = ARM_CHANNEL[cfg.arm]
    if cfg.blocked:
        # Pockels cell flips the polarization, diverting everything in
        # the channel into the guard detector.
        pockels_cell(state, channel, True)
        state.absorb(channel, ARM_D4[cfg.arm])
    else:
        mirror(state, channel)
        pbs(state, ARM_INNER[cfg.arm], channel, ARM_INNER[cfg.arm])


def _enter_outer(state: PhotonState, cfg: CqzeConfig) -> None:
    # SPR1 pulse, then PBS1 reflects the V component into the inner loop.
    polarization_rotator(state, ARM_OUTER[cfg.arm], cfg.theta_outer)
    pbs(state, ARM_OUTER[cfg.arm], ARM_OUTER[cfg.arm], ARM_INNER[cfg.arm])


def _exit_inner(state: PhotonState, cfg: CqzeConfig) -> None:
    # Inner exit: any H is lost to D3, the V survivor rejoins the outer loop.
    state.absorb(ARM_INNER[cfg.arm], ARM_D3[cfg.arm], pol=Polarization.H)
    pbs(state, ARM_OUTER[cfg.arm], ARM_OUTER[cfg.arm], ARM_INNER[cfg.arm])


def _run_schedule(
    state: PhotonState,
    cfg: CqzeConfig,
    hook: ChannelHook | None = None,
    resume_passage: int | None = None,
) -> PhotonState:
    """Drive the box schedule, optionally resuming mid-way.

    ``hook`` runs at every channel passage (index t = outer*N + inner)
    while amplitude sits in the channel mode, before the block-or-return
    step.  ``resume_passage`` enters at the post-hook point of passage t,
    which is where a collapse onto the channel hands back control.
    """
    first = 0
    if resume_passage is not None:
        mi0, ni0 = divmod(resume_passage, cfg.n)
        _passage_tail(state, cfg)
        for ni in range(ni0 + 1, cfg.n):
            _passage_head(state, cfg)
            if hook is not None:
                hook(state, mi0 * cfg.n + ni)
            _passage_tail(state, cfg)
        _exit_inner(state, cfg)
        first = mi0 + 1
    for mi in range(first, cfg.m):
        _enter_outer(state, cfg)
        for ni in range(cfg.n):
            _passage_head(state, cfg)
            if hook is not None:
                hook(state, mi * cfg.n + ni)
            _passage_tail(state, cfg)
        _exit_inner(state, cfg)
    return state


def cqze_evolve(
    state: PhotonState, config: CqzeConfig, channel_hook: ChannelHook | None = None
) -> PhotonState:
    """Run one arm's box in place on a (possibly superposed) state.

    Amplitude on the arm's outer mode is transformed exactly as
    cqze_transfer dictates; other modes are untouched.  The optional
    channel hook is instrumentation for audit studies.
    """
    return _run_schedule(state, config, hook=channel_hook)


def cqze_transfer(config: CqzeConfig) -> CqzeTransfer:
    """Exact box output for a unit H input on the configured arm."""
    state = new_state(ARM_OUTER[config.arm], Polarization.H)
    cqze_evolve(state, config)
    outer = ARM_OUTER[config.arm]
    return CqzeTransfer(
        a_h=state.amplitude(outer, Polarization.H),
        a_v=state.amplitude(outer, Polarization.V),
        p_d3=float(state.ledger[ARM_D3[config.arm]]),
        p_d4=float(state.ledger[ARM_D4[config.arm]]),
    )


class IdealLimit(NamedTuple):
    survival_blocked: float
    survival_unblocked: float
    fidelity_to_v: float
    fidelity_to_h: float


def ideal_limit_check(k: int) -> IdealLimit:
    """Survivals and survivor fidelities at M = N = k.

    fidelity_to_v is the blocked survivor's V weight after
    normalization, fidelity_to_h the unblocked survivor's H weight.
    Degenerate k = 1 (survival zero) reports fidelity 0.
    """
    blocked = cqze_transfer(CqzeConfig(m=k, n=k, blocked=True))
    open_ = cqze_transfer(CqzeConfig(m=k, n=k, blocked=False))
    s_b, s_u = blocked.survival, open_.survival
    fid_v = abs(blocked.a_v) ** 2 / s_b if s_b > 0.0 else 0.0
    fid_h = abs(open_.a_h) ** 2 / s_u if s_u > 0.0 else 0.0
    return IdealLimit(s_b, s_u, fid_v, fid_h)


@dataclass(frozen=True)
class ProbedTransfer:
    """Box behavior with a presence probe interrogating every passage.

    The survivor amplitudes describe the coherent never-detected branch
    (the probe projected the channel out at each passage).  The fired_*
    fields are incoherent probability masses from branches where the
    probe found the photon in the channel at least once, classified by
    where that probability ends up: released as H or V on the arm, or
    absorbed at D3/D4.  Collapse branches never re-interfere, so masses
    are sufficient; no cross terms exist.
    """

    survivor_h: complex
    survivor_v: complex
    fired_h: float
    fired_v: float
    fired_d3: float
    fired_d4: float

    @property
    def fired_total(self) -> float:
        return self.fired_h + self.fired_v + self.fired_d3 + self.fired_d4

    @property
    def total(self) -> float:
        return abs(self.survivor_h) ** 2 + abs(self.survivor_v) ** 2 + self.fired_total


def probed_transfer(m: int, n: int, blocked: bool) -> ProbedTransfer:
    """Exact probed-box summary for a unit H input.

    Works backwards through the channel passages: F[t] is the final
    outcome-mass vector (H, V, D3, D4) of a photon collapsed onto the
    channel at passage t with all later passages still probed.  Because
    a collapse erases everything except the channel, F[t] depends only
    on t, and each computation is one resumed schedule run that projects
    the channel at later passages, paying out |amplitude|^2 * F[t'] as
    it goes.  The never-collapsed spine works the same way from the real
    input.  Total cost O((M N)^2) passage steps.
    """
    cfg = CqzeConfig(m=m, n=n, blocked=blocked)
    arm = cfg.arm
    outer, channel = ARM_OUTER[arm], ARM_CHANNEL[arm]
    d3, d4 = ARM_D3[arm], ARM_D4[arm]
    passages = m * n
    table: list[np.ndarray | None] = [None] * passages

    def project_and_pay(acc: np.ndarray) -> ChannelHook:
        def hook(s: PhotonState, t: int) -> None:
            amp = s.amps[channel, Polarization.H]
            w = abs(amp) ** 2
            if w != 0.0:
                np.add(acc, w * table[t], out=acc)
                s.amps[channel, Polarization.H] = 0.0

        return hook

    for t in reversed(range(passages)):
        st = PhotonState()
        st.amps[channel, Polarization.H] = 1.0
        acc = np.zeros(4, dtype=np.float64)
        _run_schedule(st, cfg, hook=project_and_pay(acc), resume_passage=t)
        acc[0] += abs(st.amps[outer, Polarization.H]) ** 2
        acc[1] += abs(st.amps[outer, Polarization.V]) ** 2
        acc[2] += float(st.ledger[d3])
        acc[3] += float(st.ledger[d4])
        table[t] = acc

    spine = new_state(outer, Polarization.H)
    fired = np.zeros(4, dtype=np.float64)
    _run_schedule(spine, cfg, hook=project_and_pay(fired))
    return ProbedTransfer(
        survivor_h=spine.amplitude(outer, Polarization.H),
        survivor_v=spine.amplitude(outer, Polarization.V),
        fired_h=float(fired[0]),
        fired_v=float(fired[1]),
        fired_d3=float(fired[2]),
        fired_d4=float(fired[3]),
    )


@dataclass(frozen=True)
class MonitoredTransfer:
    """Box output with an always-on absorbing monitor in the channel."""

    a_h: complex
    a_v: complex
    p_d3: float
    p_d4: float
    captured: float


def monitored_transfer(config: CqzeConfig) -> MonitoredTransfer:
    """Run the box with an absorbing detector parked in the channel.

    Every passage's channel amplitude is captured into the arm's probe
    ledger slot.  On a blocked arm this intercepts exactly the mass D4
    would have taken; on an open arm the monitor destroys the return
    interference and the box behaves like the blocked one, which is the
    Zeno mechanism seen from the other side.
    """
    arm = config.arm
    probe_id = ARM_PROBE[arm]
    channel = ARM_CHANNEL[arm]

    def hook(s: PhotonState, t: int) -> None:
        s.absorb(channel, probe_id)

    state = new_state(ARM_OUTER[arm], Polarization.H)
    _run_schedule(state, config, hook=hook)
    outer = ARM_OUTER[arm]
    return MonitoredTransfer(
        a_h=state.amplitude(outer, Polarization.H),
        a_v=state.amplitude(outer, Polarization.V),
        p_d3=float(state.ledger[ARM_D3[arm]]),
        p_d4=float(state.ledger[ARM_D4[arm]]),
        captured=float(state.ledger[probe_id]),
    )
