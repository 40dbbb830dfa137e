"""zenokey: exact amplitude-level simulator of three-party
counterfactual key distribution built on chained-Zeno interferometer
boxes, with Monte Carlo sessions, key sifting, counterfactuality audits
and cycle-count sweeps."""

__version__ = "0.1.0"

from .components import (
    SwitchSchedule,
    beamsplitter,
    circulator_route,
    mirror,
    pbs,
    pockels_cell,
    polarization_rotator,
    rotation_matrix,
)
from .protocol import (
    Action,
    AuditReport,
    BitEncoding,
    OutcomeDistribution,
    Party,
    RoundOutcome,
    SweepRow,
    action_for,
    audit_counterfactuality,
    round_distribution,
    sweep_cycles,
)
from .session import (
    ProtocolConfig,
    SessionRecord,
    SiftedKeys,
    TamperKind,
    TamperModel,
    run_round,
    run_session,
    sift,
)
from .state import (
    Arm,
    Detector,
    Mode,
    PhotonState,
    Polarization,
    new_state,
)
from .zeno import (
    CqzeConfig,
    CqzeTransfer,
    IdealLimit,
    cqze_evolve,
    cqze_transfer,
    ideal_limit_check,
    monitored_transfer,
    probed_transfer,
)

__all__ = [
    "__version__",
    "Action",
    "Arm",
    "AuditReport",
    "BitEncoding",
    "CqzeConfig",
    "CqzeTransfer",
    "Detector",
    "IdealLimit",
    "Mode",
    "OutcomeDistribution",
    "Party",
    "PhotonState",
    "Polarization",
    "ProtocolConfig",
    "RoundOutcome",
    "SessionRecord",
    "SiftedKeys",
    "SweepRow",
    "SwitchSchedule",
    "TamperKind",
    "TamperModel",
    "action_for",
    "audit_counterfactuality",
    "beamsplitter",
    "circulator_route",
    "cqze_evolve",
    "cqze_transfer",
    "ideal_limit_check",
    "mirror",
    "monitored_transfer",
    "new_state",
    "pbs",
    "pockels_cell",
    "polarization_rotator",
    "probed_transfer",
    "rotation_matrix",
    "round_distribution",
    "run_round",
    "run_session",
    "sift",
    "sweep_cycles",
]
