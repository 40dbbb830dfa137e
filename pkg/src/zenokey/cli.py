"""Command-line surface: dist, run, sweep, audit.

Exit codes: 0 success (and audit assertions passed), 1 audit assertion
failure, 2 usage or malformed configuration, 3 output I/O failure.
Numbers are serialized with Python's shortest round-trip repr, so every
emitted float parses back to the exact same double.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .protocol import (
    AuditReport,
    SweepRow,
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
    run_session,
)

ENV_OUT_DIR = "ZENOKEY_OUT_DIR"

EXIT_OK = 0
EXIT_AUDIT_FAIL = 1
EXIT_USAGE = 2
EXIT_IO = 3

SUMMARY_SCHEMA_VERSION = 1

_CONFIG_KEYS = {
    "m",
    "n",
    "rounds",
    "seed",
    "tamper_b",
    "tamper_c",
    "format",
    "out",
    "record_polarization",
}


class UsageError(ValueError):
    """Bad arguments or configuration; maps to exit code 2.

    Subclasses ValueError so argparse type callables that raise it are
    reported as usage errors too.
    """


def parse_tamper(text: str) -> TamperModel:
    """Parse KIND or KIND:PROB, e.g. presence_probe:0.25."""
    kind_text, sep, prob_text = text.partition(":")
    try:
        kind = TamperKind(kind_text.strip())
    except ValueError:
        valid = ", ".join(k.value for k in TamperKind)
        raise UsageError(f"unknown tamper kind {kind_text!r} (use one of {valid})")
    prob = 1.0
    if sep:
        try:
            prob = float(prob_text)
        except ValueError:
            raise UsageError(f"bad tamper probability {prob_text!r}")
    try:
        return TamperModel(kind=kind, probability=prob)
    except ValueError as exc:
        raise UsageError(str(exc))


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"expected a boolean, got {text!r}")


def read_config_file(path: str) -> dict[str, str]:
    """Flat key = value lines; # starts a comment; unknown keys rejected."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}")
    options: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        options[key] = value.strip()
    return options


def _merged(args: argparse.Namespace, key: str, fallback, convert):
    """Flag value if given, else config-file value, else fallback."""
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    filed = args.file_options.get(key)
    if filed is not None:
        return convert(filed)
    return fallback


def _require_cycles(m: int, n: int) -> None:
    if m < 1 or n < 1:
        raise UsageError("cycle counts --m and --n must be >= 1")


def _fmt(value: float) -> str:
    return repr(float(value))


def _json_dumps(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def cmd_dist(args: argparse.Namespace) -> int:
    _require_cycles(args.m, args.n)
    dist = round_distribution(args.bob, args.charlie, args.m, args.n)
    if args.format == "json":
        payload = {
            "schema_version": SUMMARY_SCHEMA_VERSION,
            "m": args.m,
            "n": args.n,
            "bob_bit": args.bob,
            "charlie_bit": args.charlie,
            "probabilities": {d.label: p for d, p in dist.probabilities.items()},
            "exit_polarization": {
                d.label: {"H": hv[0], "V": hv[1]}
                for d, hv in dist.exit_polarization.items()
            },
            "total": dist.total(),
        }
        sys.stdout.write(_json_dumps(payload))
    else:
        lines = ["terminal,probability"]
        lines += [f"{d.label},{_fmt(p)}" for d, p in dist.probabilities.items()]
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def _session_config(args: argparse.Namespace) -> ProtocolConfig:
    m = _merged(args, "m", 2, int)
    n = _merged(args, "n", 2, int)
    rounds = _merged(args, "rounds", 10000, int)
    seed = _merged(args, "seed", 0, int)
    tamper_b = _merged(args, "tamper_b", TamperModel(), parse_tamper)
    tamper_c = _merged(args, "tamper_c", TamperModel(), parse_tamper)
    record_pol = _merged(args, "record_polarization", False, _parse_bool)
    _require_cycles(m, n)
    try:
        return ProtocolConfig(
            m=m,
            n=n,
            rounds=rounds,
            seed=seed,
            tamper_b=tamper_b,
            tamper_c=tamper_c,
            record_polarization=record_pol,
        )
    except ValueError as exc:
        raise UsageError(str(exc))


def _tamper_text(model: TamperModel) -> str:
    if model.kind is TamperKind.NONE:
        return "none"
    return f"{model.kind.value}:{_fmt(model.probability)}"


def _config_echo(config: ProtocolConfig) -> dict:
    return {
        "m": config.m,
        "n": config.n,
        "rounds": config.rounds,
        "seed": config.seed,
        "tamper_b": _tamper_text(config.tamper_b),
        "tamper_c": _tamper_text(config.tamper_c),
        "record_polarization": config.record_polarization,
    }


def _summary_payload(record: SessionRecord, keys: SiftedKeys) -> dict:
    payload = {
        "schema_version": SUMMARY_SCHEMA_VERSION,
        "config": _config_echo(record.config),
        "rounds": record.rounds,
        "terminal_counts": record.counts,
        "kept_count": record.kept_count,
        "kept_fraction": record.kept_fraction,
        "key_length": len(keys),
        "mismatches": record.mismatches,
        "qber": record.qber,
        "tamper_engaged_b": record.engaged_b_count,
        "tamper_engaged_c": record.engaged_c_count,
        "probe_fired_b": record.fired_b_count,
        "probe_fired_c": record.fired_c_count,
    }
    if record.config.record_polarization:
        payload["exit_polarization_counts"] = record.exit_polarization_counts()
    return payload


def cmd_run(args: argparse.Namespace) -> int:
    config = _session_config(args)
    out_value = _merged(args, "out", None, str)
    out_dir = Path(out_value or os.environ.get(ENV_OUT_DIR) or ".")
    record, keys = run_session(config)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        outputs: dict[str, Path] = {
            "rounds.csv": out_dir / "rounds.csv",
            "summary.json": out_dir / "summary.json",
            "key_bob.txt": out_dir / "key_bob.txt",
            "key_charlie.txt": out_dir / "key_charlie.txt",
        }
        with open(outputs["rounds.csv"], "w", newline="\n") as fh:
            fh.write("round,bob_bit,charlie_bit,outcome,kept\n")
            for i, bb, cb, label, kept in record.iter_rounds():
                fh.write(f"{i},{bb},{cb},{label},{kept}\n")
        outputs["summary.json"].write_text(_json_dumps(_summary_payload(record, keys)))
        outputs["key_bob.txt"].write_text(keys.bob_key + "\n")
        outputs["key_charlie.txt"].write_text(keys.charlie_key + "\n")
        manifest = {
            "schema_version": SUMMARY_SCHEMA_VERSION,
            "tool": "zenokey",
            "version": __version__,
            "created_utc": datetime.now(timezone.utc).isoformat(),
            "config": _config_echo(config),
            "outputs": {
                name: {
                    "sha256": hashlib.sha256(path.read_bytes()).hexdigest(),
                    "bytes": path.stat().st_size,
                }
                for name, path in outputs.items()
            },
        }
        (out_dir / "manifest.json").write_text(_json_dumps(manifest))
    except OSError as exc:
        print(f"zenokey run: cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_IO
    print(
        f"rounds={record.rounds} kept={record.kept_count} "
        f"qber={_fmt(record.qber)} out={out_dir}"
    )
    return EXIT_OK


_SWEEP_COLUMNS = (
    "k",
    "survival_blocked",
    "survival_unblocked",
    "survival_mean",
    "fidelity_to_v",
    "fidelity_to_h",
    "p_d1_agree",
    "p_d2_agree",
    "d1_d2_ratio",
    "kept_fraction",
)


def _sweep_cell(row: SweepRow, column: str) -> str:
    value = getattr(row, column)
    if column == "k":
        return str(value)
    if value is None:
        return "nan"
    return _fmt(value)


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        ks = [int(part) for part in args.k.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"--k expects a comma-separated integer list, got {args.k!r}")
    if not ks:
        raise UsageError("--k list is empty")
    if min(ks) < 1:
        raise UsageError("sweep cycle counts must be >= 1")
    rows = sweep_cycles(ks)
    if args.format == "json":
        payload = {
            "schema_version": SUMMARY_SCHEMA_VERSION,
            "rows": [
                {col: getattr(row, col) for col in _SWEEP_COLUMNS} for row in rows
            ],
        }
        sys.stdout.write(_json_dumps(payload))
    else:
        lines = [",".join(_SWEEP_COLUMNS)]
        lines += [
            ",".join(_sweep_cell(row, col) for col in _SWEEP_COLUMNS) for row in rows
        ]
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def _audit_payload(report: AuditReport) -> dict:
    return {
        "schema_version": SUMMARY_SCHEMA_VERSION,
        "m": report.m,
        "n": report.n,
        "bound": report.bound,
        "passed": report.passed,
        "hard_checks": [
            {
                "bob_bit": c.bob_bit,
                "charlie_bit": c.charlie_bit,
                "arm": c.arm.value,
                "quantity": c.quantity,
                "value": c.value,
                "passed": c.passed,
            }
            for c in report.hard_checks
        ],
        "probe_disturbance": {
            "assertive": False,
            "rows": [
                {
                    "probed_arm": r.probed_arm.value,
                    "bob_bit": r.bob_bit,
                    "charlie_bit": r.charlie_bit,
                    "p_fired": r.p_fired,
                    "p_fired_and_click": r.p_fired_and_click,
                    "p_click_unprobed": r.p_click_unprobed,
                    "p_click_probed": r.p_click_probed,
                }
                for r in report.probe_rows
            ],
        },
        "absorbing_monitor": {
            "assertive": False,
            "rows": [
                {
                    "arm": r.arm.value,
                    "action": r.action.value,
                    "captured": r.captured,
                    "survival": r.survival,
                    "p_d3": r.p_d3,
                    "p_d4": r.p_d4,
                }
                for r in report.monitor_rows
            ],
        },
    }


def _audit_csv(report: AuditReport) -> str:
    lines = ["section,arm,bob_bit,charlie_bit,quantity,value,status"]
    for c in report.hard_checks:
        status = "PASS" if c.passed else "FAIL"
        lines.append(
            f"hard,{c.arm.value},{c.bob_bit},{c.charlie_bit},"
            f"{c.quantity},{_fmt(c.value)},{status}"
        )
    for r in report.probe_rows:
        for quantity in (
            "p_fired",
            "p_fired_and_click",
            "p_click_unprobed",
            "p_click_probed",
        ):
            lines.append(
                f"probe_disturbance,{r.probed_arm.value},{r.bob_bit},{r.charlie_bit},"
                f"{quantity},{_fmt(getattr(r, quantity))},non-assertive"
            )
    for r in report.monitor_rows:
        for quantity in ("captured", "survival", "p_d3", "p_d4"):
            lines.append(
                f"absorbing_monitor,{r.arm.value},,,"
                f"{r.action.value} {quantity},{_fmt(getattr(r, quantity))},non-assertive"
            )
    return "\n".join(lines) + "\n"


def cmd_audit(args: argparse.Namespace) -> int:
    _require_cycles(args.m, args.n)
    report = audit_counterfactuality(args.m, args.n)
    if args.format == "json":
        sys.stdout.write(_json_dumps(_audit_payload(report)))
    else:
        sys.stdout.write(_audit_csv(report))
    verdict = "passed" if report.passed else "FAILED"
    print(f"audit {verdict}: {len(report.hard_checks)} hard checks", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_AUDIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zenokey",
        description="Exact simulator of counterfactual key distribution "
        "through chained-Zeno interferometer boxes.",
    )
    parser.add_argument("--version", action="version", version=f"zenokey {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p_dist = sub.add_parser(
        "dist", help="exact outcome distribution for one bit pair"
    )
    p_dist.add_argument("--bob", type=int, choices=(0, 1), required=True)
    p_dist.add_argument("--charlie", type=int, choices=(0, 1), required=True)
    p_dist.add_argument("--m", type=int, default=2, help="outer cycle count")
    p_dist.add_argument("--n", type=int, default=2, help="inner cycle count")
    add_format(p_dist)
    p_dist.set_defaults(func=cmd_dist)

    p_run = sub.add_parser("run", help="Monte Carlo session with sifted keys")
    p_run.add_argument("--m", type=int, help="outer cycle count (default 2)")
    p_run.add_argument("--n", type=int, help="inner cycle count (default 2)")
    p_run.add_argument("--rounds", type=int, help="number of rounds (default 10000)")
    p_run.add_argument("--seed", type=int, help="session seed (default 0)")
    p_run.add_argument(
        "--tamper-b",
        dest="tamper_b",
        type=parse_tamper,
        help="KIND[:PROB] on Bob's channel",
    )
    p_run.add_argument(
        "--tamper-c",
        dest="tamper_c",
        type=parse_tamper,
        help="KIND[:PROB] on Charlie's channel",
    )
    p_run.add_argument(
        "--record-polarization",
        dest="record_polarization",
        action="store_const",
        const=True,
        default=None,
        help="tally exit-port polarization diagnostics",
    )
    p_run.add_argument(
        "--out",
        help=f"output directory (default ${ENV_OUT_DIR} or current directory)",
    )
    p_run.add_argument("--config", help="key = value config file; flags win")
    add_format(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="cycle-count sweep at M = N = K")
    p_sweep.add_argument("--k", required=True, help="comma-separated K list")
    add_format(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_audit = sub.add_parser("audit", help="counterfactuality audit report")
    p_audit.add_argument("--m", type=int, default=2)
    p_audit.add_argument("--n", type=int, default=2)
    add_format(p_audit)
    p_audit.set_defaults(func=cmd_audit)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.file_options = {}
    config_path = getattr(args, "config", None)
    try:
        if config_path:
            args.file_options = read_config_file(config_path)
        return args.func(args)
    except ValueError as exc:
        print(f"zenokey {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
