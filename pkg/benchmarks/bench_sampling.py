#!/usr/bin/env python3
"""Time the compiled sampling kernel against the numpy fallback.

Both backends draw the identical round stream, so besides the timing
this doubles as a parity check: the five output arrays must match
element for element before any number is reported.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from zenokey import _sampling_py
from zenokey.session import ProtocolConfig, TamperKind, TamperModel, session_tables

try:
    from zenokey import _sampling_cy
except ImportError:
    _sampling_cy = None


def build_cases(seed: int) -> list[tuple[str, float, float, np.ndarray]]:
    plain = ProtocolConfig(m=2, n=2, rounds=1, seed=seed)
    probed = ProtocolConfig(
        m=2,
        n=2,
        rounds=1,
        seed=seed,
        tamper_c=TamperModel(TamperKind.PRESENCE_PROBE, 0.5),
    )
    return [
        ("plain", 0.0, 0.0, session_tables(plain)),
        ("probed", 0.0, 0.5, session_tables(probed)),
    ]


def best_time(fn, args, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rounds", type=int, default=1_000_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = [("python", _sampling_py.sample_rounds)]
    if _sampling_cy is not None:
        backends.insert(0, ("cython", _sampling_cy.sample_rounds))
    else:
        print("compiled kernel not built; timing the fallback only")

    for case, pb, pc, tables in build_cases(args.seed):
        call = (args.seed, args.rounds, pb, pc, tables)
        outputs = [fn(*call) for _, fn in backends]
        for other in outputs[1:]:
            for a, b in zip(outputs[0], other):
                if not np.array_equal(a, b):
                    print(f"FAIL: backends disagree on case {case!r}")
                    return 1

        print(f"case {case}: {args.rounds} rounds, best of {args.repeats}")
        times = {}
        for name, fn in backends:
            elapsed = best_time(fn, call, args.repeats)
            times[name] = elapsed
            rate = args.rounds / elapsed
            print(f"  {name:>7}: {elapsed * 1e3:8.2f} ms  ({rate / 1e6:6.1f} M rounds/s)")
        if len(times) == 2:
            print(f"  speedup: {times['python'] / times['cython']:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
