#!/usr/bin/env python3
"""Benchmark the compiled sweep kernels against the pure-Python fallback.

Runs the same verification sweeps on both backends and reports wall time
and speedup.  Case streams are identical across backends, so the work
compared is the same down to the last input.

Usage:
    python benchmarks/bench_backends.py
    python benchmarks/bench_backends.py --n 5 --samples 2000000
"""

from __future__ import annotations

import argparse
import time

from cxrns import sweeps


def timed(unit: str, n: int, mode: str, samples: int, seed: int,
          force_pure: bool) -> tuple[float, int]:
    t0 = time.perf_counter()
    report = sweeps.run_verify(unit, n, mode=mode, samples=samples, seed=seed,
                               force_pure=force_pure)
    dt = time.perf_counter() - t0
    if report.failures:
        raise SystemExit(f"benchmark sweep failed: {report.to_json()}")
    return dt, report.cases


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=5, help="channel width")
    parser.add_argument("--samples", type=int, default=1_000_000,
                        help="cases for random-mode rows")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if not sweeps.compiled_available():
        print("compiled kernels not available; nothing to compare")
        return 1

    rows = [
        ("multiplier", "exhaustive"),
        ("adder", "random"),
        ("forward", "random"),
        ("roundtrip", "random"),
        ("compressor", "random"),
    ]
    print(f"n={args.n}  samples={args.samples}  seed={args.seed}")
    header = f"{'unit':<12} {'mode':<11} {'cases':>10} {'pure (s)':>10} {'compiled (s)':>13} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for unit, mode in rows:
        t_pure, cases = timed(unit, args.n, mode, args.samples, args.seed, True)
        t_comp, _ = timed(unit, args.n, mode, args.samples, args.seed, False)
        speedup = t_pure / t_comp if t_comp > 0 else float("inf")
        print(f"{unit:<12} {mode:<11} {cases:>10} {t_pure:>10.3f} {t_comp:>13.3f} {speedup:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
