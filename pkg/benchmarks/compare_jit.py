#!/usr/bin/env python3
"""Benchmark the enumeration walk kernel: numba JIT vs interpreted numpy.

Runs the same single-shard walk (the full search tree of one dimension)
through both implementations, checks that they return identical results,
and reports timings.  The JIT pass is warmed up first so compilation
time is excluded; run with ERDOSMAT_JIT=0 to confirm the package works
without numba at all.

Usage:
    python benchmarks/compare_jit.py            # n=3, sub-second
    python benchmarks/compare_jit.py -n 3 4     # n=4 interpreted takes ~7 min
"""

import argparse
import time

from erdosmat import kernels
from erdosmat.enumeration import get_tables


def run_walk(engine: str, n: int):
    tables = get_tables(n)
    walk = kernels.get_walk(engine)
    max_support = (n - 1) ** 2 + 1
    t0 = time.perf_counter()
    stats, accepted, deferred, truncated = kernels.run_shard(
        walk,
        tables.pmats,
        tables.pos,
        tables.agree,
        [0],
        max_support,
        node_cap=1 << 60,
        acc_cap=1 << 20,
    )
    elapsed = time.perf_counter() - t0
    assert not truncated and not deferred
    return elapsed, stats, sorted(accepted)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("-n", type=int, nargs="+", default=[3],
                        help="dimensions to benchmark (default: 3)")
    parser.add_argument("--repeat", type=int, default=1,
                        help="timing repetitions, best-of (default: 1)")
    args = parser.parse_args()

    if not kernels.JIT_ENABLED:
        print("numba JIT is unavailable or disabled; benchmarking numpy path only")

    print(f"{'n':>3} {'nodes':>10} {'numpy [s]':>11} {'jit [s]':>9} {'speedup':>8}")
    for n in args.n:
        if kernels.JIT_ENABLED:
            run_walk("jit", n)  # warm up: compile before timing
        t_np = t_jit = None
        for _ in range(args.repeat):
            elapsed, stats, acc_np = run_walk("numpy", n)
            t_np = elapsed if t_np is None else min(t_np, elapsed)
        if kernels.JIT_ENABLED:
            for _ in range(args.repeat):
                elapsed, stats_jit, acc_jit = run_walk("jit", n)
                t_jit = elapsed if t_jit is None else min(t_jit, elapsed)
            assert stats_jit == stats and acc_jit == acc_np, "jit/numpy mismatch"
            print(f"{n:>3} {stats[0]:>10} {t_np:>11.3f} {t_jit:>9.3f} "
                  f"{t_np / t_jit:>7.1f}x")
        else:
            print(f"{n:>3} {stats[0]:>10} {t_np:>11.3f} {'-':>9} {'-':>8}")


if __name__ == "__main__":
    main()
