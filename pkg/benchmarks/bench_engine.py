#!/usr/bin/env python3
"""Compare the compiled evaluation kernel against the pure-Python twin.

Workload: the brute-force power scans behind the differential oracles
(the hot loop of the acceptance suite), on a fixed seeded instance set.

    python benchmarks/bench_engine.py [--count 150] [--seed 9]
"""

import argparse
import random
import time

from powsat._engine import pure
from powsat._engine.program import compile_query
from powsat.generators import gen_power_instance

try:
    from powsat._engine import _speedups
except ImportError:
    _speedups = None


def workload(count: int, seed: int):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        s, n, f, variables = gen_power_instance(rng)
        out.append((compile_query(s, f, variables), n))
    return out


def run(kernel, queries) -> tuple[float, list[int]]:
    t0 = time.perf_counter()
    ranks = [kernel.scan_power(q, n) for q, n in queries]
    return time.perf_counter() - t0, ranks


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=150)
    ap.add_argument("--seed", type=int, default=9)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    queries = workload(args.count, args.seed)
    pure_times = []
    for _ in range(args.repeat):
        t, pure_ranks = run(pure, queries)
        pure_times.append(t)
    print(f"pure     python: {min(pure_times):8.3f}s over {args.count} power scans")

    if _speedups is None:
        print("compiled kernel: not built (pip install -e . builds it)")
        return

    fast_times = []
    for _ in range(args.repeat):
        t, fast_ranks = run(_speedups, queries)
        fast_times.append(t)
    assert fast_ranks == pure_ranks, "kernels disagree"
    print(f"compiled kernel: {min(fast_times):8.3f}s over {args.count} power scans")
    print(f"speedup:         {min(pure_times) / min(fast_times):8.1f}x (identical results)")


if __name__ == "__main__":
    main()
