"""Throughput comparison: compiled scan kernel vs pure numpy fallback.

Two workloads:
  scan    the dominance scan alone, on pre-built similarity matrices
  score   normalize + BLAS matmul + scan, the per-(language, layer) unit
          of a real sweep

Usage: python benchmarks/bench_kernels.py [--sizes 100,300,1000] [--reps 200]
"""

import argparse
import time

import numpy as np

from pivotalign._kernels import BACKEND, pure

try:
    from pivotalign._kernels import _scan
except ImportError:
    _scan = None


def timed(func, args_list, reps):
    best = float("inf")
    for _ in range(3):
        start = time.perf_counter()
        for index in range(reps):
            func(args_list[index % len(args_list)])
        best = min(best, (time.perf_counter() - start) / reps)
    return best


def run(sizes, reps):
    rng = np.random.default_rng(0)
    print(f"selected backend: {BACKEND}")
    header = f"{'workload':<10} {'n':>6} {'pure':>12} {'compiled':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        matrices = [rng.uniform(-1, 1, size=(n, n)) for _ in range(4)]
        pure_time = timed(pure.dominant_diagonal_count, matrices, reps)
        if _scan is not None:
            compiled_time = timed(_scan.dominant_diagonal_count, matrices, reps)
            ratio = f"{pure_time / compiled_time:8.1f}x"
            compiled_text = f"{compiled_time * 1e6:10.1f}us"
        else:
            ratio, compiled_text = "     n/a", "   not built"
        print(f"{'scan':<10} {n:>6} {pure_time * 1e6:10.1f}us {compiled_text} {ratio}")

    dim = 64
    for n in sizes:
        pairs = [
            (rng.normal(size=(n, dim)), rng.normal(size=(n, dim))) for _ in range(4)
        ]

        def score(pair, count):
            a, b = pair
            a = a / np.linalg.norm(a, axis=1, keepdims=True)
            b = b / np.linalg.norm(b, axis=1, keepdims=True)
            return count(a @ b.T)

        pure_time = timed(lambda p: score(p, pure.dominant_diagonal_count), pairs, reps)
        if _scan is not None:
            compiled_time = timed(
                lambda p: score(p, _scan.dominant_diagonal_count), pairs, reps
            )
            ratio = f"{pure_time / compiled_time:8.1f}x"
            compiled_text = f"{compiled_time * 1e6:10.1f}us"
        else:
            ratio, compiled_text = "     n/a", "   not built"
        print(f"{'score':<10} {n:>6} {pure_time * 1e6:10.1f}us {compiled_text} {ratio}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="100,300,1000",
                        help="comma-separated matrix sizes")
    parser.add_argument("--reps", type=int, default=200)
    args = parser.parse_args()
    run([int(s) for s in args.sizes.split(",")], args.reps)
