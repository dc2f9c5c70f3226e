"""Benchmark the integer RREF kernels: compiled extension vs pure Python.

Run from the repository root after an editable install:

    python3 benchmarks/bench_rref.py

Both backends implement the same contract (see gderive._kernels), so the
results are asserted equal before timing is reported.
"""

from __future__ import annotations

import random
import time

from gderive._kernels import BACKEND, rref_py

try:
    from gderive._kernels import _rref_c
except ImportError:
    _rref_c = None

SIZES = [(20, 30), (40, 60), (60, 90), (80, 120), (120, 180)]
ENTRY_RANGE = 9
REPEATS = 3
SEED = 1729


def make_matrix(rng, rows, cols):
    return [[rng.randint(-ENTRY_RANGE, ENTRY_RANGE) for _ in range(cols)]
            for _ in range(rows)]


def best_time(fn, rows):
    best = float("inf")
    result = None
    for _ in range(REPEATS):
        copy = [list(r) for r in rows]
        start = time.perf_counter()
        result = fn(copy)
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    print(f"active backend: {BACKEND}")
    if _rref_c is None:
        print("compiled kernel unavailable; timing pure Python only")
    rng = random.Random(SEED)
    header = f"{'shape':>10} {'python (s)':>12} {'compiled (s)':>13} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for rows, cols in SIZES:
        shape = f"{rows}x{cols}"
        matrix = make_matrix(rng, rows, cols)
        t_py, out_py = best_time(rref_py.rref_int, matrix)
        if _rref_c is None:
            print(f"{shape:>10} {t_py:>12.4f} {'-':>13} {'-':>8}")
            continue
        t_c, out_c = best_time(_rref_c.rref_int, matrix)
        assert out_py == out_c, f"backend mismatch at {shape}"
        print(f"{shape:>10} {t_py:>12.4f} {t_c:>13.4f} {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
