#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Covers the three hot paths: the exhaustive crossing census, Monte Carlo
matching classification, and the brute-force trace-expansion counter.  Both
backends must agree exactly; the table reports wall times and speedups.

Usage: python benchmarks/bench_backends.py [--census-k 8] [--mc-k 200]
"""

import argparse
import time

import numpy as np


def _load_backends():
    from chordspec import _kernels_py

    backends = [("python", _kernels_py)]
    try:
        from chordspec import _ckernels

        backends.append(("c", _ckernels))
    except ImportError:
        print("compiled extension not available; benchmarking fallback only")
    return backends


def _time(fn, repeats=1):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--census-k", type=int, default=8)
    parser.add_argument("--mc-k", type=int, default=200)
    parser.add_argument("--mc-rows", type=int, default=20000)
    parser.add_argument("--tuple-n", type=int, default=8)
    parser.add_argument("--tuple-k", type=int, default=6)
    args = parser.parse_args()

    backends = _load_backends()
    rng = np.random.default_rng(0)
    perms = np.argsort(rng.random((args.mc_rows, 2 * args.mc_k)), axis=1).astype(np.int64)

    cases = [
        (f"census k={args.census_k}", lambda mod: mod.census_counts(args.census_k)),
        (
            f"mc classify k={args.mc_k} rows={args.mc_rows}",
            lambda mod: mod.crossing_vertex_counts(perms),
        ),
        (
            f"tuple counts N={args.tuple_n} k={args.tuple_k} (toeplitz)",
            lambda mod: mod.tuple_moment_counts(args.tuple_n, args.tuple_k, 1, 0),
        ),
    ]

    print(f"{'case':<42} " + " ".join(f"{name:>12}" for name, _ in backends) + f" {'speedup':>9}")
    for label, runner in cases:
        times = []
        results = []
        for _, mod in backends:
            elapsed, result = _time(lambda m=mod: runner(m))
            times.append(elapsed)
            results.append(result)
        if len(results) == 2:
            _assert_equal(results[0], results[1], label)
        speedup = times[0] / times[-1] if len(times) == 2 else float("nan")
        cols = " ".join(f"{t:>11.3f}s" for t in times)
        print(f"{label:<42} {cols} {speedup:>8.1f}x")
    return 0


def _assert_equal(a, b, label):
    if isinstance(a, tuple):
        for x, y in zip(a, b):
            assert np.array_equal(x, y), f"backend mismatch in {label}"
    elif isinstance(a, dict):
        assert set(a) == set(b), f"backend mismatch in {label}"
        for key in a:
            assert np.array_equal(a[key], b[key]), f"backend mismatch in {label}"
    else:
        assert np.array_equal(a, b), f"backend mismatch in {label}"


if __name__ == "__main__":
    raise SystemExit(main())
