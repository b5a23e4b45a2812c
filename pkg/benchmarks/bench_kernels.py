#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import time

from placeforge._kernels import _fallback

try:
    from placeforge._kernels import _speedups
except ImportError:
    _speedups = None


def make_mul_case(rng, n, terms, p):
    def side():
        exps, coeffs, seen = [], [], set()
        while len(exps) < terms:
            e = tuple(rng.randint(0, 6) for _ in range(n))
            if e in seen:
                continue
            seen.add(e)
            exps.append(e)
            coeffs.append(rng.randint(1, p - 1) if p else rng.randint(-9, 9) or 1)
        return exps, coeffs

    ea, ca = side()
    eb, cb = side()
    return ea, ca, eb, cb, p


def make_min_case(rng, n, terms, levels):
    exps = [tuple(rng.randint(0, 6) for _ in range(n)) for _ in range(terms)]
    levs = []
    for _ in range(levels):
        arow = tuple(rng.randint(-40, 40) for _ in range(n))
        brow = tuple(rng.randint(-40, 40) for _ in range(n))
        levs.append((arow, brow, 2))
    return exps, levs


def timeit(fn, args_list, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for args in args_list:
            fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = random.Random(99)
    cases = {
        "mul_terms GF(5), n=3, 20x20 terms": (
            "mul_terms",
            [make_mul_case(rng, 3, 20, 5) for _ in range(200)],
        ),
        "mul_terms Z (for Q route), n=3, 20x20 terms": (
            "mul_terms",
            [make_mul_case(rng, 3, 20, 0) for _ in range(200)],
        ),
        "term_mins n=4, 40 terms, 1 level": (
            "term_mins",
            [make_min_case(rng, 4, 40, 1) for _ in range(500)],
        ),
        "term_mins n=4, 40 terms, 3 levels": (
            "term_mins",
            [make_min_case(rng, 4, 40, 3) for _ in range(500)],
        ),
    }

    print(f"{'case':<48} {'pure':>10} {'compiled':>10} {'speedup':>8}")
    for label, (fname, case_args) in cases.items():
        pure = timeit(getattr(_fallback, fname), case_args, args.repeat)
        if _speedups is None:
            print(f"{label:<48} {pure * 1e3:>8.1f}ms {'n/a':>10} {'n/a':>8}")
            continue
        fast = timeit(getattr(_speedups, fname), case_args, args.repeat)
        print(f"{label:<48} {pure * 1e3:>8.1f}ms {fast * 1e3:>8.1f}ms {pure / fast:>7.1f}x")

    if _speedups is None:
        print("\ncompiled kernels not built; install without PLACEFORGE_PURE=1")


if __name__ == "__main__":
    main()
