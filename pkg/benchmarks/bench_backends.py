#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy twins.

Runs each hot kernel on both backends with identical inputs, checks the
outputs still agree, and prints timings.  Requires numba (run with the
default backend).

    python benchmarks/bench_backends.py [--quick]
"""

import argparse
import time

import numpy as np

from levinehat import _kernels as K
from levinehat.core import hat_bits
from levinehat.presets import K55_PAIR
from levinehat.rng import derive_seed


def timed(fn, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench(name, np_fn, nb_fn, repeats, check=lambda a, b: a == b):
    t_np, r_np = timed(np_fn, repeats)
    nb_fn()  # compile before timing
    t_nb, r_nb = timed(nb_fn, repeats)
    assert check(r_np, r_nb), f"{name}: backends disagree"
    print(f"{name:<28} numpy {t_np * 1e3:9.2f} ms   numba {t_nb * 1e3:9.2f} ms   x{t_np / t_nb:6.1f}")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    args = parser.parse_args()
    if not K._HAVE_NUMBA:
        raise SystemExit("numba unavailable; nothing to compare")

    scale = 4 if args.quick else 1
    print(f"{'kernel':<28} {'numpy':>15}   {'numba':>16}   speedup")

    h = 6
    bits = hat_bits(h)
    seeds = [derive_seed(12345, r) for r in range(8 // scale or 1)]
    bench(
        f"hill climb (h={h}, {len(seeds)} runs)",
        lambda: [int(K._climb_np(bits, h, s)[0]) for s in seeds],
        lambda: [int(K._climb_nb(bits, h, np.uint64(s))[0]) for s in seeds],
        repeats=3,
    )

    bits3 = hat_bits(3)
    bench(
        "exhaustive search (h=3)",
        lambda: int(K._brute_force_np(bits3, 3)[0]),
        lambda: int(K._brute_force_nb(bits3, 3)[0]),
        repeats=1 if args.quick else 2,
    )

    samples = 200_000 if args.quick else 1_000_000
    kinds = np.zeros(2, dtype=np.int64)
    scalars = np.zeros(2)
    tables = np.zeros((2, 1))
    tlens = np.ones(2, dtype=np.int64)
    bench(
        f"monte carlo ({samples:,} samples)",
        lambda: K._mc_wins_np(kinds, scalars, tables, tlens, 2, samples, 99, 0),
        lambda: K._mc_wins_nb(kinds, scalars, tables, tlens, 2, samples, np.uint64(99), 0),
        repeats=3,
    )

    r = 9 if args.quick else 11
    ktable = K55_PAIR[0].to_array()
    key_np = K._scan_levels_np(r, 5, 2, ktable, True)
    bench(
        f"fractal grid ({1 << r}x{1 << r})",
        lambda: K._joint_grid_np(key_np, key_np, r),
        lambda: K._joint_grid_nb(key_np, key_np, r),
        repeats=3,
        check=np.array_equal,
    )

    res = 512 if args.quick else 2048
    bench(
        f"biased decode ({res} cells x 24 bits)",
        lambda: K._biased_bits_np(res, 0.75, 24),
        lambda: K._biased_bits_nb(res, 0.75, 24),
        repeats=3,
        check=np.array_equal,
    )


if __name__ == "__main__":
    main()
