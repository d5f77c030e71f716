#!/usr/bin/env python3
"""Compare the compiled and pure-Python kernel backends.

Times the two hot paths at a few system sizes: expanding products of
random monomial pairs, and building the sector blocks of the all-to-all
Heisenberg coupling. Run from the repository root:

    python benchmarks/bench_backends.py
    python benchmarks/bench_backends.py --sizes 20 60 100 --pairs 200
"""

import argparse
import time

import numpy as np

from symsim import enumerate_monomials, heisenberg_operator, set_backend
from symsim._backend import pair_product
from symsim.schur_blocks import _f_block_cached, block_operator


def time_pair_products(n, pairs, rng):
    # left factors are 2-local (the regular-representation workload for a
    # few-body Hamiltonian); right factors are arbitrary basis monomials.
    mons = enumerate_monomials(n)
    local = [m for m in mons if n - m[0] <= 2]
    picks = [
        (tuple(local[int(a)]), tuple(mons[int(b)]))
        for a, b in zip(
            rng.integers(0, len(local), size=pairs),
            rng.integers(0, len(mons), size=pairs),
        )
    ]
    start = time.perf_counter()
    for i, j in picks:
        pair_product(i, j)
    return time.perf_counter() - start


def time_heisenberg_blocks(n):
    _f_block_cached.cache_clear()
    h = heisenberg_operator(n)
    start = time.perf_counter()
    block_operator(h)
    return time.perf_counter() - start


def time_full_structure_tensor(n):
    from symsim import StructureTensor

    start = time.perf_counter()
    StructureTensor.build(n)
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[10, 30, 60, 100])
    parser.add_argument("--pairs", type=int, default=100,
                        help="random monomial pairs per size")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    set_backend("numba")
    # warm up the JIT so compile time is not measured
    pair_product((1, 1, 0, 0), (1, 1, 0, 0))
    _f_block_cached.cache_clear()
    block_operator(heisenberg_operator(4))

    header = f"{'task':<28}{'n':>5}{'python [s]':>14}{'numba [s]':>14}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for n in args.sizes:
        rng_a = np.random.default_rng(args.seed)
        rng_b = np.random.default_rng(args.seed)
        set_backend("python")
        t_py = time_pair_products(n, args.pairs, rng_a)
        set_backend("numba")
        t_nb = time_pair_products(n, args.pairs, rng_b)
        print(f"{'pair products':<28}{n:>5}{t_py:>14.4f}{t_nb:>14.4f}{t_py / t_nb:>9.1f}x")

        set_backend("python")
        t_py = time_heisenberg_blocks(n)
        set_backend("numba")
        t_nb = time_heisenberg_blocks(n)
        print(f"{'Heisenberg sector blocks':<28}{n:>5}{t_py:>14.4f}{t_nb:>14.4f}{t_py / t_nb:>9.1f}x")

    for n in [s for s in (4, 6, 8) if s <= max(args.sizes)]:
        # all C(n+3,3)^2 basis pairs: the regular-representation workload
        set_backend("python")
        t_py = time_full_structure_tensor(n)
        set_backend("numba")
        t_nb = time_full_structure_tensor(n)
        print(f"{'full structure tensor':<28}{n:>5}{t_py:>14.4f}{t_nb:>14.4f}{t_py / t_nb:>9.1f}x")
    set_backend("auto")


if __name__ == "__main__":
    main()
