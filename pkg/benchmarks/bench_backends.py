#!/usr/bin/env python3
"""Time the tree DP for Graph Motif under the numba and numpy backends.

Both backends must agree on every answer; the script exits non-zero if not.
The first numba call compiles (or loads cached) kernels and is excluded.
"""
import argparse
import sys
import time

from graphmotif.generators import random_abundant_tree
from graphmotif.tree_gm import solve_gm_tree


def time_solve(inst, backend, repeats):
    best = float("inf")
    res = None
    for _ in range(repeats):
        start = time.perf_counter()
        res = solve_gm_tree(inst, backend=backend)
        best = min(best, time.perf_counter() - start)
    return best, res


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 10000, 100000])
    ap.add_argument("--ell", type=int, nargs="+", default=[4, 8])
    ap.add_argument("--abundant", type=int, default=4)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    # warm up the compiled kernels
    solve_gm_tree(random_abundant_tree(50, 4, 2, colors=5, seed=0), backend="numba")

    print(f"{'n':>8} {'ell':>4} {'table':>6} {'numba_s':>9} {'numpy_s':>9} {'speedup':>8} answer")
    mismatch = 0
    for n in args.sizes:
        for ell in args.ell:
            inst = random_abundant_tree(n, ell, min(args.abundant, ell), seed=args.seed)
            t_nb, r_nb = time_solve(inst, "numba", args.repeats)
            t_np, r_np = time_solve(inst, "numpy", args.repeats)
            if r_nb.answer != r_np.answer:
                mismatch += 1
            answer = "yes" if r_nb.answer else "no"
            print(f"{n:>8} {ell:>4} {r_nb.stats['table_size']:>6} {t_nb:>9.3f} {t_np:>9.3f} "
                  f"{t_np / t_nb:>8.1f} {answer}")
    if mismatch:
        print(f"{mismatch} answer mismatches between backends", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
