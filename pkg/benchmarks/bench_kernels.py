"""Timing comparison between the compiled search kernel and the pure
Python fallback on identical workloads.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import time

try:
    from znrank import _kernel as compiled
except ImportError:
    compiled = None
from znrank import _kernel_py as pure


def build_instance(n, max_cands, width, seed):
    rng = random.Random(seed)
    root = 0
    cands = []
    factors = []
    for u in range(n):
        if u == root:
            cands.append([])
            factors.append([])
            continue
        cs = sorted(rng.sample([v for v in range(n) if v != u], min(max_cands, n - 1)))
        cands.append(cs)
        factors.append([tuple(rng.randint(-9, 9) for _ in range(width)) for _ in cs])
    return n, root, cands, factors


def best_of(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    cases = [
        ("enumerate n=8 deg4", "enumerate_parents", build_instance(8, 4, 1, "a")[:3]),
        ("enumerate n=9 deg4", "enumerate_parents", build_instance(9, 4, 1, "b")[:3]),
        ("sum w=1 n=9 deg4", "sum_tree_products", build_instance(9, 4, 1, "c") + (1,)),
        ("sum w=2 n=9 deg4", "sum_tree_products", build_instance(9, 4, 2, "d") + (2,)),
        ("sum w=2 n=10 deg5", "sum_tree_products", build_instance(10, 5, 2, "e") + (2,)),
    ]
    print(f"{'case':<22} {'pure (ms)':>10} {'compiled (ms)':>14} {'speedup':>8}")
    for name, fn_name, fn_args in cases:
        t_pure, out_pure = best_of(getattr(pure, fn_name), fn_args, args.repeat)
        if compiled is None:
            print(f"{name:<22} {t_pure * 1e3:>10.2f} {'n/a':>14} {'n/a':>8}")
            continue
        t_comp, out_comp = best_of(getattr(compiled, fn_name), fn_args, args.repeat)
        assert out_pure == out_comp, f"kernel mismatch on {name}"
        print(f"{name:<22} {t_pure * 1e3:>10.2f} {t_comp * 1e3:>14.2f} {t_pure / t_comp:>7.1f}x")
    if compiled is None:
        print("compiled kernel not built; showing the fallback only")


if __name__ == "__main__":
    main()
