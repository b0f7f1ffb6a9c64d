"""Compare the compiled and numpy kernel backends on representative inputs.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from qsc import condorcet as cd
from qsc import dynamics as dy
from qsc import kernels
from qsc import manipulation as mp


def cases():
    rng = np.random.default_rng(0)
    vals = rng.standard_normal(1 << 16)

    n = 8
    f, g, h = (rng.choice([-1, 1], 1 << n).astype(np.int8) for _ in range(3))
    src = cd.CondorcetSource(n)
    lo = src.partial_masks(range(4))
    hi = src.partial_masks(range(4, 8))

    rule = mp.named_rule("borda", 4, 2)
    perms = mp.all_rankings(4)
    pos = np.ascontiguousarray(mp.position_table(perms, 4), dtype=np.int32)
    span = np.ascontiguousarray(mp.span_table(perms), dtype=np.int32)
    table = rule.table()

    graph = dy.random_regular(3, 10_000, 1)
    state = rng.choice([-1, 1], 10_000).astype(np.int8)

    return {
        "wht_inplace (n=16)": lambda k: k.wht_inplace(vals.copy()),
        "triple_agree_count (n=8)": lambda k: k.triple_agree_count(f, g, h, *lo, *hi, 1),
        "manipulation_min_span (borda 4x2)":
            lambda k: k.manipulation_min_span(table, rule.m, rule.n, pos, span, 1),
        "majority_step (3-regular, 10^4)":
            lambda k: k.majority_step(graph.indptr, graph.indices, state),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    impls = kernels.implementations()
    print(f"active backend: {kernels.BACKEND}")
    names = list(impls)
    print(f"{'kernel':36s}" + "".join(f"{n:>12s}" for n in names) + "     speedup")
    for label, fn in cases().items():
        best = {}
        for name, impl in impls.items():
            number = 3
            t = min(timeit.repeat(lambda: fn(impl), number=number, repeat=args.repeat))
            best[name] = t / number
        row = f"{label:36s}" + "".join(f"{best[n] * 1e3:10.3f}ms" for n in names)
        if "cython" in best:
            row += f"  {best['numpy'] / best['cython']:9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
