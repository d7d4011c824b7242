#!/usr/bin/env python3
"""Time every closed-form evaluator against the exhaustive solver.

    python3 scripts/bench_formulas.py
    python3 scripts/bench_formulas.py --iters 2000000 --max-cap 50
"""

import argparse
import time

from random import Random

from numacap import closed_form_evaluator, expand_topology, parse_topology
from numacap.oracle import oracle_vmcap

PAIRS = [
    ("c4", "k2"),
    ("k4", "k2"),
    ("k4", "k3"),
    ("l4", "k2"),
    ("cq3", "k2"),
    ("cq3", "c4"),
    ("q33", "k2"),
    ("q33", "c4"),
]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--iters", type=int, default=1_000_000)
    parser.add_argument("--max-cap", type=int, default=30)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    print(f"{'pair':9} {'formula evals/s':>16} {'solver evals/s':>15} {'speedup':>9}")
    for pname, gname in PAIRS:
        tid, gid = parse_topology(pname), parse_topology(gname)
        fn = closed_form_evaluator(tid, gid)
        n = tid.vertex_count
        rng = Random(f"{args.seed}/{pname}/{gname}")
        pool = [
            tuple(rng.randint(0, args.max_cap) for _ in range(n))
            for _ in range(256)
        ]

        start = time.perf_counter()
        i = 0
        for _ in range(args.iters):
            fn(pool[i & 255])
            i += 1
        formula_rate = args.iters / (time.perf_counter() - start)

        host, guest = expand_topology(tid), expand_topology(gid)
        solver_iters = max(1, args.iters // 2000)
        start = time.perf_counter()
        i = 0
        for _ in range(solver_iters):
            oracle_vmcap(host, guest, pool[i & 255])
            i += 1
        solver_rate = solver_iters / (time.perf_counter() - start)

        print(f"{pname + '/' + gname:9} {formula_rate:>16,.0f}"
              f" {solver_rate:>15,.0f} {formula_rate / solver_rate:>8.0f}x")


if __name__ == "__main__":
    main()
