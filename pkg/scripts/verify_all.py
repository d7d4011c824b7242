#!/usr/bin/env python3
"""Sweep every closed-form pair against the exhaustive solver.

Runs an exhaustive sweep on the 4-node hosts and seeded random fuzz on the
8-node hosts by default; pass --samples to fuzz everything instead.

    python3 scripts/verify_all.py
    python3 scripts/verify_all.py --samples 20000 --max-cap 15 --seed 3
"""

import argparse
import sys
import time

from itertools import product
from random import Random

from numacap import closed_form_evaluator, parse_topology
from numacap.cli import run_verification

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


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-cap", type=int, default=None,
                        help="value bound (default: 5 exhaustive / 20 random)")
    parser.add_argument("--samples", type=int, default=10_000,
                        help="random vectors per 8-node pair")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--all-random", action="store_true",
                        help="fuzz the 4-node pairs too instead of sweeping")
    args = parser.parse_args()

    failures = 0
    print(f"{'pair':9} {'mode':11} {'cases':>7} {'bad':>4} {'secs':>7}")
    for pname, gname in PAIRS:
        tid, gid = parse_topology(pname), parse_topology(gname)
        fn = closed_form_evaluator(tid, gid)
        n = tid.vertex_count
        if n <= 4 and not args.all_random:
            cap = args.max_cap if args.max_cap is not None else 5
            vectors = product(range(cap + 1), repeat=n)
            mode = f"[0..{cap}]^{n}"
        else:
            cap = args.max_cap if args.max_cap is not None else 20
            rng = Random(f"{args.seed}/{pname}/{gname}")
            vectors = (
                tuple(rng.randint(0, cap) for _ in range(n))
                for _ in range(args.samples)
            )
            mode = f"{args.samples} rand"
        start = time.perf_counter()
        report = run_verification(tid, gid, vectors, fn)
        elapsed = time.perf_counter() - start
        print(f"{pname + '/' + gname:9} {mode:11} {report.cases:>7}"
              f" {report.mismatch_count:>4} {elapsed:>7.2f}")
        for caps, got, want in report.samples:
            print(f"  mismatch caps={list(caps)} formula={got} solver={want}")
        failures += report.mismatch_count
    print("all formulas agree" if failures == 0 else f"{failures} mismatches")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
