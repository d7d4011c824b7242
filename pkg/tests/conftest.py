"""Shared helpers for the test suite."""

from __future__ import annotations

import random

import numacap as nc

# closed-form pairs grouped by host size; used by sweep-style tests
SMALL_PAIRS = [("c4", "k2"), ("k4", "k2"), ("k4", "k3")]
LARGE_PAIRS = [("cq3", "k2"), ("cq3", "c4"), ("q33", "k2"), ("q33", "c4"), ("l4", "k2")]

# vertex swap 1<->7, 2<->8, 3<->5, 4<->6 preserves the cross-linked ladder
CQ3_SWAP = {1: 7, 7: 1, 2: 8, 8: 2, 3: 5, 5: 3, 4: 6, 6: 4}


def apply_vertex_map(perm: dict[int, int], caps) -> tuple[int, ...]:
    """Reindex a capacity vector by a vertex permutation (1-based)."""
    out = [0] * len(caps)
    for src, dst in perm.items():
        out[dst - 1] = caps[src - 1]
    return tuple(out)


def all_vectors(length: int, max_cap: int):
    """Yield every capacity vector in [0..max_cap]^length."""
    def rec(prefix):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for v in range(max_cap + 1):
            prefix.append(v)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([])


def bounded_sum_vectors(length: int, max_total: int):
    """Yield every vector of the given length with sum(v) <= max_total."""
    def rec(prefix, left):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for v in range(left + 1):
            prefix.append(v)
            yield from rec(prefix, left - v)
            prefix.pop()

    yield from rec([], max_total)


def random_vectors(seed: str, count: int, length: int, max_cap: int):
    rng = random.Random(seed)
    return [tuple(rng.randint(0, max_cap) for _ in range(length)) for _ in range(count)]


def closed_form(pname: str, gname: str):
    """Resolve the closed-form evaluator for a topology pair, or fail loudly."""
    fn = nc.closed_form_evaluator(nc.parse_topology(pname), nc.parse_topology(gname))
    assert fn is not None, f"no closed form registered for {pname}/{gname}"
    return fn
