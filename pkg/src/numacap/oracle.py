"""Exact reference solver for small instances.

The solver enumerates every embedding of the guest shape in the host
graph and searches over how many times each one is used, subject to
per-node capacities.  It is deliberately brute force: the closed-form
evaluators are tested against it, never the other way around.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Optional, Sequence

from .errors import ScaleLimitError
from .topology import Graph, check_capacities, enumerate_embeddings

MAX_ORACLE_VERTICES = 8
MAX_ORACLE_TOTAL_CAPACITY = 200
MAX_EXPANSION_COPIES = 12


@dataclass(frozen=True)
class OracleSolution:
    """Optimal count plus one witness assignment.

    multiplicities holds (embedding_index, times_used) pairs, indices into
    enumerate_embeddings(host, guest) order, nonzero entries only.
    """

    count: int
    multiplicities: tuple[tuple[int, int], ...]


@lru_cache(maxsize=256)
def independence_number(graph: Graph) -> int:
    """Largest set of pairwise non-adjacent vertices (brute force)."""
    best = 1
    verts = list(graph.vertices())
    for size in range(2, graph.vertex_count + 1):
        found = False
        for sub in combinations(verts, size):
            if all(not graph.has_edge(u, v) for u, v in combinations(sub, 2)):
                found = True
                break
        if found:
            best = size
        else:
            break
    return best


@lru_cache(maxsize=256)
def maximal_independent_sets(graph: Graph) -> tuple[frozenset[int], ...]:
    """All maximal independent vertex sets (hosts here have <= 12 vertices)."""
    verts = list(graph.vertices())
    independent = []
    for size in range(1, graph.vertex_count + 1):
        for sub in combinations(verts, size):
            if all(not graph.has_edge(u, v) for u, v in combinations(sub, 2)):
                independent.append(frozenset(sub))
    return tuple(
        s
        for s in independent
        if not any(s < other for other in independent)
    )


def oracle_vmcap(
    host: Graph,
    guest: Graph,
    capacities: Sequence[int],
    memoize: bool = True,
    cache: Optional[dict] = None,
) -> OracleSolution:
    """Maximum simultaneous embeddings of guest into host under capacities.

    Branches on each embedding's multiplicity from high to low and
    memoizes subproblems keyed on the residual capacities of vertices
    still touched by the remaining embeddings.  Nodes are pruned with
    counting bounds: floor(residual sum / |V(guest)|), plus one bound per
    maximal independent set I of the host, since a guest copy can occupy
    at most independence_number(guest) vertices of I and therefore uses
    at least |V(guest)| - that many vertices outside I.

    Passing a dict as `cache` reuses the memo across calls for the same
    (host, guest) pair; entries are independent of the starting
    capacities, so sweeps share most of the work.  With memoize=False a
    plain recursion with only the base bound runs instead (slow; meant
    for cross-checking the memoized search on tiny inputs).
    """
    caps = check_capacities(capacities, host.vertex_count)
    if host.vertex_count > MAX_ORACLE_VERTICES:
        raise ScaleLimitError(
            f"oracle supports hosts up to {MAX_ORACLE_VERTICES} vertices"
        )
    total = sum(caps)
    if total > MAX_ORACLE_TOTAL_CAPACITY:
        raise ScaleLimitError(
            f"oracle supports total capacity up to {MAX_ORACLE_TOTAL_CAPACITY},"
            f" got {total}"
        )

    statics = _pair_statics(host, guest)
    m = len(statics.embeddings)
    verts = statics.verts
    solve = _make_solver(statics, memoize, cache)

    start = tuple(caps)
    count = solve(0, start)

    # replay the search to extract one witness assignment
    mults = []
    residual = start
    remaining = count
    for idx in range(m):
        if remaining == 0:
            break
        vs = verts[idx]
        tmax = min(residual[v] for v in vs)
        for t in range(min(tmax, remaining), -1, -1):
            work = list(residual)
            for v in vs:
                work[v] -= t
            nxt = tuple(work)
            if t + solve(idx + 1, nxt) == remaining:
                if t:
                    mults.append((idx, t))
                residual = nxt
                remaining -= t
                break
    assert remaining == 0
    return OracleSolution(count=count, multiplicities=tuple(mults))


@dataclass(frozen=True)
class _PairStatics:
    """Capacity-independent search structures for one (host, guest) pair."""

    embeddings: tuple[tuple[int, ...], ...]
    verts: tuple[tuple[int, ...], ...]  # 0-based copies of embeddings
    alive: tuple[tuple[int, ...], ...]  # vertices appearing in verts[i:]
    bound_terms: tuple  # per index: ((vertex tuple, divisor), ...)
    k: int
    spare: int  # vertices a copy must take outside any host independent set


@lru_cache(maxsize=256)
def _pair_statics(host: Graph, guest: Graph) -> _PairStatics:
    embeddings = enumerate_embeddings(host, guest)
    m = len(embeddings)
    k = guest.vertex_count
    verts = tuple(tuple(v - 1 for v in emb) for emb in embeddings)
    alive: list[tuple[int, ...]] = [()] * (m + 1)
    seen: set[int] = set()
    for i in range(m - 1, -1, -1):
        seen.update(verts[i])
        alive[i] = tuple(sorted(seen))
    spare = k - independence_number(guest)
    complements = []
    if spare >= 1:
        for ind in maximal_independent_sets(host):
            complements.append(
                tuple(v - 1 for v in host.vertices() if v not in ind)
            )
    bound_terms = []
    for idx in range(m + 1):
        keep = set(alive[idx])
        terms = [(alive[idx], k)]
        for comp in complements:
            cut = tuple(v for v in comp if v in keep)
            if len(cut) < len(alive[idx]):
                terms.append((cut, spare))
        bound_terms.append(tuple(terms))
    return _PairStatics(
        embeddings=embeddings,
        verts=verts,
        alive=tuple(alive),
        bound_terms=tuple(bound_terms),
        k=k,
        spare=spare,
    )


def _make_solver(statics: _PairStatics, memoize: bool, cache: Optional[dict]):
    verts = statics.verts
    alive = statics.alive
    bound_terms = statics.bound_terms
    m = len(verts)
    k = statics.k
    spare = statics.spare

    if not memoize:

        def solve_plain(idx: int, residual: tuple[int, ...]) -> int:
            if idx == m:
                return 0
            bound = sum(residual) // k
            if bound == 0:
                return 0
            vs = verts[idx]
            tmax = min(residual[v] for v in vs)
            if tmax == 0:
                return solve_plain(idx + 1, residual)
            work = list(residual)
            for v in vs:
                work[v] -= tmax
            best = 0
            t = tmax
            while True:
                val = t + solve_plain(idx + 1, tuple(work))
                if val > best:
                    best = val
                    if best >= bound:
                        break
                if t == 0:
                    break
                t -= 1
                for v in vs:
                    work[v] += 1
            return best

        return solve_plain

    # with spare >= 2 a copy still needs spare - 1 outside vertices besides
    # any one fixed vertex, which is what rules out lopsided sides
    deep = spare >= 2
    memo = cache if cache is not None else {}

    def node_bound(idx: int, residual: tuple[int, ...]) -> int:
        best = -1
        for vs, div in bound_terms[idx]:
            s = 0
            for v in vs:
                s += residual[v]
            cur = s // div
            if best < 0 or cur < best:
                best = cur
                if best == 0:
                    return 0
            if deep and div == spare:
                for v in vs:
                    cur = (s - residual[v]) // (spare - 1)
                    if cur < best:
                        best = cur
                if best == 0:
                    return 0
        return best

    def solve(idx: int, residual: tuple[int, ...]) -> int:
        if idx == m:
            return 0
        # pack the alive residuals into one int: entries stay under 256
        # because total capacity is capped at 200; the nonzero idx+1
        # prefix byte keeps keys of different lengths distinct
        key = idx + 1
        for v in alive[idx]:
            key = (key << 8) | residual[v]
        hit = memo.get(key)
        if hit is not None:
            return hit
        bound = node_bound(idx, residual)
        if bound == 0:
            memo[key] = 0
            return 0
        vs = verts[idx]
        tmax = residual[vs[0]]
        for v in vs[1:]:
            if residual[v] < tmax:
                tmax = residual[v]
        if tmax == 0:
            best = solve(idx + 1, residual)
            memo[key] = best
            return best
        work = list(residual)
        for v in vs:
            work[v] -= tmax
        best = 0
        t = tmax
        while True:
            child = tuple(work)
            if t + node_bound(idx + 1, child) > best:
                val = t + solve(idx + 1, child)
                if val > best:
                    best = val
                    if best >= bound:
                        break
            if t == 0:
                break
            t -= 1
            for v in vs:
                work[v] += 1
        memo[key] = best
        return best

    return solve


def expand_to_simple_matching(
    graph: Graph, capacities: Sequence[int]
) -> Graph:
    """Clone each vertex capacity-many times for a plain matching check.

    Copies of adjacent vertices are fully interconnected, copies of the
    same vertex are not, so a maximum matching of the result equals the
    capacitated pair count on the original graph.  Copy labels run in
    original vertex order: vertex i owns labels sum(b[:i-1])+1 .. sum(b[:i]).
    """
    caps = check_capacities(capacities, graph.vertex_count)
    total = sum(caps)
    if total > MAX_EXPANSION_COPIES:
        raise ScaleLimitError(
            f"matching expansion supports at most {MAX_EXPANSION_COPIES}"
            f" copies, got {total}"
        )
    if total == 0:
        raise ScaleLimitError("expansion of an all-zero vector has no vertices")
    offsets = [0] * (graph.vertex_count + 1)
    for v in graph.vertices():
        offsets[v] = offsets[v - 1] + caps[v - 1]
    edges = set()
    for u, v in graph.edges:
        for cu in range(offsets[u - 1] + 1, offsets[u] + 1):
            for cv in range(offsets[v - 1] + 1, offsets[v] + 1):
                edges.add((cu, cv) if cu < cv else (cv, cu))
    return Graph(total, frozenset(edges), name=f"expanded({graph.name})")


def maximum_matching_size(graph: Graph) -> int:
    """Brute-force maximum cardinality matching via bitmask recursion."""
    n = graph.vertex_count
    adj = [0] * (n + 1)
    for u, v in graph.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    memo: dict[int, int] = {}

    def go(avail: int) -> int:
        if avail == 0:
            return 0
        hit = memo.get(avail)
        if hit is not None:
            return hit
        low = avail & -avail
        v = low.bit_length() - 1
        rest = avail ^ low
        best = go(rest)  # leave v unmatched
        nbrs = adj[v] & rest
        while nbrs:
            ul = nbrs & -nbrs
            r = 1 + go(rest ^ ul)
            if r > best:
                best = r
            nbrs ^= ul
        memo[avail] = best
        return best

    full = 0
    for v in graph.vertices():
        full |= 1 << v
    return go(full)
