"""Command line front end.

Capacity counts, witness placements, cluster aggregation from JSON state
files, formula-vs-solver verification sweeps, and a small benchmark:

    numacap eval --topology cq3 --vnuma k2 --caps 30,30,30,30,30,30,30,30
    numacap place --topology k4 --vnuma k2 --caps 3,2,1,0
    numacap cluster --state cluster.json --flavors flavors.json --flavor m2
    numacap verify --topology c4 --vnuma k2 --max-cap 5
    numacap verify --topology cq3 --vnuma k2 --samples 10000 --seed 7
    numacap bench --topology cq3 --vnuma k2 --iters 1000000

Capacity lists are always given in canonical label order 1..n (see the
topology module for the labelings).  Exit codes: 0 success, 1 verification
found a mismatch, 2 bad usage or bad input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from .capacity import Flavor, ServerComponent, ServerState, cluster_capacity
from .errors import NumacapError, ScaleLimitError, SchemaError, TopologyError
from .formulas import closed_form_evaluator, vmcap
from .oracle import oracle_vmcap
from .placement import Placement, place_c4_vnuma, place_k2, place_kn_kk
from .topology import TopologyId, expand_topology, parse_topology

_ORACLE_CACHE_LIMIT = 2_000_000
_EXHAUSTIVE_LIMIT = 2_000_000


def _parse_caps(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part.strip()) for part in text.split(","))
    except ValueError:
        raise SchemaError("--caps", f"expected comma-separated integers, got {text!r}")


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(path, f"cannot read file: {exc}")
    except json.JSONDecodeError as exc:
        raise SchemaError(path, f"invalid JSON: {exc}")


def load_cluster_state(path: str) -> list[ServerState]:
    """Parse a cluster state document.

    {"servers": [{"id": str, "components": [
        {"topology": str, "nodes": [{resource: int, ...}, ...]}
      or {"topology": str, "capacities": [int, ...]}, ...]}, ...]}
    """
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise SchemaError("$", "expected a JSON object")
    servers = doc.get("servers")
    if not isinstance(servers, list) or not servers:
        raise SchemaError("servers", "expected a non-empty array")
    out = []
    seen_ids = set()
    for i, sv in enumerate(servers):
        path_i = f"servers[{i}]"
        if not isinstance(sv, dict):
            raise SchemaError(path_i, "expected an object")
        sid = sv.get("id")
        if not isinstance(sid, str) or not sid:
            raise SchemaError(f"{path_i}.id", "expected a non-empty string")
        if sid in seen_ids:
            raise SchemaError(f"{path_i}.id", f"duplicate server id {sid!r}")
        seen_ids.add(sid)
        comps_doc = sv.get("components")
        if not isinstance(comps_doc, list) or not comps_doc:
            raise SchemaError(f"{path_i}.components", "expected a non-empty array")
        comps = []
        for j, cd in enumerate(comps_doc):
            comps.append(_parse_component(cd, f"{path_i}.components[{j}]"))
        out.append(ServerState(id=sid, components=tuple(comps)))
    return out


def _parse_component(doc, path: str) -> ServerComponent:
    if not isinstance(doc, dict):
        raise SchemaError(path, "expected an object")
    topo_text = doc.get("topology")
    if not isinstance(topo_text, str):
        raise SchemaError(f"{path}.topology", "expected a topology id string")
    try:
        tid = parse_topology(topo_text)
    except TopologyError as exc:
        raise SchemaError(f"{path}.topology", str(exc))
    nodes = doc.get("nodes")
    caps = doc.get("capacities")
    if (nodes is None) == (caps is None):
        raise SchemaError(path, "expected exactly one of 'nodes' or 'capacities'")
    count = tid.vertex_count
    if nodes is not None:
        if not isinstance(nodes, list):
            raise SchemaError(f"{path}.nodes", "expected an array")
        if len(nodes) != count:
            raise SchemaError(
                f"{path}.nodes", f"expected {count} node entries, got {len(nodes)}"
            )
        parsed_nodes = []
        for k, node in enumerate(nodes):
            if not isinstance(node, dict) or not node:
                raise SchemaError(
                    f"{path}.nodes[{k}]", "expected a non-empty resource object"
                )
            for name, amount in node.items():
                if (
                    isinstance(amount, bool)
                    or not isinstance(amount, int)
                    or amount < 0
                ):
                    raise SchemaError(
                        f"{path}.nodes[{k}].{name}",
                        f"expected a non-negative integer, got {amount!r}",
                    )
            parsed_nodes.append(dict(node))
        return ServerComponent(topology=tid, nodes=tuple(parsed_nodes))
    if not isinstance(caps, list):
        raise SchemaError(f"{path}.capacities", "expected an array")
    if len(caps) != count:
        raise SchemaError(
            f"{path}.capacities", f"expected {count} entries, got {len(caps)}"
        )
    for k, v in enumerate(caps):
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise SchemaError(
                f"{path}.capacities[{k}]",
                f"expected a non-negative integer, got {v!r}",
            )
    return ServerComponent(topology=tid, capacities=tuple(caps))


def load_flavors(path: str) -> dict[str, Flavor]:
    """Parse a flavor document.

    {"flavors": [{"id": str, "vnuma": str, "demand": {resource: int}}, ...]}
    """
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise SchemaError("$", "expected a JSON object")
    flavors_doc = doc.get("flavors")
    if not isinstance(flavors_doc, list) or not flavors_doc:
        raise SchemaError("flavors", "expected a non-empty array")
    out: dict[str, Flavor] = {}
    for i, fd in enumerate(flavors_doc):
        path_i = f"flavors[{i}]"
        if not isinstance(fd, dict):
            raise SchemaError(path_i, "expected an object")
        fid = fd.get("id")
        if not isinstance(fid, str) or not fid:
            raise SchemaError(f"{path_i}.id", "expected a non-empty string")
        if fid in out:
            raise SchemaError(f"{path_i}.id", f"duplicate flavor id {fid!r}")
        vnuma_text = fd.get("vnuma")
        if not isinstance(vnuma_text, str):
            raise SchemaError(f"{path_i}.vnuma", "expected a topology id string")
        try:
            vnuma = parse_topology(vnuma_text)
        except TopologyError as exc:
            raise SchemaError(f"{path_i}.vnuma", str(exc))
        demand = fd.get("demand")
        if not isinstance(demand, dict) or not demand:
            raise SchemaError(f"{path_i}.demand", "expected a non-empty object")
        for name, amount in demand.items():
            if isinstance(amount, bool) or not isinstance(amount, int) or amount < 1:
                raise SchemaError(
                    f"{path_i}.demand.{name}",
                    f"expected a positive integer, got {amount!r}",
                )
        out[fid] = Flavor(id=fid, vnuma=vnuma, demand=dict(demand))
    return out


def cmd_eval(args) -> int:
    caps = _parse_caps(args.caps)
    result = vmcap(args.topology, args.vnuma, caps)
    if args.json:
        print(
            json.dumps(
                {
                    "topology": args.topology,
                    "vnuma": args.vnuma,
                    "caps": list(caps),
                    "count": result.count,
                    "via": result.via,
                }
            )
        )
    else:
        print(result.count)
    return 0


def _placement_for(
    tid: TopologyId, gid: TopologyId, caps: tuple[int, ...]
) -> Placement:
    if gid.kind == "kn" and gid.n == 2:
        return place_k2(tid, caps)
    if gid.kind == "c4":
        return place_c4_vnuma(tid, caps)
    if gid.kind == "kn" and tid.kind == "kn":
        return place_kn_kk(tid.n, gid.n, caps)
    raise TopologyError(f"no placement routine for pair {tid}/{gid}")


def cmd_place(args) -> int:
    caps = _parse_caps(args.caps)
    tid = parse_topology(args.topology)
    gid = parse_topology(args.vnuma)
    placement = _placement_for(tid, gid, caps)
    print(
        json.dumps({"count": placement.count, "matches": placement.as_lists()})
    )
    return 0


def cmd_cluster(args) -> int:
    servers = load_cluster_state(args.state)
    flavors = load_flavors(args.flavors)
    if args.flavor not in flavors:
        raise SchemaError(
            "--flavor",
            f"unknown flavor {args.flavor!r}; file defines {sorted(flavors)}",
        )
    rows, total = cluster_capacity(servers, flavors[args.flavor])
    failed = [r for r in rows if r.error is not None]
    if args.json:
        doc = {
            "flavor": args.flavor,
            "servers": [
                {"id": r.server_id, "count": r.count}
                if r.error is None
                else {"id": r.server_id, "error": r.error}
                for r in rows
            ],
            "total": total,
        }
        print(json.dumps(doc))
    else:
        width = max(len("server"), max((len(r.server_id) for r in rows), default=0))
        print(f"{'server'.ljust(width)}  capacity")
        for r in rows:
            value = str(r.count) if r.error is None else f"error: {r.error}"
            print(f"{r.server_id.ljust(width)}  {value}")
        print(f"{'total'.ljust(width)}  {total}")
    if failed:
        for r in failed:
            print(f"error: server {r.server_id}: {r.error}", file=sys.stderr)
        return 2
    return 0


@dataclass
class VerifyReport:
    cases: int
    mismatch_count: int
    samples: list[tuple[tuple[int, ...], int, int]]  # (caps, formula, oracle)


def run_verification(
    tid: TopologyId, gid: TopologyId, vectors, fn
) -> VerifyReport:
    """Compare a closed form against the solver over an iterable of vectors."""
    host = expand_topology(tid)
    guest = expand_topology(gid)
    cache: dict = {}
    cases = 0
    mismatch_count = 0
    samples: list[tuple[tuple[int, ...], int, int]] = []
    for bv in vectors:
        cases += 1
        want = oracle_vmcap(host, guest, bv, cache=cache).count
        got = fn(bv)
        if got != want:
            mismatch_count += 1
            if len(samples) < 5:
                samples.append((bv, got, want))
        if len(cache) > _ORACLE_CACHE_LIMIT:
            cache.clear()
    return VerifyReport(cases=cases, mismatch_count=mismatch_count, samples=samples)


def cmd_verify(args) -> int:
    tid = parse_topology(args.topology)
    gid = parse_topology(args.vnuma)
    fn = closed_form_evaluator(tid, gid)
    if fn is None:
        raise TopologyError(f"no closed-form evaluator for pair {tid}/{gid}")
    n = tid.vertex_count
    if args.samples is not None:
        if args.samples < 1:
            raise SchemaError("--samples", "must be >= 1")
        cap = args.max_cap if args.max_cap is not None else 20
        rng = random.Random(args.seed)
        vectors = (
            tuple(rng.randint(0, cap) for _ in range(n))
            for _ in range(args.samples)
        )
        mode = "random"
    else:
        if args.max_cap is None:
            raise SchemaError(
                "verify", "give --max-cap for an exhaustive sweep or --samples"
            )
        total = (args.max_cap + 1) ** n
        if total > _EXHAUSTIVE_LIMIT:
            raise ScaleLimitError(
                f"exhaustive sweep of {total} vectors is too large;"
                f" use --samples"
            )
        vectors = product(range(args.max_cap + 1), repeat=n)
        mode = "exhaustive"
    report = run_verification(tid, gid, vectors, fn)
    if args.json:
        print(
            json.dumps(
                {
                    "topology": str(tid),
                    "vnuma": str(gid),
                    "mode": mode,
                    "cases": report.cases,
                    "mismatches": report.mismatch_count,
                    "examples": [
                        {"caps": list(bv), "formula": got, "oracle": want}
                        for bv, got, want in report.samples
                    ],
                }
            )
        )
    else:
        print(
            f"{tid}/{gid} {mode}: {report.cases} cases,"
            f" {report.mismatch_count} mismatches"
        )
        for bv, got, want in report.samples:
            print(f"  caps={list(bv)} formula={got} oracle={want}")
    return 1 if report.mismatch_count else 0


def cmd_bench(args) -> int:
    tid = parse_topology(args.topology)
    gid = parse_topology(args.vnuma)
    fn = closed_form_evaluator(tid, gid)
    if fn is None:
        raise TopologyError(f"no closed-form evaluator for pair {tid}/{gid}")
    n = tid.vertex_count
    rng = random.Random(args.seed)
    pool = [tuple(rng.randint(0, 20) for _ in range(n)) for _ in range(256)]
    iters = args.iters
    start = time.perf_counter()
    i = 0
    for _ in range(iters):
        fn(pool[i & 255])
        i += 1
    formula_elapsed = time.perf_counter() - start

    oracle_iters = 0
    oracle_elapsed = None
    if n <= 8:
        host = expand_topology(tid)
        guest = expand_topology(gid)
        oracle_iters = max(1, iters // 1000)
        start = time.perf_counter()
        i = 0
        for _ in range(oracle_iters):
            oracle_vmcap(host, guest, pool[i & 255])
            i += 1
        oracle_elapsed = time.perf_counter() - start

    pair = f"{tid}/{gid}"
    if args.json:
        doc = {
            "pair": pair,
            "formula": {
                "evals": iters,
                "seconds": formula_elapsed,
                "evals_per_second": iters / formula_elapsed if formula_elapsed else None,
            },
        }
        if oracle_elapsed is not None:
            doc["oracle"] = {
                "evals": oracle_iters,
                "seconds": oracle_elapsed,
                "evals_per_second": (
                    oracle_iters / oracle_elapsed if oracle_elapsed else None
                ),
            }
        print(json.dumps(doc))
    else:
        rate = iters / formula_elapsed if formula_elapsed else float("inf")
        print(
            f"closed-form {pair}: {iters} evals in {formula_elapsed:.3f} s"
            f" ({rate:,.0f} evals/s)"
        )
        if oracle_elapsed is not None:
            rate = oracle_iters / oracle_elapsed if oracle_elapsed else float("inf")
            print(
                f"oracle {pair}: {oracle_iters} evals in {oracle_elapsed:.3f} s"
                f" ({rate:,.0f} evals/s)"
            )
        else:
            print(f"oracle {pair}: skipped (host too large)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="numacap",
        description="NUMA-aware VM capacity: closed-form counts, witness"
        " placements, cluster totals, and formula verification.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="Capacity lists follow canonical node label order 1..n.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="count guests that fit a host topology")
    p.add_argument("--topology", required=True, help="host topology id, e.g. cq3")
    p.add_argument("--vnuma", required=True, help="guest shape id, e.g. k2")
    p.add_argument("--caps", required=True, help="comma-separated node counts")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("place", help="print a witness placement as JSON")
    p.add_argument("--topology", required=True)
    p.add_argument("--vnuma", required=True)
    p.add_argument("--caps", required=True)
    p.add_argument("--json", action="store_true", help="accepted for symmetry")
    p.set_defaults(func=cmd_place)

    p = sub.add_parser("cluster", help="aggregate capacity over a cluster file")
    p.add_argument("--state", required=True, help="cluster state JSON path")
    p.add_argument("--flavors", required=True, help="flavor definitions JSON path")
    p.add_argument("--flavor", required=True, help="flavor id to evaluate")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("verify", help="compare a formula against the solver")
    p.add_argument("--topology", required=True)
    p.add_argument("--vnuma", required=True)
    p.add_argument(
        "--max-cap",
        type=int,
        default=None,
        help="exhaustive sweep bound, or value range for --samples (default 20)",
    )
    p.add_argument("--samples", type=int, default=None, help="random vector count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time the formula and the solver")
    p.add_argument("--topology", required=True)
    p.add_argument("--vnuma", required=True)
    p.add_argument("--iters", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except NumacapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
