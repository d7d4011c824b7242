"""Server and cluster capacity for a VM flavor.

A server is a disjoint union of components (one interconnect topology
each, e.g. two sockets of four NUMA nodes).  Per-node guest counts come
from free resources divided by the flavor demand, and components simply
add up since no guest spans two of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

from .errors import NumacapError, ResourceError, SchemaError
from .formulas import vmcap
from .topology import TopologyId, as_topology_id, check_capacities


@dataclass(frozen=True)
class Flavor:
    """A VM size: guest NUMA shape plus per-guest-node resource demand."""

    id: str
    vnuma: TopologyId
    demand: Mapping[str, int]

    def __post_init__(self):
        object.__setattr__(self, "vnuma", as_topology_id(self.vnuma))
        if not self.demand:
            raise ResourceError(f"flavor {self.id!r} demands no resources")
        for name, amount in self.demand.items():
            if isinstance(amount, bool) or not isinstance(amount, int) or amount < 1:
                raise ResourceError(
                    f"flavor {self.id!r} demand {name!r} must be a positive"
                    f" integer, got {amount!r}"
                )


@dataclass(frozen=True)
class ServerComponent:
    """One interconnect topology with either free resources or raw counts.

    Give `nodes` (per-node free resource maps, label order) to derive the
    capacity vector from a flavor's demand, or give `capacities` directly.
    """

    topology: TopologyId
    nodes: Optional[tuple[Mapping[str, int], ...]] = None
    capacities: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "topology", as_topology_id(self.topology))
        if (self.nodes is None) == (self.capacities is None):
            raise SchemaError(
                "component", "give exactly one of nodes or capacities"
            )
        count = self.topology.vertex_count
        if self.nodes is not None:
            object.__setattr__(self, "nodes", tuple(self.nodes))
            if len(self.nodes) != count:
                raise SchemaError(
                    "component.nodes",
                    f"expected {count} node entries, got {len(self.nodes)}",
                )
            for i, free in enumerate(self.nodes):
                for name, amount in free.items():
                    if (
                        isinstance(amount, bool)
                        or not isinstance(amount, int)
                        or amount < 0
                    ):
                        raise SchemaError(
                            f"component.nodes[{i}].{name}",
                            f"free amount must be a non-negative integer,"
                            f" got {amount!r}",
                        )
        else:
            object.__setattr__(
                self,
                "capacities",
                check_capacities(self.capacities, count),
            )


@dataclass(frozen=True)
class ServerState:
    id: str
    components: tuple[ServerComponent, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise SchemaError(f"server {self.id!r}", "needs >= 1 component")


def node_capacity(free: Mapping[str, int], demand: Mapping[str, int]) -> int:
    """Guests one node can host: min over resources of free // demand.

    Resources present in `free` but not demanded are ignored; a demanded
    resource missing from `free` is an error, as is a non-positive demand.
    """
    best: Optional[int] = None
    if not demand:
        raise ResourceError("demand map is empty")
    for name, amount in demand.items():
        if isinstance(amount, bool) or not isinstance(amount, int) or amount < 1:
            raise ResourceError(
                f"demand {name!r} must be a positive integer, got {amount!r}"
            )
        if name not in free:
            raise ResourceError(f"node is missing demanded resource {name!r}")
        have = free[name]
        if isinstance(have, bool) or not isinstance(have, int) or have < 0:
            raise ResourceError(
                f"free {name!r} must be a non-negative integer, got {have!r}"
            )
        cur = have // amount
        if best is None or cur < best:
            best = cur
    assert best is not None
    return best


def component_capacity_vector(
    component: ServerComponent, flavor: Flavor
) -> tuple[int, ...]:
    """Per-node guest counts for one component (canonical label order)."""
    if component.capacities is not None:
        return component.capacities
    assert component.nodes is not None
    return tuple(node_capacity(free, flavor.demand) for free in component.nodes)


def server_capacity(server: ServerState, flavor: Flavor) -> int:
    """Guests of `flavor` that fit `server`, summed over components.

    Single-node guests need no interconnect, so they contribute the plain
    sum of node counts; anything else goes through the pair/shape formulas
    with the exhaustive solver as fallback.
    """
    total = 0
    for component in server.components:
        caps = component_capacity_vector(component, flavor)
        if flavor.vnuma.vertex_count == 1:
            total += sum(caps)
        else:
            total += vmcap(component.topology, flavor.vnuma, caps).count
    return total


@dataclass(frozen=True)
class ServerCapacity:
    """One row of a cluster report; exactly one of count/error is set."""

    server_id: str
    count: Optional[int] = None
    error: Optional[str] = None


def cluster_capacity(
    servers: Sequence[ServerState], flavor: Flavor
) -> tuple[list[ServerCapacity], int]:
    """Per-server counts in input order plus the cluster total.

    A failing server (bad dimension, unsupported shape, missing resource)
    gets an error row and does not abort the rest.
    """
    rows: list[ServerCapacity] = []
    total = 0
    for server in servers:
        try:
            count = server_capacity(server, flavor)
        except NumacapError as exc:
            rows.append(ServerCapacity(server_id=server.id, error=str(exc)))
        else:
            rows.append(ServerCapacity(server_id=server.id, count=count))
            total += count
    return rows, total
