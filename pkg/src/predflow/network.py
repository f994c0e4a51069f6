"""Flow networks, flow assignments and the basic arithmetic on them.

A flow assignment is a plain tuple of nonnegative ints indexed like
``FlowNetwork.edges``. Predictions are flow assignments that conserve flow
but may exceed capacities, so capacity feasibility is never assumed here.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

from .errors import InputError

INT64_MAX = 2**63 - 1

FlowAssignment = tuple[int, ...]


def _check_int64(value: int, what: str) -> int:
    if value > INT64_MAX or value < -INT64_MAX - 1:
        raise OverflowError(f"{what} overflows 64-bit signed range: {value}")
    return value


def _as_nonneg_ints(values: Sequence[int], what: str) -> tuple[int, ...]:
    out = []
    for i, v in enumerate(values):
        # bool is an int subclass; numpy ints go through operator.index
        if isinstance(v, bool):
            raise InputError(f"{what}[{i}] is a bool, expected int")
        try:
            iv = int(v.__index__())
        except (AttributeError, TypeError):
            raise InputError(f"{what}[{i}] = {v!r} is not an integer") from None
        if iv < 0:
            raise InputError(f"{what}[{i}] = {iv} is negative")
        out.append(_check_int64(iv, f"{what}[{i}]"))
    return tuple(out)


def as_flow(values: Sequence[int]) -> FlowAssignment:
    """Validate and freeze a per-edge flow vector."""
    return _as_nonneg_ints(values, "flow")


@dataclass(frozen=True)
class FlowNetwork:
    """Directed multigraph with a source, a sink and integral capacities.

    Parallel and antiparallel edges are allowed. The position of an edge in
    ``edges`` is its identity for every per-edge vector.
    """

    node_count: int
    edges: tuple[tuple[int, int], ...]
    source: int
    sink: int
    capacities: tuple[int, ...] = field(default=())

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        caps = self.capacities if self.capacities else (0,) * len(edges)
        object.__setattr__(self, "capacities", _as_nonneg_ints(caps, "capacity"))
        if self.node_count < 1:
            raise InputError("node_count must be positive")
        if len(self.capacities) != len(edges):
            raise InputError(
                f"{len(self.capacities)} capacities for {len(edges)} edges"
            )
        n = self.node_count
        for x, name in ((self.source, "source"), (self.sink, "sink")):
            if not 0 <= x < n:
                raise InputError(f"{name} {x} out of range [0, {n})")
        if self.source == self.sink:
            raise InputError("source and sink must differ")
        for i, (u, v) in enumerate(edges):
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge {i} = ({u}, {v}) has a node out of range")
            if u == v:
                raise InputError(f"edge {i} is a self-loop on node {u}")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        """Edge indices leaving each node, ascending."""
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for i, (u, _) in enumerate(self.edges):
            adj[u].append(i)
        return tuple(tuple(a) for a in adj)

    @cached_property
    def in_edges(self) -> tuple[tuple[int, ...], ...]:
        """Edge indices entering each node, ascending."""
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for i, (_, v) in enumerate(self.edges):
            adj[v].append(i)
        return tuple(tuple(a) for a in adj)

    def with_capacities(self, capacities: Sequence[int]) -> FlowNetwork:
        """Same topology, different capacity vector."""
        return FlowNetwork(self.node_count, self.edges, self.source, self.sink,
                           tuple(capacities))

    def zero_flow(self) -> FlowAssignment:
        return (0,) * len(self.edges)


def _bind(network: FlowNetwork, f: Sequence[int]) -> FlowAssignment:
    f = as_flow(f)
    if len(f) != network.edge_count:
        raise InputError(
            f"flow has {len(f)} entries, network has {network.edge_count} edges"
        )
    return f


def node_balances(network: FlowNetwork, f: Sequence[int]) -> list[int]:
    """Inflow minus outflow at every node."""
    f = _bind(network, f)
    bal = [0] * network.node_count
    for (u, v), x in zip(network.edges, f):
        bal[u] -= x
        bal[v] += x
    return bal


def check_conservation(network: FlowNetwork, f: Sequence[int]) -> bool:
    """True iff inflow equals outflow at every node except source and sink."""
    bal = node_balances(network, f)
    s, t = network.source, network.sink
    return all(b == 0 for v, b in enumerate(bal) if v != s and v != t)


def flow_value(network: FlowNetwork, f: Sequence[int]) -> int:
    """Net outflow of the source.

    On graphs without edges into the source this is the plain sum over
    source out-edges. Edges entering the source are subtracted, so the value
    stays consistent with max-flow/min-cut on arbitrary graphs; a conserving
    prediction that routes flow from sink to source therefore has a negative
    value.
    """
    f = _bind(network, f)
    s = network.source
    val = sum(f[i] for i in network.out_edges[s]) - sum(f[i] for i in network.in_edges[s])
    return _check_int64(val, "flow value")


def l1_error(f: Sequence[int], g: Sequence[int]) -> int:
    """Sum of absolute per-edge differences."""
    f, g = as_flow(f), as_flow(g)
    if len(f) != len(g):
        raise InputError(f"length mismatch: {len(f)} vs {len(g)}")
    return _check_int64(sum(abs(a - b) for a, b in zip(f, g)), "l1 error")


def violation_delta(network: FlowNetwork, f: Sequence[int]) -> int:
    """Total amount by which ``f`` exceeds the capacities."""
    f = _bind(network, f)
    return _check_int64(
        sum(max(x - c, 0) for x, c in zip(f, network.capacities)), "violation"
    )


def is_feasible(network: FlowNetwork, f: Sequence[int]) -> bool:
    f = _bind(network, f)
    return all(x <= c for x, c in zip(f, network.capacities))


@dataclass(frozen=True)
class FlowDecomposition:
    """Simple s-t paths and simple cycles, each with a positive multiplicity.

    Members are tuples of edge indices in traversal order.
    """

    paths: tuple[tuple[int, ...], ...]
    path_multiplicities: tuple[int, ...]
    cycles: tuple[tuple[int, ...], ...]
    cycle_multiplicities: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.paths) + len(self.cycles)

    def reconstruct(self, edge_count: int) -> FlowAssignment:
        out = [0] * edge_count
        for members, mults in ((self.paths, self.path_multiplicities),
                               (self.cycles, self.cycle_multiplicities)):
            for member, k in zip(members, mults):
                for e in member:
                    out[e] += k
        return tuple(out)


def decompose(network: FlowNetwork, f: Sequence[int]) -> FlowDecomposition:
    """Split a conserving flow into s-t paths and cycles.

    Paths are peeled first by walking from the source along the
    smallest-index positive edge; a walk that revisits a node peels the
    closed cycle instead. Remaining flow is peeled as cycles, starting from
    the lowest node that still has positive outflow. Each peel zeroes at
    least one edge, so there are at most ``edge_count`` members.

    Raises InputError if ``f`` does not conserve, or if it carries flow from
    the sink back to the source (such flow is neither a path nor a cycle).
    """
    if not check_conservation(network, f):
        raise InputError("flow violates conservation")
    rem = list(as_flow(f))
    s, t = network.source, network.sink
    out_edges = network.out_edges
    edges = network.edges
    paths: list[tuple[int, ...]] = []
    pmult: list[int] = []
    cycles: list[tuple[int, ...]] = []
    cmult: list[int] = []

    def next_edge(v: int) -> int | None:
        for e in out_edges[v]:
            if rem[e] > 0:
                return e
        return None

    def walk(start: int, stop_at_sink: bool) -> None:
        nodes = [start]
        pos = {start: 0}
        trail: list[int] = []
        while True:
            v = nodes[-1]
            if stop_at_sink and v == t:
                k = min(rem[e] for e in trail)
                for e in trail:
                    rem[e] -= k
                paths.append(tuple(trail))
                pmult.append(k)
                return
            e = next_edge(v)
            if e is None:
                raise InputError(
                    "flow carries sink-to-source flow; not decomposable into "
                    "s-t paths and cycles"
                )
            w = edges[e][1]
            trail.append(e)
            if w in pos:
                cyc = trail[pos[w]:]
                k = min(rem[x] for x in cyc)
                for x in cyc:
                    rem[x] -= k
                cycles.append(tuple(cyc))
                cmult.append(k)
                return
            pos[w] = len(nodes)
            nodes.append(w)

    while next_edge(s) is not None:
        walk(s, stop_at_sink=True)
    v = 0
    while v < network.node_count:
        if next_edge(v) is not None:
            walk(v, stop_at_sink=False)
        else:
            v += 1
    return FlowDecomposition(tuple(paths), tuple(pmult), tuple(cycles), tuple(cmult))
