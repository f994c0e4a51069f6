"""Edmonds-Karp max flow from an arbitrary feasible start, residual networks,
and an exhaustive min-cut oracle for tiny graphs.

The solver is written as a generator that yields once per residual arc it
examines. ``max_flow_from`` simply drains it; ``warmstart.robust_race``
interleaves two such generators to meter their work exactly.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Generator, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import InputError, RefusalError
from .network import FlowAssignment, FlowNetwork, _bind, check_conservation

Steps = Generator[None, None, "tuple[FlowAssignment, SolveStats]"]

BRUTEFORCE_MAX_NODES = 22


@dataclass(frozen=True)
class SolveStats:
    augmentation_count: int = 0
    units_pushed: int = 0
    arcs_scanned: int = 0


@dataclass(frozen=True)
class ResidualArc:
    tail: int
    head: int
    capacity: int
    edge: int
    forward: bool


@dataclass(frozen=True)
class ResidualNetwork:
    """Residual arcs, one forward and one backward arc per original edge.

    Arcs are kept per edge rather than merged per node pair; ``capacity``
    returns the merged value c(u,v) - f(u,v) + f(v,u) summed over parallel
    edges.
    """

    node_count: int
    arcs: tuple[ResidualArc, ...]
    source: int
    sink: int

    def capacity(self, u: int, v: int) -> int:
        return sum(a.capacity for a in self.arcs if a.tail == u and a.head == v)

    def reachable_from_source(self) -> set[int]:
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for a in self.arcs:
            if a.capacity > 0:
                adj[a.tail].append(a.head)
        seen = {self.source}
        stack = [self.source]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    def has_augmenting_path(self) -> bool:
        return self.sink in self.reachable_from_source()


def _check_start(network: FlowNetwork, f: Sequence[int]) -> FlowAssignment:
    f = _bind(network, f)
    for i, (x, c) in enumerate(zip(f, network.capacities)):
        if x > c:
            raise InputError(f"flow {x} exceeds capacity {c} on edge {i}")
    if not check_conservation(network, f):
        raise InputError("start flow violates conservation")
    return f


def residual(network: FlowNetwork, f: Sequence[int]) -> ResidualNetwork:
    """Residual network of a feasible, conserving flow."""
    f = _check_start(network, f)
    arcs = []
    for i, ((u, v), c, x) in enumerate(zip(network.edges, network.capacities, f)):
        arcs.append(ResidualArc(u, v, c - x, i, True))
        arcs.append(ResidualArc(v, u, x, i, False))
    return ResidualNetwork(network.node_count, tuple(arcs), network.source, network.sink)


def _residual_adjacency(network: FlowNetwork) -> list[list[int]]:
    # arc 2i is edge i forward, 2i+1 backward; expansion order is by head id
    adj: list[list[tuple[int, int]]] = [[] for _ in range(network.node_count)]
    for i, (u, v) in enumerate(network.edges):
        adj[u].append((v, 2 * i))
        adj[v].append((u, 2 * i + 1))
    return [[a for _, a in sorted(lst)] for lst in adj]


def max_flow_steps(network: FlowNetwork, start: Sequence[int] | None = None) -> Steps:
    """Edmonds-Karp as a generator; yields per arc scan, returns (flow, stats)."""
    f = list(_check_start(network, start if start is not None else network.zero_flow()))
    caps = network.capacities
    edges = network.edges
    adj = _residual_adjacency(network)
    s, t = network.source, network.sink
    n = network.node_count
    augmentations = pushed = scanned = 0

    def rescap(a: int) -> int:
        e = a >> 1
        return f[e] if a & 1 else caps[e] - f[e]

    def head(a: int) -> int:
        u, v = edges[a >> 1]
        return u if a & 1 else v

    while True:
        parent = [-1] * n
        seen = [False] * n
        seen[s] = True
        queue = deque([s])
        found = False
        while queue and not found:
            u = queue.popleft()
            for a in adj[u]:
                scanned += 1
                yield
                w = head(a)
                if not seen[w] and rescap(a) > 0:
                    seen[w] = True
                    parent[w] = a
                    if w == t:
                        found = True
                        break
                    queue.append(w)
        if not found:
            break
        path = []
        v = t
        while v != s:
            a = parent[v]
            path.append(a)
            v = edges[a >> 1][0] if not a & 1 else edges[a >> 1][1]
        amount = min(rescap(a) for a in path)
        for a in path:
            if a & 1:
                f[a >> 1] -= amount
            else:
                f[a >> 1] += amount
        augmentations += 1
        pushed += amount
    return tuple(f), SolveStats(augmentations, pushed, scanned)


def drain(steps: Generator):
    """Run a step generator to completion and return its result."""
    while True:
        try:
            next(steps)
        except StopIteration as stop:
            return stop.value


def max_flow_from(
    network: FlowNetwork, start: Sequence[int] | None = None
) -> tuple[FlowAssignment, SolveStats]:
    """Augment a feasible conserving flow to a maximum flow.

    Uses shortest augmenting paths, pushing the full bottleneck each time.
    BFS expands residual arcs in order of head node id, so the result is
    deterministic.
    """
    return drain(max_flow_steps(network, start))


def max_flow(network: FlowNetwork) -> tuple[FlowAssignment, SolveStats]:
    """Cold-start maximum flow."""
    return max_flow_from(network, None)


def min_cut_value_bruteforce(network: FlowNetwork) -> int:
    """Minimum s-t cut by enumerating every bipartition of the other nodes."""
    n = network.node_count
    if n > BRUTEFORCE_MAX_NODES:
        raise RefusalError(
            f"{n} nodes exceeds the brute-force limit of {BRUTEFORCE_MAX_NODES}"
        )
    s, t = network.source, network.sink
    inner = [v for v in range(n) if v not in (s, t)]
    masks = np.arange(1 << len(inner), dtype=np.int64)
    # side[v]: True where v is on the source side, one entry per mask
    side = np.zeros((n, masks.size), dtype=bool)
    side[s] = True
    for bit, v in enumerate(inner):
        side[v] = (masks >> bit) & 1 == 1
    total = np.zeros(masks.size, dtype=np.int64)
    for (u, v), c in zip(network.edges, network.capacities):
        if c:
            total += np.where(side[u] & ~side[v], c, 0)
    return int(total.min())


def cut_certificate(network: FlowNetwork, f: Sequence[int]) -> tuple[set[int], int]:
    """Source side of the residual cut and its capacity.

    For a maximum flow the capacity equals ``flow_value(network, f)``.
    """
    side = residual(network, f).reachable_from_source()
    cap = sum(c for (u, v), c in zip(network.edges, network.capacities)
              if u in side and v not in side)
    return side, cap

