"""Minimum-cost circulation by negative-cycle cancelling.

Starts from the zero circulation and repeatedly cancels a negative-cost
residual cycle, found with label-correcting (Bellman-Ford) shortest paths
from a virtual root, pushing its bottleneck. Only strictly negative cycles
are cancelled. Costs may be negative; everything stays integral.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError


@dataclass(frozen=True)
class MinCostFlowInstance:
    """Arcs as (tail, head, capacity, unit cost).

    ``arc_edge[j]`` names the original network edge that arc ``j`` is a
    segment of, or -1 for a return arc. Any circulation is admissible; the
    objective alone drives the flow value.
    """

    node_count: int
    arcs: tuple[tuple[int, int, int, int], ...]
    source: int
    sink: int
    arc_edge: tuple[int, ...] = ()

    def __post_init__(self):
        if self.arc_edge and len(self.arc_edge) != len(self.arcs):
            raise InputError("arc_edge length differs from arc count")
        for j, (u, v, cap, _) in enumerate(self.arcs):
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise InputError(f"arc {j} has a node out of range")
            if cap < 0:
                raise InputError(f"arc {j} has negative capacity")

    def cost_of(self, flows) -> int:
        return sum(x * a[3] for x, a in zip(flows, self.arcs))


def _negative_cycle(n: int, res: list[tuple[int, int, int, int]]) -> list[int] | None:
    """Residual arc ids of a negative cycle, or None.

    ``res`` holds (tail, head, cost, residual arc id) for arcs with positive
    residual capacity.
    """
    dist = [0] * n
    pred = [-1] * n
    last = -1
    for _ in range(n):
        last = -1
        for u, v, c, a in res:
            if dist[u] + c < dist[v]:
                dist[v] = dist[u] + c
                pred[v] = a
                last = v
        if last == -1:
            return None
    # walk back n steps to land inside the cycle
    tails = {a: u for u, _, _, a in res}
    x = last
    for _ in range(n):
        x = tails[pred[x]]
    cycle = []
    y = x
    while True:
        a = pred[y]
        cycle.append(a)
        y = tails[a]
        if y == x:
            break
    return cycle[::-1]


def min_cost_flow(instance: MinCostFlowInstance) -> tuple[int, ...]:
    """Minimum-cost circulation; returns the per-arc flow."""
    arcs = instance.arcs
    flow = [0] * len(arcs)
    n = instance.node_count
    while True:
        # residual arc 2j forward, 2j+1 backward
        res = []
        for j, (u, v, cap, cost) in enumerate(arcs):
            if flow[j] < cap:
                res.append((u, v, cost, 2 * j))
            if flow[j] > 0:
                res.append((v, u, -cost, 2 * j + 1))
        cycle = _negative_cycle(n, res)
        if cycle is None:
            return tuple(flow)
        amount = min(arcs[a >> 1][2] - flow[a >> 1] if not a & 1 else flow[a >> 1]
                     for a in cycle)
        for a in cycle:
            flow[a >> 1] += -amount if a & 1 else amount


def has_negative_cycle(instance: MinCostFlowInstance, flows) -> bool:
    """True iff the residual graph of ``flows`` contains a negative cycle."""
    res = []
    for j, ((u, v, cap, cost), x) in enumerate(zip(instance.arcs, flows)):
        if x < cap:
            res.append((u, v, cost, 2 * j))
        if x > 0:
            res.append((v, u, -cost, 2 * j + 1))
    return _negative_cycle(instance.node_count, res) is not None
