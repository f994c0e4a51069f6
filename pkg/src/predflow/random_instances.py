"""Seeded random networks, conserving predictions, and controlled-error
perturbations for tests and experiments."""

from __future__ import annotations

from collections.abc import Callable, Sequence

import numpy as np

from .network import FlowAssignment, FlowNetwork, l1_error


def random_network(
    rng: np.random.Generator,
    max_nodes: int = 8,
    max_edges: int = 14,
    max_cap: int = 6,
    min_nodes: int = 2,
    min_edges: int = 0,
) -> FlowNetwork:
    """Random multigraph; source 0, sink n-1. Edges into the source, out of
    the sink, parallel and antiparallel edges all occur."""
    n = int(rng.integers(min_nodes, max_nodes + 1))
    m = int(rng.integers(min_edges, max_edges + 1))
    edges = []
    while len(edges) < m:
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u != v:
            edges.append((u, v))
    caps = tuple(int(x) for x in rng.integers(0, max_cap + 1, size=m))
    return FlowNetwork(n, tuple(edges), 0, n - 1, caps)


def layered_network(rng: np.random.Generator, layers: int = 3, width: int = 3,
                    max_cap: int = 6) -> FlowNetwork:
    """Source, ``layers`` layers of ``width`` nodes, sink; complete bipartite
    links between consecutive layers plus a few intra-layer edges."""
    n = layers * width + 2
    s, t = 0, n - 1
    layer = [[1 + i * width + j for j in range(width)] for i in range(layers)]
    edges = [(s, v) for v in layer[0]]
    for a, b in zip(layer, layer[1:]):
        edges.extend((u, v) for u in a for v in b)
    edges.extend((u, t) for u in layer[-1])
    for nodes in layer:
        for u, v in zip(nodes, nodes[1:]):
            edges.append((u, v) if rng.random() < 0.5 else (v, u))
    caps = tuple(int(x) for x in rng.integers(1, max_cap + 1, size=len(edges)))
    return FlowNetwork(n, tuple(edges), s, t, caps)


def random_walk(
    rng: np.random.Generator,
    network: FlowNetwork,
    start: int,
    usable: Callable[[int], bool],
    stop_at: int | None = None,
) -> list[int] | None:
    """Random walk over usable edges from ``start``.

    Returns the edge list of the first closed cycle met, or of the walk up to
    ``stop_at``. Returns None on a dead end.
    """
    pos = {start: 0}
    trail: list[int] = []
    v = start
    while True:
        if v == stop_at and trail:
            return trail
        choices = [e for e in network.out_edges[v] if usable(e)]
        if not choices:
            return None
        e = choices[int(rng.integers(len(choices)))]
        w = network.edges[e][1]
        trail.append(e)
        if w in pos:
            return trail[pos[w]:]
        pos[w] = len(trail)
        v = w


def random_member(rng: np.random.Generator, network: FlowNetwork,
                  usable: Callable[[int], bool], tries: int = 20) -> list[int] | None:
    """A random conserving unit: s-t path, t-s path, or cycle over usable edges."""
    n = network.node_count
    for _ in range(tries):
        r = rng.random()
        if r < 0.5:
            start, stop = network.source, network.sink
        elif r < 0.6:
            start, stop = network.sink, network.source
        else:
            start, stop = int(rng.integers(n)), None
        walk = random_walk(rng, network, start, usable, stop)
        if walk:
            return walk
    return None


def random_conserving_flow(rng: np.random.Generator, network: FlowNetwork,
                           members: int = 4, max_mult: int = 6) -> FlowAssignment:
    """Sum of random paths and cycles with random multiplicities; ignores capacities."""
    f = [0] * network.edge_count
    for _ in range(int(rng.integers(0, members + 1))):
        walk = random_member(rng, network, lambda e: True)
        if walk is None:
            continue
        k = int(rng.integers(1, max_mult + 1))
        for e in walk:
            f[e] += k
    return tuple(f)


def perturb_to_eta(
    rng: np.random.Generator,
    network: FlowNetwork,
    optimum: Sequence[int],
    target: int,
    max_steps: int = 10_000,
) -> tuple[FlowAssignment, int] | None:
    """Apply random unit additions and removals along paths and cycles until
    the l1 distance to ``optimum`` reaches ``target``.

    Returns (prediction, measured eta), or None if the target could not be
    reached. Every step keeps conservation.
    """
    f = list(optimum)
    eta = 0
    for _ in range(max_steps):
        if eta >= target:
            return tuple(f), eta
        if rng.random() < 0.7 or not any(f):
            walk, sign = random_member(rng, network, lambda e: True), 1
        else:
            walk, sign = random_member(rng, network, lambda e: f[e] > 0), -1
        if walk is None:
            continue
        for e in walk:
            f[e] += sign
        eta = l1_error(f, optimum)
    return (tuple(f), eta) if eta >= target else None
