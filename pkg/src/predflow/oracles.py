"""Exhaustive reference computations for tiny instances.

These share no code with the solvers they check.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from fractions import Fraction
import math

import numpy as np

from .errors import RefusalError
from .network import FlowNetwork

MAX_GRID = 2_000_000


def incidence_matrix(network: FlowNetwork) -> np.ndarray:
    """Node-by-edge matrix: +1 at the head, -1 at the tail."""
    inc = np.zeros((network.node_count, network.edge_count), dtype=np.int64)
    for e, (u, v) in enumerate(network.edges):
        inc[u, e] -= 1
        inc[v, e] += 1
    return inc


def conserves_dense(network: FlowNetwork, f: Sequence[int]) -> bool:
    bal = incidence_matrix(network) @ np.asarray(f, dtype=np.int64).reshape(-1)
    inner = [v for v in range(network.node_count) if v not in (network.source, network.sink)]
    return bool(np.all(bal[inner] == 0))


def conserving_flows_in_box(network: FlowNetwork, box: Sequence[int]) -> np.ndarray:
    """Every conserving integral flow with 0 <= f(e) <= box[e], one per row."""
    m = network.edge_count
    size = math.prod(b + 1 for b in box)
    if size > MAX_GRID:
        raise RefusalError(f"box holds {size} candidate flows, limit {MAX_GRID}")
    if m == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.array(list(itertools.product(*(range(b + 1) for b in box))), dtype=np.int64)
    bal = grid @ incidence_matrix(network).T
    keep = np.ones(len(grid), dtype=bool)
    for v in range(network.node_count):
        if v not in (network.source, network.sink):
            keep &= bal[:, v] == 0
    return grid[keep]


def brute_force_prediction(
    network: FlowNetwork,
    optima: Sequence[Sequence[int]],
    weights: Sequence | None = None,
    extra: int = 0,
) -> tuple[tuple[int, ...], Fraction]:
    """Minimum weighted mean l1 distance to ``optima`` over all conserving
    flows with f(e) <= max_i optima[i][e] + extra."""
    k = len(optima)
    ws = [Fraction(1, k)] * k if weights is None else [Fraction(w) for w in weights]
    scale = math.lcm(*(w.denominator for w in ws))
    iw = np.array([int(w * scale) for w in ws], dtype=np.int64)
    opt = np.array(optima, dtype=np.int64).reshape(k, network.edge_count)
    box = [int(opt[:, e].max()) + extra for e in range(network.edge_count)]
    cand = conserving_flows_in_box(network, box)
    dist = np.abs(cand[:, None, :] - opt[None, :, :]).sum(axis=2)
    cost = dist @ iw
    best = int(np.argmin(cost))
    return tuple(int(x) for x in cand[best]), Fraction(int(cost[best]), scale)
