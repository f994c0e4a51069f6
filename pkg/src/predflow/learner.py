"""Learning the flow prediction with least mean l1 error over sampled instances.

Each edge contributes a convex piecewise-linear cost (a weighted sum of
absolute deviations from that edge's sample optima). Splitting every edge
into parallel arcs, one per linear segment with the segment slope as unit
cost, turns the problem into a min-cost circulation, which is solved
exactly by ``mincost.min_cost_flow``.

Weights are kept exact: per-sample weights are rationals, scaled by their
common denominator so that all arc costs are integers.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, InvariantViolation
from .maxflow import max_flow
from .mincost import MinCostFlowInstance, min_cost_flow
from .network import FlowAssignment, FlowNetwork, check_conservation


@dataclass(frozen=True)
class PiecewiseLinearCost:
    """x -> sum_j w_j |x - b_j| over distinct sorted breakpoints b_j.

    ``int_weights`` are the weights times ``scale``. ``segments`` lists
    (capacity, scaled slope) from 0 upward: the first segment runs from 0 to
    the first breakpoint, the last is unbounded (capacity None). Slopes are
    integers in units of 1/scale.
    """

    breakpoints: tuple[int, ...]
    int_weights: tuple[int, ...]
    scale: int

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(w, self.scale) for w in self.int_weights)

    @property
    def segments(self) -> tuple[tuple[int | None, int], ...]:
        segs = []
        below = 0
        prev = 0
        for b, w in zip(self.breakpoints, self.int_weights):
            segs.append((b - prev, 2 * below - self.scale))
            below += w
            prev = b
        segs.append((None, 2 * below - self.scale))
        return tuple(segs)

    @property
    def slopes(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(s, self.scale) for _, s in self.segments)

    def scaled(self, x: int) -> int:
        return sum(w * abs(x - b) for b, w in zip(self.breakpoints, self.int_weights))

    def __call__(self, x: int) -> Fraction:
        return Fraction(self.scaled(x), self.scale)

    def minimum(self) -> Fraction:
        """Unconstrained minimum, attained at a weighted median breakpoint."""
        return min(self(b) for b in self.breakpoints)


def _integer_weights(weights: Sequence[Fraction]) -> tuple[list[int], int]:
    scale = math.lcm(*(w.denominator for w in weights))
    return [int(w * scale) for w in weights], scale


def _normalize_weights(count: int, weights: Sequence | None) -> list[Fraction]:
    if count == 0:
        raise InputError("at least one sample is required")
    if weights is None:
        return [Fraction(1, count)] * count
    if len(weights) != count:
        raise InputError(f"{len(weights)} weights for {count} samples")
    ws = [Fraction(w) for w in weights]
    if any(w <= 0 for w in ws):
        raise InputError("weights must be positive")
    if sum(ws) != 1:
        raise InputError(f"weights sum to {sum(ws)}, expected 1")
    return ws


def build_cost(values: Sequence[int], weights: Sequence | None = None) -> PiecewiseLinearCost:
    """Cost function of one edge given the per-sample optimal flow values.

    With uniform weights over k samples, the slope between the i-th and
    (i+1)-th sorted value is (2i - k)/k.
    """
    ws = _normalize_weights(len(values), weights)
    # scale from the per-sample weights, so that edges sharing the same
    # samples share the same scale (k in the uniform case)
    iw, scale = _integer_weights(ws)
    merged: dict[int, int] = {}
    for x, w in zip(values, iw):
        if x < 0:
            raise InputError(f"negative sample value {x}")
        merged[int(x)] = merged.get(int(x), 0) + w
    bps = sorted(merged)
    cost = PiecewiseLinearCost(tuple(bps), tuple(merged[b] for b in bps), scale)
    slopes = [s for _, s in cost.segments]
    if any(a > b for a, b in zip(slopes, slopes[1:])):
        raise InvariantViolation("cost slopes are not nondecreasing")
    return cost


def reduce_to_mcf(network: FlowNetwork,
                  costs: Sequence[PiecewiseLinearCost]) -> MinCostFlowInstance:
    """Min-cost circulation instance equivalent to minimizing the edge costs.

    Every edge becomes one arc per bounded segment of positive length, with
    the scaled slope as unit cost, in ascending cost order. The unbounded
    last segment has positive slope and is dropped. A zero-cost return arc
    t->s of capacity 2 * max breakpoint * |E| lets flow of any value
    circulate; when the graph has edges into s or out of t, an s->t return
    arc is added too.
    """
    if len(costs) != network.edge_count:
        raise InputError(f"{len(costs)} costs for {network.edge_count} edges")
    scales = {c.scale for c in costs}
    if len(scales) > 1:
        raise InputError("edge costs use different weight scales")
    arcs: list[tuple[int, int, int, int]] = []
    arc_edge: list[int] = []
    top = 0
    for e, ((u, v), cost) in enumerate(zip(network.edges, costs)):
        for cap, slope in cost.segments[:-1]:
            if cap > 0:
                arcs.append((u, v, cap, slope))
                arc_edge.append(e)
        if cost.breakpoints:
            top = max(top, cost.breakpoints[-1])
    s, t = network.source, network.sink
    ret = 2 * top * network.edge_count
    arcs.append((t, s, ret, 0))
    arc_edge.append(-1)
    if network.in_edges[s] or network.out_edges[t]:
        arcs.append((s, t, ret, 0))
        arc_edge.append(-1)
    return MinCostFlowInstance(network.node_count, tuple(arcs), s, t, tuple(arc_edge))


def sample_optima(network: FlowNetwork,
                  samples: Sequence[Sequence[int]]) -> list[FlowAssignment]:
    """Maximum flow for every capacity vector. Repeated vectors are solved once."""
    cache: dict[tuple[int, ...], FlowAssignment] = {}
    out = []
    for i, caps in enumerate(samples):
        caps = tuple(caps)
        if len(caps) != network.edge_count:
            raise InputError(
                f"sample {i} has {len(caps)} capacities for {network.edge_count} edges"
            )
        if caps not in cache:
            cache[caps] = max_flow(network.with_capacities(caps))[0]
        out.append(cache[caps])
    return out


def objective(costs: Sequence[PiecewiseLinearCost], f: Sequence[int]) -> Fraction:
    return sum((c(x) for c, x in zip(costs, f)), Fraction(0))


def learn_from_optima(
    network: FlowNetwork,
    optima: Sequence[Sequence[int]],
    weights: Sequence | None = None,
) -> tuple[FlowAssignment, Fraction]:
    """Best conserving integral prediction for precomputed sample optima."""
    ws = _normalize_weights(len(optima), weights)
    costs = [build_cost([opt[e] for opt in optima], ws)
             for e in range(network.edge_count)]
    inst = reduce_to_mcf(network, costs)
    arc_flow = min_cost_flow(inst)
    f = [0] * network.edge_count
    for e, x in zip(inst.arc_edge, arc_flow):
        if e >= 0:
            f[e] += x
    fhat = tuple(f)
    if not check_conservation(network, fhat):
        raise InvariantViolation("learned prediction does not conserve flow")
    return fhat, objective(costs, fhat)


def learn_prediction(
    network: FlowNetwork,
    samples: Sequence[Sequence[int]],
    weights: Sequence | None = None,
) -> tuple[FlowAssignment, Fraction]:
    """Conserving integral flow minimizing the (weighted) mean l1 distance
    to the samples' maximum flows.

    Ties are broken deterministically: the solver starts from zero flow and
    cancels only strictly improving cycles, so zero-slope segments stay
    unused unless forced by conservation. ``weights`` default to uniform; passing a
    finite-support distribution's probabilities together with its support
    vectors gives the exact distribution optimum.

    Returns the prediction and the exact objective value.
    """
    optima = sample_optima(network, samples)
    fhat, obj = learn_from_optima(network, optima, weights)
    c_max = max((max(c, default=0) for c in samples), default=0)
    if sum(fhat) > 2 * c_max * network.edge_count:
        raise InvariantViolation("learned prediction exceeds the l1 norm bound")
    return fhat, obj
