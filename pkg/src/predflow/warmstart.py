"""Warm-started max flow from a conserving but possibly infeasible prediction.

Step one repairs feasibility while keeping conservation, either by
cancelling flow along cycles and s-t paths through violating edges
(``repair_cancel``) or by solving a circulation-with-lower-bounds problem as
an auxiliary max flow (``repair_circulation``). Step two augments the
repaired flow with Edmonds-Karp. Every step function is a generator that
yields once per arc scan, so work can be metered and interleaved.
"""

from __future__ import annotations

from collections.abc import Generator, Sequence
from dataclasses import dataclass
from typing import Literal

from .errors import InputError, InvariantViolation
from .network import (
    FlowAssignment,
    FlowNetwork,
    _bind,
    check_conservation,
    flow_value,
    l1_error,
    violation_delta,
)
from .maxflow import SolveStats, drain, max_flow_steps

Variant = Literal["cancel", "circulation"]

RACE_QUANTUM = 1024


@dataclass(frozen=True)
class RepairReport:
    """Accounting for the feasibility-repair step.

    ``rounds`` counts cancellations (cancel variant) or auxiliary
    augmentations (circulation variant); both are at most ``delta``.
    ``units`` is the l1 distance between the prediction and the repaired
    flow. ``aux_value`` is the auxiliary max-flow value, circulation only.
    """

    variant: str
    delta: int
    rounds: int
    units: int
    value_before: int
    value_after: int
    arcs_scanned: int
    aux_value: int | None = None


@dataclass(frozen=True)
class WarmStartReport:
    repair: RepairReport
    step2_stats: SolveStats
    final_value: int
    eta: int | None = None

    @property
    def delta(self) -> int:
        return self.repair.delta

    @property
    def value_before_repair(self) -> int:
        return self.repair.value_before

    @property
    def value_after_repair(self) -> int:
        return self.repair.value_after

    @property
    def total_work(self) -> int:
        """Arc scans over both steps."""
        return self.repair.arcs_scanned + self.step2_stats.arcs_scanned


def _check_prediction(network: FlowNetwork, prediction: Sequence[int]) -> FlowAssignment:
    f = _bind(network, prediction)
    if not check_conservation(network, f):
        raise InputError("prediction violates flow conservation")
    return f


def repair_cancel_steps(network: FlowNetwork, prediction: Sequence[int],
                        strict_units: bool = False):
    f0 = _check_prediction(network, prediction)
    f = list(f0)
    caps = network.capacities
    edges = network.edges
    out_edges = network.out_edges
    s, t = network.source, network.sink
    m = network.edge_count
    value_before = value = flow_value(network, f0)
    delta = violation_delta(network, f0)
    scanned = 0
    violating = []
    for e in range(m):
        scanned += 1
        yield
        if f[e] > caps[e]:
            violating.append(e)

    # Arc id m is a virtual return arc carrying |value|: t->s when the value
    # is positive, s->t when negative. With it the flow is a circulation, so
    # every positive edge lies on a positive cycle; a cycle through the
    # virtual arc is an s-t (or t-s) path of the real graph.
    def arc_ends(a: int) -> tuple[int, int]:
        if a < m:
            return edges[a]
        return (t, s) if value > 0 else (s, t)

    def arc_flow(a: int) -> int:
        return f[a] if a < m else abs(value)

    def arcs_out(v: int):
        yield from out_edges[v]
        if value > 0 and v == t or value < 0 and v == s:
            yield m

    rounds = 0
    for e in violating:
        while f[e] > caps[e]:
            u, v = edges[e]
            # iterative DFS from v to u over positive arcs, smallest id first
            parent_arc = {v: -1}
            stack = [(v, arcs_out(v))]
            found = False
            while stack and not found:
                x, it = stack[-1]
                for a in it:
                    scanned += 1
                    yield
                    if arc_flow(a) <= 0:
                        continue
                    y = arc_ends(a)[1]
                    if y in parent_arc:
                        continue
                    parent_arc[y] = a
                    if y == u:
                        found = True
                        break
                    stack.append((y, arcs_out(y)))
                    break
                else:
                    stack.pop()
            if not found:
                raise InvariantViolation(f"no cycle or s-t path through edge {e}")
            cycle = [e]
            y = u
            while y != v:
                a = parent_arc[y]
                cycle.append(a)
                y = arc_ends(a)[0]
            amount = 1 if strict_units else min(
                f[e] - caps[e], min(arc_flow(a) for a in cycle)
            )
            for a in cycle:
                if a < m:
                    f[a] -= amount
                elif value > 0:
                    value -= amount
                else:
                    value += amount
            rounds += 1

    fbar = tuple(f)
    report = RepairReport(
        variant="cancel",
        delta=delta,
        rounds=rounds,
        units=l1_error(f0, fbar),
        value_before=value_before,
        value_after=flow_value(network, fbar),
        arcs_scanned=scanned,
    )
    return fbar, report


def repair_cancel(network: FlowNetwork, prediction: Sequence[int],
                  strict_units: bool = False) -> tuple[FlowAssignment, RepairReport]:
    """Make a conserving prediction feasible by cancelling cycles and paths.

    Each round finds, by depth-first search over positive-flow edges, a cycle
    or s-t path through a violating edge and decreases flow along it. By
    default the decrement is the smaller of the edge's excess and the
    bottleneck flow on the cycle; ``strict_units=True`` decrements one unit
    per round instead.
    """
    return drain(repair_cancel_steps(network, prediction, strict_units))


def circulation_network(network: FlowNetwork, prediction: Sequence[int]) -> tuple[FlowNetwork, list[int]]:
    """Auxiliary network for the lower-bounded circulation repair.

    Node ids: the original nodes, then ``n`` as the super source and
    ``n + 1`` as the super sink. Arc ``i`` for ``i < m`` reverses edge ``i``
    with capacity ``min(f_i, c_i)`` (the prediction lowered by the excess).
    Arc ``m`` is (s, t) with capacity delta; when the graph has edges into
    the source or out of the sink, arc ``m + 1`` is (t, s) with capacity
    delta as well. Then, per violating edge (u, v) with excess d, the arcs
    (super source, u) and (v, super sink) of capacity d.

    Returns the auxiliary network and the per-edge excess vector.
    """
    f = _bind(network, prediction)
    n, m = network.node_count, network.edge_count
    s, t = network.source, network.sink
    excess = [max(x - c, 0) for x, c in zip(f, network.capacities)]
    delta = sum(excess)
    arcs = [(v, u) for u, v in network.edges]
    caps = [min(x, c) for x, c in zip(f, network.capacities)]
    arcs.append((s, t))
    caps.append(delta)
    if network.in_edges[s] or network.out_edges[t]:
        arcs.append((t, s))
        caps.append(delta)
    ss, tt = n, n + 1
    for (u, v), d in zip(network.edges, excess):
        if d:
            arcs.append((ss, u))
            caps.append(d)
            arcs.append((v, tt))
            caps.append(d)
    return FlowNetwork(n + 2, tuple(arcs), ss, tt, tuple(caps)), excess


def repair_circulation_steps(network: FlowNetwork, prediction: Sequence[int]):
    f0 = _check_prediction(network, prediction)
    m = network.edge_count
    aux, excess = circulation_network(network, f0)
    delta = sum(excess)
    scanned = 0
    for _ in range(aux.edge_count):
        scanned += 1
        yield
    aux_flow, stats = yield from max_flow_steps(aux)
    scanned += stats.arcs_scanned
    aux_value = stats.units_pushed
    if aux_value != delta:
        raise InvariantViolation(
            f"auxiliary max flow {aux_value} does not saturate delta {delta}"
        )
    # re-inserting the excess on each violating edge restores conservation
    cancelled = [aux_flow[i] + excess[i] for i in range(m)]
    fbar = tuple(x - y for x, y in zip(f0, cancelled))
    report = RepairReport(
        variant="circulation",
        delta=delta,
        rounds=stats.augmentation_count,
        units=l1_error(f0, fbar),
        value_before=flow_value(network, f0),
        value_after=flow_value(network, fbar),
        arcs_scanned=scanned,
        aux_value=aux_value,
    )
    return fbar, report


def repair_circulation(network: FlowNetwork,
                       prediction: Sequence[int]) -> tuple[FlowAssignment, RepairReport]:
    """Make a conserving prediction feasible via an auxiliary max flow.

    Finds a cancellation flow on the reversed graph that removes at least
    the excess from every violating edge and returns at most delta units
    from sink to source, by reducing the lower-bounded circulation to a
    super-source/super-sink max flow (see ``circulation_network``). The
    result is ``prediction - cancellation``.
    """
    return drain(repair_circulation_steps(network, prediction))


def warm_start_steps(network: FlowNetwork, prediction: Sequence[int],
                     variant: Variant = "cancel", strict_units: bool = False):
    if variant == "cancel":
        fbar, rep = yield from repair_cancel_steps(network, prediction, strict_units)
    elif variant == "circulation":
        fbar, rep = yield from repair_circulation_steps(network, prediction)
    else:
        raise InputError(f"unknown repair variant {variant!r}")
    flow, stats = yield from max_flow_steps(network, fbar)
    return flow, WarmStartReport(rep, stats, flow_value(network, flow))


def warm_start_max_flow(
    network: FlowNetwork,
    prediction: Sequence[int],
    variant: Variant = "cancel",
    strict_units: bool = False,
    reference: Sequence[int] | None = None,
) -> tuple[FlowAssignment, WarmStartReport]:
    """Maximum flow warm-started from a conserving prediction.

    Args:
        network: The instance.
        prediction: Conserving per-edge flow; may exceed capacities.
        variant: ``"cancel"`` or ``"circulation"`` feasibility repair.
        strict_units: Cancel one unit per round (cancel variant only).
        reference: Optional maximum flow; if given, the report's ``eta`` is
            the l1 distance between it and the prediction. The algorithm
            itself never looks at it.

    Returns:
        The maximum flow and a report of the work done.
    """
    flow, report = drain(warm_start_steps(network, prediction, variant, strict_units))
    if reference is not None:
        report = WarmStartReport(report.repair, report.step2_stats, report.final_value,
                                 l1_error(prediction, reference))
    return flow, report


@dataclass(frozen=True)
class RaceResult:
    flow: FlowAssignment
    winner: Literal["warm", "cold"]
    warm_work: int
    cold_work: int

    @property
    def total_work(self) -> int:
        return self.warm_work + self.cold_work


def robust_race(
    network: FlowNetwork,
    prediction: Sequence[int],
    variant: Variant = "cancel",
    strict_units: bool = False,
    quantum: int = RACE_QUANTUM,
) -> RaceResult:
    """Alternate quanta of warm-start and cold Edmonds-Karp; first to finish wins.

    The warm leg runs first in each round, so it wins ties. Total work is at
    most ``2 * min(warm, cold) + quantum`` arc scans.
    """
    _check_prediction(network, prediction)
    legs = {
        "warm": warm_start_steps(network, prediction, variant, strict_units),
        "cold": max_flow_steps(network),
    }
    work = {"warm": 0, "cold": 0}
    while True:
        for name, gen in legs.items():
            for _ in range(quantum):
                try:
                    next(gen)
                except StopIteration as stop:
                    other = "cold" if name == "warm" else "warm"
                    legs[other].close()
                    return RaceResult(stop.value[0], name, work["warm"], work["cold"])
                work[name] += 1
