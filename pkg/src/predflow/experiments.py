"""Seeded desk-scale experiments. Each returns a list of row dicts with a
fixed column schema; ``write_rows`` emits them as CSV.

Every row records the master seed and its trial coordinates, and the
per-trial generator is ``make_rng([seed, *coordinates])``, so any row can be
recomputed alone. Only the ``wall_time_s`` column varies between runs.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import formats
from .learner import build_cost, learn_from_optima, learn_prediction, sample_optima
from .maxflow import max_flow
from .network import FlowNetwork, flow_value, violation_delta
from .oracles import brute_force_prediction
from .random_instances import layered_network, perturb_to_eta, random_network
from .sampler import (
    FiniteSupport,
    default_failure_prob,
    draw_samples,
    empirical_cost,
    expected_cost,
    hoeffding_sample_count,
    make_rng,
)
from .errors import UnsupportedError
from .warmstart import RACE_QUANTUM, robust_race, warm_start_max_flow

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
K_CAP = 50_000
DEFAULT_LADDER = (0, 2, 5, 10, 20, 40, 80)

SCALING_COLUMNS = (
    "experiment", "seed", "eta_target", "trial", "instance", "variant",
    "eta", "delta", "repair_rounds", "repair_units", "value_drop",
    "step2_units", "step2_augmentations", "warm_work", "cold_units",
    "cold_work", "race_winner", "race_work", "ok", "note", "wall_time_s",
)
EXACTNESS_COLUMNS = (
    "experiment", "seed", "trial", "nodes", "edges", "k", "objective",
    "brute_objective", "l1_norm", "norm_bound", "median_ok", "ok", "note",
    "wall_time_s",
)
GENERALIZATION_COLUMNS = (
    "experiment", "seed", "rep", "instance", "k", "k_formula", "k_capped",
    "p", "sample_cost", "cost_learned", "cost_best", "gap", "gap_ok",
    "deviation", "deviation_ok", "prediction", "ok", "wall_time_s",
)


def schema(experiment: str) -> str:
    return f"{experiment} v{SCHEMA_VERSION}"


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _map(fn, jobs: Sequence, workers: int) -> list:
    # results come back in job order whatever the completion order
    if workers <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*jobs)))


# warm-start work scaling

def default_scaling_network(seed: int) -> FlowNetwork:
    return layered_network(make_rng([seed, 0xD1A]), layers=2, width=3)


def _scaling_trial(network: FlowNetwork, instance: str, seed: int, target: int,
                   trial: int, variant: str, strict_units: bool) -> dict:
    t0 = time.perf_counter()
    rng = make_rng([seed, target, trial])
    row = dict.fromkeys(SCALING_COLUMNS, "")
    row.update(experiment="exp-scaling", seed=seed, eta_target=target, trial=trial,
               instance=instance, variant=variant)
    optimum, cold = max_flow(network)
    made = perturb_to_eta(rng, network, optimum, target)
    if made is None:
        row.update(ok=True, note="skipped: target unreachable",
                   wall_time_s=f"{time.perf_counter() - t0:.6f}")
        return row
    prediction, eta = made
    delta = violation_delta(network, prediction)
    flow, rep = warm_start_max_flow(network, prediction, variant, strict_units,
                                    reference=optimum)
    race = robust_race(network, prediction, variant, strict_units)
    problems = []
    if rep.final_value != flow_value(network, optimum):
        problems.append("value mismatch")
    if rep.repair.rounds > delta:
        problems.append("rounds > delta")
    if rep.value_before_repair - rep.value_after_repair > delta:
        problems.append("value drop > delta")
    if rep.step2_stats.units_pushed > eta + delta:
        problems.append("step2 units > eta + delta")
    if race.total_work > 2 * min(rep.total_work, cold.arcs_scanned) + RACE_QUANTUM:
        problems.append("race overhead")
    row.update(
        eta=eta, delta=delta, repair_rounds=rep.repair.rounds,
        repair_units=rep.repair.units,
        value_drop=rep.value_before_repair - rep.value_after_repair,
        step2_units=rep.step2_stats.units_pushed,
        step2_augmentations=rep.step2_stats.augmentation_count,
        warm_work=rep.total_work, cold_units=cold.units_pushed,
        cold_work=cold.arcs_scanned, race_winner=race.winner,
        race_work=race.total_work, ok=not problems, note="; ".join(problems),
        wall_time_s=f"{time.perf_counter() - t0:.6f}",
    )
    return row


def exp_warmstart_scaling(
    network: FlowNetwork,
    ladder: Sequence[int] = DEFAULT_LADDER,
    trials: int = 10,
    seed: int = 0,
    variant: str = "cancel",
    strict_units: bool = False,
    instance: str = "instance",
    workers: int = 1,
) -> list[dict]:
    """Warm-start work against prediction error.

    For each target error and trial, perturb a computed optimum into a
    conserving prediction at roughly that l1 error, solve warm, and check
    rounds <= delta and step-2 units <= eta + delta.
    """
    jobs = [(network, instance, seed, target, trial, variant, strict_units)
            for target in ladder for trial in range(trials)]
    return _map(_scaling_trial, jobs, workers)


def linear_envelope_offset(rows: Sequence[dict], slope: int = 3) -> int | None:
    """Smallest c0 with repair_rounds + step2_units <= slope * eta + c0 on all rows."""
    done = [r for r in rows if r["eta"] != ""]
    if not done:
        return None
    return max(int(r["repair_rounds"]) + int(r["step2_units"]) - slope * int(r["eta"])
               for r in done)


# learner exactness

def _exactness_trial(seed: int, trial: int, max_edges: int, max_cap: int,
                     max_k: int, single_edge_every: int) -> dict:
    t0 = time.perf_counter()
    rng = make_rng([seed, trial])
    single = single_edge_every > 0 and trial % single_edge_every == 0
    if single:
        network = FlowNetwork(2, ((0, 1),), 0, 1, (max_cap,))
    else:
        network = random_network(rng, max_nodes=4, max_edges=max_edges, max_cap=max_cap,
                                 min_edges=min(3, max_edges))
    k = int(rng.integers(1, max_k + 1))
    samples = [tuple(int(x) for x in rng.integers(0, max_cap + 1, size=network.edge_count))
               for _ in range(k)]
    fhat, obj = learn_prediction(network, samples)
    optima = sample_optima(network, samples)
    _, brute = brute_force_prediction(network, optima)
    c_max = max((max(c, default=0) for c in samples), default=0)
    bound = 2 * c_max * network.edge_count
    median_ok = ""
    if single:
        cost = build_cost([o[0] for o in optima])
        median_ok = cost(fhat[0]) == cost.minimum()
    problems = []
    if obj != brute:
        problems.append("objective differs from brute force")
    if sum(fhat) > bound:
        problems.append("norm bound")
    if median_ok is False:
        problems.append("not a weighted median")
    if k == 1 and obj != 0:
        problems.append("k=1 objective nonzero")
    return dict(
        experiment="exp-exactness", seed=seed, trial=trial,
        nodes=network.node_count, edges=network.edge_count, k=k,
        objective=_frac(obj), brute_objective=_frac(brute), l1_norm=sum(fhat),
        norm_bound=bound, median_ok=median_ok, ok=not problems,
        note="; ".join(problems), wall_time_s=f"{time.perf_counter() - t0:.6f}",
    )


def exp_learner_exactness(trials: int = 500, seed: int = 0, max_edges: int = 6,
                          max_cap: int = 3, max_k: int = 4, single_edge_every: int = 10,
                          workers: int = 1) -> list[dict]:
    """Learner objective against exhaustive search on tiny random instances.

    Every ``single_edge_every``-th trial uses a one-edge network, where the
    learned value must be a weighted median of the sample values.
    """
    jobs = [(seed, t, max_edges, max_cap, max_k, single_edge_every) for t in range(trials)]
    return _map(_exactness_trial, jobs, workers)


# generalization

def default_distribution() -> tuple[FlowNetwork, FiniteSupport]:
    """Five-edge diamond (s, a, b, t; a->b cross edge) with a four-point
    capacity distribution, c_max = 3."""
    network = FlowNetwork(4, ((0, 1), (0, 2), (1, 3), (2, 3), (1, 2)), 0, 3, (3, 3, 3, 3, 3))
    dist = FiniteSupport(
        vectors=((3, 3, 3, 3, 1), (3, 1, 1, 3, 2), (1, 3, 3, 1, 0), (2, 2, 0, 3, 3)),
        probabilities=(Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 8)),
        c_max=3,
    )
    return network, dist


def exp_generalization(
    network: FlowNetwork,
    dist: FiniteSupport,
    reps: int = 20,
    seed: int = 0,
    k: int | None = None,
    p: float | None = None,
    k_cap: int = K_CAP,
    instance: str = "instance",
) -> list[dict]:
    """Expected error of the sample-optimal prediction versus the exact
    distribution optimum.

    ``k`` defaults to ``hoeffding_sample_count`` capped at ``k_cap``. Each
    rep checks gap <= 2 and |sample cost - expected cost| <= 1, exactly.
    """
    if not isinstance(dist, FiniteSupport):
        raise UnsupportedError("exp_generalization needs a finite-support distribution")
    m = network.edge_count
    if p is None:
        p = default_failure_prob(dist.c_max, m)
    k_formula = hoeffding_sample_count(dist.c_max, m, p)
    capped = k is None and k_formula > k_cap
    if k is None:
        k = min(k_formula, k_cap)
        if capped:
            log.warning("formula sample count %d capped at %d", k_formula, k_cap)
    support_optima = sample_optima(network, dist.vectors)
    ftilde, best = learn_from_optima(network, support_optima, dist.probabilities)
    if best != expected_cost(dist, ftilde, support_optima):
        raise AssertionError("weighted objective disagrees with expected cost")
    rows = []
    for rep in range(reps):
        t0 = time.perf_counter()
        rng = make_rng([seed, rep])
        samples = draw_samples(dist, rng, k)
        optima = sample_optima(network, samples)
        fhat, sample_cost = learn_from_optima(network, optima)
        if sample_cost != empirical_cost(fhat, optima):
            raise AssertionError("learner objective disagrees with sample cost")
        learned = expected_cost(dist, fhat, support_optima)
        gap = learned - best
        dev = abs(sample_cost - learned)
        rows.append(dict(
            experiment="exp-generalization", seed=seed, rep=rep, instance=instance,
            k=k, k_formula=k_formula, k_capped=capped, p=f"{p:.6g}",
            sample_cost=_frac(sample_cost), cost_learned=_frac(learned),
            cost_best=_frac(best), gap=_frac(gap), gap_ok=gap <= 2,
            deviation=_frac(dev), deviation_ok=dev <= 1,
            prediction=" ".join(map(str, fhat)), ok=gap <= 2 and dev <= 1,
            wall_time_s=f"{time.perf_counter() - t0:.6f}",
        ))
    return rows


def write_rows(rows: Sequence[dict], experiment: str, out) -> None:
    columns = {
        "exp-scaling": SCALING_COLUMNS,
        "exp-exactness": EXACTNESS_COLUMNS,
        "exp-generalization": GENERALIZATION_COLUMNS,
    }[experiment]
    formats.write_csv(rows, columns, out, schema=schema(experiment))


def all_ok(rows: Sequence[dict]) -> bool:
    return all(r["ok"] in (True, "True") for r in rows)
