"""Warm-starting max flow from a predicted flow.

A prediction that is close to an optimum should make the solver cheaper.
This walks through one network, a few predictions of growing error, and
prints how much work each warm start needs compared with a cold run.
"""

from predflow import (
    flow_value,
    l1_error,
    max_flow,
    robust_race,
    violation_delta,
    warm_start_max_flow,
)
from predflow.random_instances import layered_network, perturb_to_eta, random_member
from predflow.sampler import make_rng

rng = make_rng(7)
net = layered_network(rng, layers=3, width=4, max_cap=9)
print(f"network: {net.node_count} nodes, {net.edge_count} edges")

# the cold baseline: Edmonds-Karp from the zero flow
optimum, cold = max_flow(net)
print(f"cold solve: value {flow_value(net, optimum)}, "
      f"{cold.augmentation_count} augmentations, {cold.arcs_scanned} arc scans")

# predictions at increasing l1 distance from that optimum; each stays
# conserving but may exceed capacities
print()
print(f"{'eta':>4} {'delta':>5} {'rounds':>6} {'units':>5} {'warm work':>9}")
for target in (0, 4, 8, 16, 32, 64):
    made = perturb_to_eta(rng, net, optimum, target)
    if made is None:
        continue
    pred, eta = made
    flow, rep = warm_start_max_flow(net, pred, reference=optimum)
    assert rep.final_value == flow_value(net, optimum)
    print(f"{eta:>4} {violation_delta(net, pred):>5} {rep.repair.rounds:>6} "
          f"{rep.step2_stats.units_pushed:>5} {rep.total_work:>9}")

# the circulation variant repairs the prediction with one auxiliary max flow
pred, eta = perturb_to_eta(rng, net, optimum, 20)
_, cancel = warm_start_max_flow(net, pred, "cancel")
_, circ = warm_start_max_flow(net, pred, "circulation")
print()
print(f"eta {eta}: cancel variant work {cancel.total_work}, "
      f"circulation variant work {circ.total_work}")

# a terrible prediction: a huge circulation around a cycle of the network,
# cancelled one unit at a time. Racing warm against cold caps the damage.
cycle_pred = list(optimum)
walk = None
while walk is None:
    walk = random_member(rng, net, lambda e: True)
for e in walk:
    cycle_pred[e] += 3000
_, bad = warm_start_max_flow(net, cycle_pred, strict_units=True)
race = robust_race(net, cycle_pred, strict_units=True)
print()
print(f"bad prediction (eta {l1_error(cycle_pred, optimum)}): warm alone {bad.total_work}, "
      f"cold alone {cold.arcs_scanned}, race {race.total_work} won by {race.winner}")
