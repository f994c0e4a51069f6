"""Learning a prediction from sampled instances, then checking how well it
generalizes.

Capacities are drawn from a small distribution over one fixed graph. The
learner returns the conserving integral flow closest, on average in l1,
to the samples' maximum flows. With a finite-support distribution the
expected error can be computed exactly, so the learned prediction can be
compared with the true best one.
"""

from predflow import (
    expected_cost,
    hoeffding_sample_count,
    learn_from_optima,
    learn_prediction,
    make_rng,
    sample_optima,
    warm_start_max_flow,
)
from predflow.experiments import default_distribution
from predflow.learner import build_cost
from predflow.sampler import draw_samples

net, dist = default_distribution()
print("support vectors and probabilities:")
for v, p in zip(dist.vectors, dist.probabilities):
    print(f"  {v}  p={p}")

support_optima = sample_optima(net, dist.vectors)

# each edge's cost is convex and piecewise linear in its flow value
edge0 = build_cost([o[0] for o in support_optima], dist.probabilities)
print()
print("edge 0 cost at 0..3:", [str(edge0(x)) for x in range(4)])

# the exact best prediction weights the support by its probabilities
best, best_cost = learn_from_optima(net, support_optima, dist.probabilities)
print(f"best prediction {best}, expected error {best_cost}")

# how many samples does the union bound ask for?
k = hoeffding_sample_count(dist.c_max, net.edge_count)
print()
print(f"sample count for c_max={dist.c_max}, |E|={net.edge_count}: k={k}")

for n in (5, 50, k):
    samples = draw_samples(dist, make_rng([11, n]), n)
    fhat, sample_cost = learn_prediction(net, samples)
    true_cost = expected_cost(dist, fhat, support_optima)
    print(f"  {n:>6} samples: f_hat={fhat} sample error {float(sample_cost):.3f}, "
          f"expected error {true_cost} (gap {true_cost - best_cost})")

# a learned prediction is a warm start for every future instance
samples = draw_samples(dist, make_rng(3), 4)
for caps in samples:
    inst = net.with_capacities(caps)
    _, rep = warm_start_max_flow(inst, fhat)
    print(f"capacities {caps}: value {rep.final_value}, warm work {rep.total_work}")
