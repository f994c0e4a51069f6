import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from predflow import (
    FlowNetwork,
    InputError,
    check_conservation,
    decompose,
    flow_value,
    l1_error,
    violation_delta,
)
from predflow.network import INT64_MAX, is_feasible
from predflow.oracles import conserves_dense

from conftest import networks, networks_with_prediction


def test_conservation_examples(diamond):
    assert check_conservation(diamond, (0,) * 5)
    assert check_conservation(diamond, (1, 0, 1, 0, 0))
    assert not check_conservation(diamond, (1, 0, 0, 0, 0))


def test_flow_value_examples(diamond, single_edge):
    assert flow_value(diamond, (0,) * 5) == 0
    assert flow_value(diamond, (1, 1, 1, 1, 0)) == 2
    assert flow_value(single_edge, (7,)) == 7


def test_flow_value_subtracts_source_inflow():
    net = FlowNetwork(3, ((0, 1), (1, 0), (1, 2)), 0, 2, (5, 5, 5))
    assert flow_value(net, (3, 1, 2)) == 2


@pytest.mark.parametrize("f, g, expected", [
    ((2, 2), (2, 2), 0),
    ((3, 0), (1, 2), 4),
    ((0, 0, 0), (1, 1, 1), 3),
])
def test_l1_error_examples(f, g, expected):
    assert l1_error(f, g) == expected


def test_violation_delta_examples():
    two = FlowNetwork(3, ((0, 1), (1, 2)), 0, 2, (1, 1))
    assert violation_delta(two, (1, 1)) == 0
    assert violation_delta(two, (3, 2)) == 3
    one = FlowNetwork(2, ((0, 1),), 0, 1, (5,))
    assert violation_delta(one, (5,)) == 0


def test_length_mismatch_is_input_error(diamond):
    for fn in (check_conservation, flow_value, violation_delta):
        with pytest.raises(InputError):
            fn(diamond, (0, 0))
    with pytest.raises(InputError):
        l1_error((1,), (1, 2))


def test_negative_flow_rejected(diamond):
    with pytest.raises(InputError):
        flow_value(diamond, (-1, 0, 0, 0, 0))


@pytest.mark.parametrize("kwargs", [
    dict(node_count=2, edges=((0, 1),), source=0, sink=0),
    dict(node_count=2, edges=((0, 0),), source=0, sink=1),
    dict(node_count=2, edges=((0, 2),), source=0, sink=1),
    dict(node_count=2, edges=((0, 1),), source=0, sink=1, capacities=(-1,)),
    dict(node_count=2, edges=((0, 1),), source=0, sink=1, capacities=(1, 2)),
])
def test_network_invariants(kwargs):
    with pytest.raises(InputError):
        FlowNetwork(**kwargs)


def test_overflow_is_an_error():
    net = FlowNetwork(3, ((0, 1), (0, 1)), 0, 1, (0, 0))
    with pytest.raises(OverflowError):
        flow_value(net, (INT64_MAX, INT64_MAX))
    with pytest.raises(OverflowError):
        FlowNetwork(2, ((0, 1),), 0, 1, (INT64_MAX + 1,))


def test_decompose_examples(diamond):
    assert len(decompose(diamond, (0,) * 5)) == 0
    path = FlowNetwork(3, ((0, 1), (1, 2)), 0, 2, (5, 5))
    d = decompose(path, (2, 2))
    assert d.paths == ((0, 1),) and d.path_multiplicities == (2,) and not d.cycles
    d = decompose(diamond, (1, 1, 1, 1, 0))
    assert set(d.paths) == {(0, 2), (1, 3)}
    assert d.path_multiplicities == (1, 1)


def test_decompose_rejects_nonconserving(diamond):
    with pytest.raises(InputError):
        decompose(diamond, (1, 0, 0, 0, 0))


def test_decompose_cycle():
    # s->a->t plus cycle a->b->c->a
    net = FlowNetwork(5, ((0, 1), (1, 2), (2, 3), (3, 1), (1, 4)), 0, 4)
    d = decompose(net, (1, 2, 2, 2, 1))
    assert d.reconstruct(5) == (1, 2, 2, 2, 1)
    assert len(d.cycles) == 1 and set(d.cycles[0]) == {1, 2, 3}


def _is_simple(net, member, closed):
    nodes = [net.edges[member[0]][0]] + [net.edges[e][1] for e in member]
    for a, b in zip(member, member[1:]):
        assert net.edges[a][1] == net.edges[b][0]
    if closed:
        return nodes[0] == nodes[-1] and len(set(nodes[:-1])) == len(nodes) - 1
    return len(set(nodes)) == len(nodes)


@settings(max_examples=300)
@given(networks_with_prediction())
def test_decompose_reconstructs(case):
    net, f = case
    try:
        d = decompose(net, f)
    except InputError:
        # only sink-to-source flow may be rejected
        assert flow_value(net, f) < 0 or net.in_edges[net.source] or net.out_edges[net.sink]
        return
    assert d.reconstruct(net.edge_count) == f
    assert len(d) <= net.edge_count
    for p in d.paths:
        assert net.edges[p[0]][0] == net.source and net.edges[p[-1]][1] == net.sink
        assert _is_simple(net, p, closed=False)
    for c in d.cycles:
        assert _is_simple(net, c, closed=True)
    assert all(k > 0 for k in d.path_multiplicities + d.cycle_multiplicities)


@settings(max_examples=300)
@given(networks(), st.data())
def test_conservation_matches_dense_oracle(net, data):
    f = data.draw(st.lists(st.integers(0, 4), min_size=net.edge_count,
                           max_size=net.edge_count))
    assert check_conservation(net, f) == conserves_dense(net, f)


@given(networks_with_prediction())
def test_generated_predictions_conserve(case):
    net, f = case
    assert conserves_dense(net, f)


vec = st.lists(st.integers(0, 50), min_size=6, max_size=6)


@given(vec, vec, vec)
def test_l1_is_a_metric(a, b, c):
    assert l1_error(a, b) == l1_error(b, a)
    assert l1_error(a, c) <= l1_error(a, b) + l1_error(b, c)
    assert (l1_error(a, b) == 0) == (a == b)


@given(networks(), st.data())
def test_delta_zero_iff_feasible(net, data):
    f = data.draw(st.lists(st.integers(0, 8), min_size=net.edge_count,
                           max_size=net.edge_count))
    assert (violation_delta(net, f) == 0) == bool(np.all(np.array(f) <= np.array(net.capacities)))
    assert (violation_delta(net, f) == 0) == is_feasible(net, f)
