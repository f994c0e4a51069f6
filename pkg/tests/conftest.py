from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from predflow import FlowNetwork
from predflow.random_instances import random_conserving_flow
from predflow.sampler import make_rng

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def diamond():
    # s=0, a=1, b=2, t=3; edges s->a, s->b, a->t, b->t, a->b
    return FlowNetwork(4, ((0, 1), (0, 2), (1, 3), (2, 3), (1, 2)), 0, 3, (2, 2, 2, 2, 1))


@pytest.fixture
def single_edge():
    return FlowNetwork(2, ((0, 1),), 0, 1, (5,))


@st.composite
def networks(draw, max_nodes=8, max_edges=14, max_cap=6):
    n = draw(st.integers(2, max_nodes))
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(
        lambda p: p[0] != p[1]
    )
    edges = draw(st.lists(pairs, max_size=max_edges))
    caps = draw(st.lists(st.integers(0, max_cap), min_size=len(edges), max_size=len(edges)))
    s = draw(st.integers(0, n - 1))
    t = draw(st.integers(0, n - 1).filter(lambda x: x != s))
    return FlowNetwork(n, tuple(edges), s, t, tuple(caps))


@st.composite
def networks_with_prediction(draw, **kw):
    net = draw(networks(**kw))
    seed = draw(st.integers(0, 2**32 - 1))
    return net, random_conserving_flow(make_rng(seed), net)
