import io
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import predflow.errors as errors
from predflow import FlowNetwork, ParseError
from predflow.formats import (
    parse_capacities,
    parse_flow,
    parse_network,
    read_csv,
    read_sample_dir,
    serialize_capacities,
    serialize_flow,
    serialize_network,
    write_csv,
    write_sample_dir,
)

from conftest import networks

DATA = Path(__file__).parent / "data"


def bad_corpus():
    for line in (DATA / "bad" / "MANIFEST").read_text().splitlines():
        name, cls, lineno = line.split()
        yield name, getattr(errors, cls), int(lineno)


def test_parse_single_edge():
    net = parse_network("p max 2 1\nn 1 s\nn 2 t\na 1 2 5\n")
    assert net == FlowNetwork(2, ((0, 1),), 0, 1, (5,))


def test_parse_diamond_file(diamond):
    text = (DATA / "diamond.max").read_text()
    net = parse_network(text)
    assert net == diamond
    assert net.node_count == 4 and net.edge_count == 5
    # comment lines are not canonical; everything else round-trips
    assert serialize_network(net) == "".join(text.splitlines(keepends=True)[1:])


def test_parse_empty_edge_set():
    net = parse_network("p max 2 0\nn 1 s\nn 2 t\n")
    assert net.edge_count == 0
    assert serialize_network(net) == "p max 2 0\nn 1 s\nn 2 t\n"


def test_serialize_preserves_edge_order():
    net = FlowNetwork(3, ((1, 2), (0, 1), (0, 2)), 0, 2, (1, 2, 3))
    lines = serialize_network(net).splitlines()
    assert lines[3:] == ["a 2 3 1", "a 1 2 2", "a 1 3 3"]


def test_flow_round_trip_and_infeasible_values(diamond):
    zero = (0,) * 5
    assert parse_flow(serialize_flow(zero, diamond, "diamond"), diamond, "diamond") == zero
    over = (9, 0, 9, 0, 0)
    assert parse_flow(serialize_flow(over, diamond), diamond) == over


def test_flow_name_binding(diamond):
    text = serialize_flow((0,) * 5, diamond, "other")
    with pytest.raises(errors.BindingError):
        parse_flow(text, diamond, "diamond")


@pytest.mark.parametrize("name, cls, lineno", list(bad_corpus()))
def test_bad_corpus(diamond, name, cls, lineno):
    text = (DATA / "bad" / name).read_text()
    with pytest.raises(ParseError) as info:
        if name.endswith(".max"):
            parse_network(text)
        else:
            parse_flow(text, diamond)
    assert type(info.value) is cls
    assert info.value.lineno == lineno
    assert str(info.value).startswith(f"line {lineno}:")


def test_corpus_is_large_enough():
    assert len(list(bad_corpus())) >= 20


@settings(max_examples=200)
@given(networks(max_nodes=10, max_edges=20, max_cap=10**6))
def test_network_round_trip(net):
    text = serialize_network(net)
    assert parse_network(text) == net
    assert serialize_network(parse_network(text)) == text


@settings(max_examples=200)
@given(networks(), st.data())
def test_flow_round_trip(net, data):
    f = tuple(data.draw(st.lists(st.integers(0, 10**9), min_size=net.edge_count,
                                 max_size=net.edge_count)))
    text = serialize_flow(f, net, "x")
    assert parse_flow(text, net, "x") == f
    assert serialize_flow(parse_flow(text, net), net, "x") == text


def test_capacity_file(diamond):
    text = serialize_capacities(3, (1, 2, 3, 4, 5))
    assert text == "k 3\n1\n2\n3\n4\n5\n"
    assert parse_capacities(text, diamond) == (3, (1, 2, 3, 4, 5))
    with pytest.raises(errors.BindingError):
        parse_capacities("k 0\n1\n2\n", diamond)
    with pytest.raises(ParseError):
        parse_capacities("1\n", diamond)


def test_sample_dir_round_trip(tmp_path, diamond):
    samples = [(1, 2, 3, 4, 0), (0, 0, 0, 0, 0), (2, 2, 2, 2, 1)]
    write_sample_dir(tmp_path, diamond, samples)
    net, got = read_sample_dir(tmp_path)
    assert net == diamond and got == samples


def test_csv_schema_and_line_endings():
    buf = io.StringIO()
    write_csv([{"a": 1, "b": "x,y"}], ("a", "b"), buf, schema="demo v1")
    text = buf.getvalue()
    assert "\r" not in text
    assert text.splitlines()[:2] == ["# schema demo v1", "a,b"]
    assert read_csv(text) == ("demo v1", [{"a": "1", "b": "x,y"}])
