"""Text formats for networks, flows and capacity samples.

Network files use DIMACS max-flow syntax with 1-based node ids::

    c optional comment
    p max <nodes> <arcs>
    n <id> s
    n <id> t
    a <tail> <head> <capacity>

Flow files bind to an instance by name and arc count; edge indices are
0-based and follow the instance's arc order::

    f <instance-name> <arcs>
    e <edge-index> <value>

Capacity files hold one sample, ``k <index>`` followed by one capacity per
line in arc order. A sample directory holds ``instance.max`` plus
``sample_<index>.cap`` files.

Every parse error is a ``ParseError`` carrying a 1-based line number.
"""

from __future__ import annotations

import csv
import io
import os
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path

from .errors import BindingError, InputError, ParseError
from .network import FlowAssignment, FlowNetwork

INSTANCE_FILE = "instance.max"


def _int(token: str, lineno: int, what: str, minimum: int = 0) -> int:
    try:
        v = int(token)
    except ValueError:
        raise ParseError(f"{what} {token!r} is not an integer", lineno) from None
    if v < minimum:
        raise ParseError(f"{what} {v} is below {minimum}", lineno)
    return v


def parse_network(text: str) -> FlowNetwork:
    n = m = None
    source = sink = None
    edges: list[tuple[int, int]] = []
    caps: list[int] = []
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        kind = tok[0]
        if kind == "p":
            if n is not None:
                raise ParseError("duplicate problem line", lineno)
            if len(tok) != 4 or tok[1] != "max":
                raise ParseError("expected 'p max <nodes> <arcs>'", lineno)
            n = _int(tok[2], lineno, "node count", 1)
            m = _int(tok[3], lineno, "arc count")
            continue
        if n is None:
            raise ParseError(f"{kind!r} line before problem line", lineno)
        if kind == "n":
            if len(tok) != 3 or tok[2] not in ("s", "t"):
                raise ParseError("expected 'n <id> s|t'", lineno)
            v = _int(tok[1], lineno, "node id", 1)
            if v > n:
                raise ParseError(f"node id {v} out of range 1..{n}", lineno)
            if tok[2] == "s":
                if source is not None:
                    raise ParseError("duplicate source declaration", lineno)
                source = v - 1
            else:
                if sink is not None:
                    raise ParseError("duplicate sink declaration", lineno)
                sink = v - 1
        elif kind == "a":
            if len(tok) != 4:
                raise ParseError("expected 'a <tail> <head> <capacity>'", lineno)
            u = _int(tok[1], lineno, "node id", 1)
            v = _int(tok[2], lineno, "node id", 1)
            for x in (u, v):
                if x > n:
                    raise ParseError(f"node id {x} out of range 1..{n}", lineno)
            if u == v:
                raise ParseError(f"self-loop on node {u}", lineno)
            caps.append(_int(tok[3], lineno, "capacity"))
            edges.append((u - 1, v - 1))
            if len(edges) > m:
                raise ParseError(f"more than the declared {m} arcs", lineno)
        else:
            raise ParseError(f"unknown line type {kind!r}", lineno)
    end = lineno + 1
    if n is None:
        raise ParseError("missing problem line", end)
    if len(edges) != m:
        raise ParseError(f"declared {m} arcs, found {len(edges)}", end)
    if source is None or sink is None:
        raise ParseError("missing source or sink declaration", end)
    if source == sink:
        raise ParseError("source and sink are the same node", end)
    try:
        return FlowNetwork(n, tuple(edges), source, sink, tuple(caps))
    except InputError as exc:
        raise ParseError(str(exc), end) from None


def serialize_network(network: FlowNetwork) -> str:
    lines = [
        f"p max {network.node_count} {network.edge_count}",
        f"n {network.source + 1} s",
        f"n {network.sink + 1} t",
    ]
    lines.extend(f"a {u + 1} {v + 1} {c}"
                 for (u, v), c in zip(network.edges, network.capacities))
    return "\n".join(lines) + "\n"


def parse_flow(text: str, network: FlowNetwork, name: str | None = None) -> FlowAssignment:
    """Read a flow file bound to ``network``.

    Values above capacity are accepted, since predictions may be
    infeasible. If ``name`` is given the header must name that instance.
    """
    header = None
    values: dict[int, int] = {}
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        if tok[0] == "f":
            if header is not None:
                raise ParseError("duplicate flow header", lineno)
            if len(tok) != 3:
                raise ParseError("expected 'f <instance-name> <arcs>'", lineno)
            arcs = _int(tok[2], lineno, "arc count")
            if name is not None and tok[1] != name:
                raise BindingError(f"flow is for instance {tok[1]!r}, not {name!r}", lineno)
            if arcs != network.edge_count:
                raise BindingError(
                    f"flow declares {arcs} arcs, network has {network.edge_count}", lineno
                )
            header = tok[1]
        elif tok[0] == "e":
            if header is None:
                raise ParseError("edge record before flow header", lineno)
            if len(tok) != 3:
                raise ParseError("expected 'e <edge-index> <value>'", lineno)
            idx = _int(tok[1], lineno, "edge index")
            if idx >= network.edge_count:
                raise BindingError(f"edge index {idx} out of range", lineno)
            if idx in values:
                raise ParseError(f"duplicate record for edge {idx}", lineno)
            values[idx] = _int(tok[2], lineno, "flow value")
        else:
            raise ParseError(f"unknown line type {tok[0]!r}", lineno)
    end = lineno + 1
    if header is None:
        raise ParseError("missing flow header", end)
    if len(values) != network.edge_count:
        raise BindingError(
            f"{len(values)} edge records for {network.edge_count} arcs", end
        )
    return tuple(values[i] for i in range(network.edge_count))


def serialize_flow(f: Sequence[int], network: FlowNetwork, name: str = "instance") -> str:
    if len(f) != network.edge_count:
        raise InputError(f"flow has {len(f)} entries, network has {network.edge_count} edges")
    if not name or any(ch.isspace() for ch in name):
        raise InputError(f"instance name {name!r} must be a nonempty token")
    lines = [f"f {name} {network.edge_count}"]
    lines.extend(f"e {i} {x}" for i, x in enumerate(f))
    return "\n".join(lines) + "\n"


def parse_capacities(text: str, network: FlowNetwork) -> tuple[int, tuple[int, ...]]:
    """Read one capacity sample; returns (sample index, capacities)."""
    index = None
    caps: list[int] = []
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        if tok[0] == "k":
            if index is not None:
                raise ParseError("duplicate sample header", lineno)
            if len(tok) != 2:
                raise ParseError("expected 'k <index>'", lineno)
            index = _int(tok[1], lineno, "sample index")
        elif index is None:
            raise ParseError("capacity before sample header", lineno)
        elif len(tok) != 1:
            raise ParseError("expected one capacity per line", lineno)
        else:
            caps.append(_int(tok[0], lineno, "capacity"))
            if len(caps) > network.edge_count:
                raise BindingError(f"more than {network.edge_count} capacities", lineno)
    if index is None:
        raise ParseError("missing sample header", lineno + 1)
    if len(caps) != network.edge_count:
        raise BindingError(
            f"{len(caps)} capacities for {network.edge_count} arcs", lineno + 1
        )
    return index, tuple(caps)


def serialize_capacities(index: int, capacities: Sequence[int]) -> str:
    return "\n".join([f"k {index}", *map(str, capacities)]) + "\n"


def write_sample_dir(path: str | os.PathLike, network: FlowNetwork,
                     samples: Iterable[Sequence[int]]) -> None:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    (path / INSTANCE_FILE).write_text(serialize_network(network))
    for i, caps in enumerate(samples):
        (path / f"sample_{i}.cap").write_text(serialize_capacities(i, caps))


def read_sample_dir(path: str | os.PathLike) -> tuple[FlowNetwork, list[tuple[int, ...]]]:
    """Network and samples ordered by their declared index."""
    path = Path(path)
    network = parse_network((path / INSTANCE_FILE).read_text())
    found = {}
    for p in sorted(path.glob("sample_*.cap")):
        idx, caps = parse_capacities(p.read_text(), network)
        if idx in found:
            raise InputError(f"{p.name}: duplicate sample index {idx}")
        found[idx] = caps
    return network, [found[i] for i in sorted(found)]


def write_csv(rows: Sequence[Mapping], columns: Sequence[str], out: io.TextIOBase,
              schema: str | None = None) -> None:
    """UTF-8 friendly, comma-separated, LF line endings, header row.

    ``schema``, if given, is written first as a ``# schema`` comment line.
    """
    if schema:
        out.write(f"# schema {schema}\n")
    writer = csv.DictWriter(out, fieldnames=list(columns), lineterminator="\n",
                            extrasaction="raise")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def read_csv(text: str) -> tuple[str | None, list[dict[str, str]]]:
    lines = text.splitlines(keepends=True)
    schema = None
    if lines and lines[0].startswith("# schema "):
        schema = lines[0][len("# schema "):].strip()
        lines = lines[1:]
    return schema, list(csv.DictReader(lines))
