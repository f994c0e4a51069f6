"""Capacity distributions with draw access, exact expected cost for finite
supports, and the union-bound sample count.

Randomness comes from numpy's PCG64 bit generator. Seeds are plain ints;
independent streams for parallel trials are derived with
``numpy.random.SeedSequence`` spawning.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError, ParseError, UnsupportedError
from .network import FlowAssignment, l1_error


def make_rng(seed: int | Sequence[int] | np.random.SeedSequence) -> np.random.Generator:
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class FiniteSupport:
    vectors: tuple[tuple[int, ...], ...]
    probabilities: tuple[Fraction, ...]
    c_max: int

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(tuple(int(x) for x in v) for v in self.vectors))
        object.__setattr__(self, "probabilities", tuple(Fraction(p) for p in self.probabilities))
        if not self.vectors:
            raise InputError("empty support")
        if len(self.vectors) != len(self.probabilities):
            raise InputError("one probability per support vector is required")
        if any(p <= 0 for p in self.probabilities) or sum(self.probabilities) != 1:
            raise InputError("probabilities must be positive and sum to 1")
        width = {len(v) for v in self.vectors}
        if len(width) != 1:
            raise InputError("support vectors differ in length")
        _check_bound(self.vectors, self.c_max)

    @property
    def edge_count(self) -> int:
        return len(self.vectors[0])

    def draw_many(self, rng: np.random.Generator, count: int) -> list[tuple[int, ...]]:
        p = np.array([float(x) for x in self.probabilities])
        idx = rng.choice(len(self.vectors), size=count, p=p / p.sum())
        return [self.vectors[i] for i in idx]


@dataclass(frozen=True)
class IIDUniform:
    """Each edge capacity uniform on the integers [lo_e, hi_e], independently."""

    lo: tuple[int, ...]
    hi: tuple[int, ...]
    c_max: int

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise InputError("lo and hi differ in length")
        if any(a < 0 or a > b for a, b in zip(self.lo, self.hi)):
            raise InputError("need 0 <= lo <= hi on every edge")
        _check_bound([self.hi], self.c_max)

    @property
    def edge_count(self) -> int:
        return len(self.lo)

    def draw_many(self, rng: np.random.Generator, count: int) -> list[tuple[int, ...]]:
        arr = rng.integers(np.array(self.lo), np.array(self.hi) + 1,
                           size=(count, len(self.lo)))
        return [tuple(int(x) for x in row) for row in arr]


@dataclass(frozen=True)
class PerturbedBase:
    """Base capacities plus an independent uniform integer offset in
    [-spread, spread] per edge, truncated at 0."""

    base: tuple[int, ...]
    spread: int
    c_max: int

    def __post_init__(self):
        if self.spread < 0 or any(b < 0 for b in self.base):
            raise InputError("base and spread must be nonnegative")
        _check_bound([[b + self.spread for b in self.base]], self.c_max)

    @property
    def edge_count(self) -> int:
        return len(self.base)

    def draw_many(self, rng: np.random.Generator, count: int) -> list[tuple[int, ...]]:
        off = rng.integers(-self.spread, self.spread + 1, size=(count, len(self.base)))
        arr = np.maximum(np.array(self.base) + off, 0)
        return [tuple(int(x) for x in row) for row in arr]


CapacityDistribution = FiniteSupport | IIDUniform | PerturbedBase


def _check_bound(vectors, c_max: int) -> None:
    if c_max < 0:
        raise InputError("c_max must be nonnegative")
    for v in vectors:
        if any(x > c_max for x in v):
            raise InputError(f"capacity vector {tuple(v)} exceeds c_max={c_max}")


def draw(dist: CapacityDistribution, rng: np.random.Generator) -> tuple[int, ...]:
    """One capacity vector."""
    return draw_samples(dist, rng, 1)[0]


def draw_samples(dist: CapacityDistribution, rng: np.random.Generator,
                 count: int) -> list[tuple[int, ...]]:
    out = dist.draw_many(rng, count)
    for v in out:
        if max(v, default=0) > dist.c_max:
            raise AssertionError(f"draw {v} exceeds c_max={dist.c_max}")
    return out


def expected_cost(dist: CapacityDistribution, f: Sequence[int],
                  optima: Sequence[FlowAssignment]) -> Fraction:
    """Exact expected l1 distance from ``f`` to the optimum of a drawn instance.

    ``optima[i]`` is the maximum flow used for support vector ``i``.
    """
    if not isinstance(dist, FiniteSupport):
        raise UnsupportedError("exact expected cost needs a finite-support distribution")
    if len(optima) != len(dist.vectors):
        raise InputError("one optimum per support vector is required")
    return sum((p * l1_error(f, opt) for p, opt in zip(dist.probabilities, optima)),
               Fraction(0))


def empirical_cost(f: Sequence[int], optima: Sequence[FlowAssignment]) -> Fraction:
    """Mean l1 distance from ``f`` to a list of sample optima."""
    if not optima:
        raise InputError("no samples")
    return Fraction(sum(l1_error(f, opt) for opt in optima), len(optima))


def default_failure_prob(c_max: int, edge_count: int) -> float:
    return 1.0 / (c_max * edge_count + 2) ** 2


def hoeffding_sample_count(c_max: int, edge_count: int, p: float | None = None) -> int:
    """Samples guaranteeing, with probability at least 1 - p, that the sample
    cost is within 1 of the expected cost for every candidate prediction.

    Each per-sample term lies in [0, 3 c_max |E| / k]; Hoeffding with
    deviation 1 and a union bound over (2 c_max |E| + 1)^|E| candidates
    give

        k = ceil(9/2 * c_max^2 |E|^2 * (|E| ln(2 c_max |E| + 1) + ln(2/p))),

    floored at 1. ``p`` defaults to 1 / (c_max |E| + 2)^2.
    """
    if edge_count < 1:
        raise InputError("edge_count must be at least 1")
    if c_max < 0:
        raise InputError("c_max must be nonnegative")
    if p is None:
        p = default_failure_prob(c_max, edge_count)
    if not 0 < p < 1:
        raise InputError(f"failure probability {p} not in (0, 1)")
    m = edge_count
    k = math.ceil(4.5 * c_max**2 * m**2 * (m * math.log(2 * c_max * m + 1) + math.log(2 / p)))
    return max(k, 1)


def pseudo_dimension_sample_count(c_max: int, edge_count: int, p: float | None = None) -> int:
    """Variant with an extra ln|E| factor, valid for fractional predictions.

    Not used by default; integral predictions only need
    ``hoeffding_sample_count``.
    """
    base = hoeffding_sample_count(c_max, edge_count, p)
    return max(base, math.ceil(base * max(math.log(edge_count), 1.0)))


# Distribution files.
#
#   c <comment>
#   d finite <edges> <c_max>      then one "v <prob> <cap_1> ... <cap_m>" per vector,
#                                 prob written as an integer or "num/den"
#   d uniform <edges> <c_max>     then one "r <lo> <hi>" per edge
#   d perturbed <edges> <c_max> <spread>   then one "b <cap_1> ... <cap_m>" line

def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        vals = [int(x) for x in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None
    if any(v < 0 for v in vals):
        raise ParseError("negative value", lineno)
    return vals


def parse_distribution(text: str) -> CapacityDistribution:
    header = None
    vectors: list[tuple[int, ...]] = []
    probs: list[Fraction] = []
    ranges: list[tuple[int, int]] = []
    base: list[int] | None = None
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        kind = tok[0]
        if kind == "d":
            if header is not None:
                raise ParseError("duplicate 'd' line", lineno)
            if len(tok) < 4 or tok[1] not in ("finite", "uniform", "perturbed"):
                raise ParseError("expected 'd finite|uniform|perturbed <edges> <c_max>'", lineno)
            want = 5 if tok[1] == "perturbed" else 4
            if len(tok) != want:
                raise ParseError(f"'d {tok[1]}' takes {want - 1} fields", lineno)
            header = (tok[1], *_ints(tok[2:], lineno))
            continue
        if header is None:
            raise ParseError("data before 'd' line", lineno)
        m = header[1]
        if kind == "v" and header[0] == "finite":
            if len(tok) != m + 2:
                raise ParseError(f"expected probability and {m} capacities", lineno)
            try:
                prob = Fraction(tok[1])
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad probability {tok[1]!r}", lineno) from None
            probs.append(prob)
            vectors.append(tuple(_ints(tok[2:], lineno)))
        elif kind == "r" and header[0] == "uniform":
            if len(tok) != 3:
                raise ParseError("expected 'r <lo> <hi>'", lineno)
            lo, hi = _ints(tok[1:], lineno)
            ranges.append((lo, hi))
        elif kind == "b" and header[0] == "perturbed":
            if base is not None:
                raise ParseError("duplicate 'b' line", lineno)
            if len(tok) != m + 1:
                raise ParseError(f"expected {m} base capacities", lineno)
            base = _ints(tok[1:], lineno)
        else:
            raise ParseError(f"unexpected line type {kind!r}", lineno)
    if header is None:
        raise ParseError("missing 'd' line", lineno + 1)
    kind, m, c_max = header[0], header[1], header[2]
    end = lineno + 1
    try:
        if kind == "finite":
            return FiniteSupport(tuple(vectors), tuple(probs), c_max)
        if kind == "uniform":
            if len(ranges) != m:
                raise ParseError(f"expected {m} 'r' lines, got {len(ranges)}", end)
            return IIDUniform(tuple(r[0] for r in ranges), tuple(r[1] for r in ranges), c_max)
        if base is None:
            raise ParseError("missing 'b' line", end)
        return PerturbedBase(tuple(base), header[3], c_max)
    except ParseError:
        raise
    except InputError as exc:
        raise ParseError(str(exc), end) from None


def serialize_distribution(dist: CapacityDistribution) -> str:
    lines = []
    if isinstance(dist, FiniteSupport):
        lines.append(f"d finite {dist.edge_count} {dist.c_max}")
        for p, v in zip(dist.probabilities, dist.vectors):
            lines.append(" ".join(["v", str(p), *map(str, v)]))
    elif isinstance(dist, IIDUniform):
        lines.append(f"d uniform {dist.edge_count} {dist.c_max}")
        lines.extend(f"r {a} {b}" for a, b in zip(dist.lo, dist.hi))
    else:
        lines.append(f"d perturbed {dist.edge_count} {dist.c_max} {dist.spread}")
        lines.append(" ".join(["b", *map(str, dist.base)]))
    return "\n".join(lines) + "\n"
