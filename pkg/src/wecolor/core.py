"""Instance model, exact weights, the text format, and instance statistics.

Weights are :class:`fractions.Fraction` throughout; a proper coloring allows a
per-color load of exactly one, so float rounding would change answers.
"""

from __future__ import annotations

import math
import os
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Weight = Fraction

HEADER = "wec v1"
DEFAULT_EXACT_LIMIT = 30
ONE = Fraction(1)
HALF = Fraction(1, 2)


class ParseError(ValueError):
    """Malformed instance text or weight."""


class StructureError(ValueError):
    """Input graph lacks the structure an algorithm requires."""


class OracleRefusal(RuntimeError):
    """An exact solver declined an input above its size limit."""


def exact_limit() -> int:
    """Item-count threshold for exact per-vertex packing (``WEC_EXACT_LIMIT``)."""
    raw = os.environ.get("WEC_EXACT_LIMIT")
    if raw is None:
        return DEFAULT_EXACT_LIMIT
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"WEC_EXACT_LIMIT must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError("WEC_EXACT_LIMIT must be positive")
    return value


def parse_weight(token: str) -> Fraction:
    """Parse a decimal (``0.6``) or ratio (``3/5``) into an exact weight in (0, 1]."""
    try:
        w = Fraction(token.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad weight {token!r}") from exc
    if not 0 < w <= 1:
        raise ParseError(f"weight {token} outside (0, 1]")
    return w


def format_weight(w: Fraction) -> str:
    return str(w)


@dataclass(frozen=True)
class WeightedEdge:
    u: str
    v: str
    weight: Fraction
    index: int

    def __post_init__(self) -> None:
        if self.u == self.v:
            raise ValueError(f"self-loop on vertex {self.u!r}")
        if not 0 < self.weight <= 1:
            raise ValueError(f"weight {self.weight} outside (0, 1]")

    def other(self, x: str) -> str:
        return self.v if x == self.u else self.u

    @property
    def pair(self) -> tuple[str, str]:
        """Endpoints in canonical (sorted) order."""
        return (self.u, self.v) if self.u <= self.v else (self.v, self.u)


@dataclass(frozen=True)
class Instance:
    """An edge stream; position in ``edges`` is the arrival order."""

    edges: tuple[WeightedEdge, ...]

    def __post_init__(self) -> None:
        seen = set()
        last = -1
        for e in self.edges:
            if e.index in seen:
                raise ValueError(f"duplicate arrival index {e.index}")
            if e.index < last:
                raise ValueError("edges must be sorted by arrival index")
            seen.add(e.index)
            last = e.index

    @classmethod
    def from_triples(cls, triples: Iterable[tuple[str, str, object]]) -> Instance:
        """Build from ``(u, v, weight)`` triples; weights may be strings or numbers."""
        edges = []
        for i, (u, v, w) in enumerate(triples):
            # str() keeps 0.6 as 3/5 rather than its binary float value
            weight = Fraction(w) if isinstance(w, (int, Fraction)) else Fraction(str(w))
            edges.append(WeightedEdge(str(u), str(v), weight, i))
        return cls(tuple(edges))

    @property
    def vertices(self) -> list[str]:
        out = set()
        for e in self.edges:
            out.add(e.u)
            out.add(e.v)
        return sorted(out)

    def __len__(self) -> int:
        return len(self.edges)

    def incident(self) -> dict[str, list[WeightedEdge]]:
        """Vertex -> incident edges in arrival order."""
        inc: dict[str, list[WeightedEdge]] = defaultdict(list)
        for e in self.edges:
            inc[e.u].append(e)
            inc[e.v].append(e)
        return dict(inc)

    def edge_by_index(self) -> dict[int, WeightedEdge]:
        return {e.index: e for e in self.edges}


def parse_instance(text: str) -> Instance:
    """Parse the line-oriented instance format.

    The ``wec v1`` header is accepted (and checked) when it is the first
    non-comment line but is not required. Arrival indices are assigned
    0, 1, 2, ... in line order. Errors carry the 1-based line number.
    """
    edges: list[WeightedEdge] = []
    header_allowed = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header_allowed and parts[0] == "wec":
            if line != HEADER:
                raise ParseError(f"unsupported header {line!r} at line {lineno}")
            header_allowed = False
            continue
        header_allowed = False
        if parts[0] != "edge" or len(parts) != 4:
            raise ParseError(f"malformed line {lineno}: {line!r}")
        _, u, v, token = parts
        if u == v:
            raise ParseError(f"self-loop at line {lineno}")
        try:
            w = parse_weight(token)
        except ParseError as exc:
            raise ParseError(f"{exc} at line {lineno}") from None
        edges.append(WeightedEdge(u, v, w, len(edges)))
    return Instance(tuple(edges))


def serialize_instance(instance: Instance) -> str:
    lines = [HEADER]
    lines.extend(f"edge {e.u} {e.v} {format_weight(e.weight)}" for e in instance.edges)
    return "\n".join(lines) + "\n"


def load_instance(path: str | os.PathLike[str]) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


@dataclass(frozen=True)
class VertexStats:
    m: int
    m_lower: int
    m_upper: int
    degree: int
    neighbors: int
    weighted_degree: Fraction

    @property
    def exact(self) -> bool:
        return self.m_lower == self.m_upper


@dataclass(frozen=True)
class InstanceStats:
    m: int
    m_is_exact: bool
    m_lower: int
    m_upper: int
    n: Fraction
    t: int
    per_vertex: Mapping[str, VertexStats] = field(repr=False)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "m_is_exact": self.m_is_exact,
            "m_lower": self.m_lower,
            "m_upper": self.m_upper,
            "n": str(self.n),
            "t": self.t,
        }


def vertex_bin_bounds(weights: Sequence[Fraction], limit: int | None = None) -> tuple[int, int]:
    """(lower, upper) on the optimal bin count; equal when solved exactly."""
    from .binpack import exact_min_bins, first_fit_decreasing_count

    limit = exact_limit() if limit is None else limit
    if len(weights) <= limit:
        try:
            opt = exact_min_bins(weights, limit=limit)
        except OracleRefusal:
            pass
        else:
            return opt, opt
    total = sum(weights, Fraction(0))
    lower = max(math.ceil(total), sum(1 for w in weights if w > HALF))
    return lower, first_fit_decreasing_count(weights)


def compute_stats(instance: Instance, limit: int | None = None) -> InstanceStats:
    if not instance.edges:
        raise ValueError("instance has no edges")
    per_vertex: dict[str, VertexStats] = {}
    for v, edges in instance.incident().items():
        weights = [e.weight for e in edges]
        lo, hi = vertex_bin_bounds(weights, limit)
        per_vertex[v] = VertexStats(
            m=hi,
            m_lower=lo,
            m_upper=hi,
            degree=len(edges),
            neighbors=len({e.other(v) for e in edges}),
            weighted_degree=sum(weights, Fraction(0)),
        )
    m_lower = max(s.m_lower for s in per_vertex.values())
    m_upper = max(s.m_upper for s in per_vertex.values())
    return InstanceStats(
        m=m_upper,
        m_is_exact=m_lower == m_upper,
        m_lower=m_lower,
        m_upper=m_upper,
        n=max(s.weighted_degree for s in per_vertex.values()),
        t=max(s.neighbors for s in per_vertex.values()),
        per_vertex=per_vertex,
    )


@dataclass(frozen=True)
class TraceStep:
    """One coloring decision, in the order it was made."""

    index: int
    u: str
    v: str
    weight: Fraction
    color: int
    closed: int | None  # color retired at both endpoints by this step
    opened: bool  # ``color`` was freshly taken from the palette
    high_water: int


@dataclass
class Coloring:
    algorithm: str
    assignment: dict[int, int]
    trace: list[TraceStep] = field(default_factory=list, repr=False)
    bound_exceeded: bool = False

    @property
    def max_color(self) -> int:
        return max(self.assignment.values(), default=0)

    @property
    def colors_used(self) -> int:
        return len(set(self.assignment.values()))

    def to_json(self) -> dict:
        return {"assignment": {str(k): c for k, c in sorted(self.assignment.items())}}


def coloring_from_json(data: Mapping) -> dict[int, int]:
    """Read the ``{"assignment": {"<arrival_index>": color}}`` format."""
    try:
        raw = data["assignment"]
        return {int(k): int(c) for k, c in raw.items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad coloring JSON: {exc}") from exc
