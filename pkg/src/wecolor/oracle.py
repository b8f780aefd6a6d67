"""Ground truth: the properness verifier, exact minimum colors, transcript checks."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Mapping

from .binpack import next_fit, typed_next_fit
from .core import ONE, Coloring, Instance, OracleRefusal, TraceStep

DEFAULT_COLOR_LIMIT = 10


class ColoringError(ValueError):
    """The coloring does not cover exactly the instance's edges."""


@dataclass(frozen=True)
class Violation:
    vertex: str
    color: int
    load: Fraction

    def to_json(self) -> dict:
        return {"vertex": self.vertex, "color": self.color, "load": str(self.load)}


@dataclass(frozen=True)
class ViolationReport:
    violations: tuple[Violation, ...]

    @property
    def proper(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"proper": self.proper, "violations": [v.to_json() for v in self.violations]}


def verify_coloring(instance: Instance, coloring: Coloring | Mapping[int, int]) -> ViolationReport:
    """Check every (vertex, color) load exactly; a load of exactly one is proper."""
    assignment = coloring.assignment if isinstance(coloring, Coloring) else coloring
    indices = {e.index for e in instance.edges}
    missing = sorted(indices - assignment.keys())
    if missing:
        raise ColoringError(f"uncolored edges: {missing}")
    extra = sorted(assignment.keys() - indices)
    if extra:
        raise ColoringError(f"colors given for unknown edges: {extra}")
    loads: dict[tuple[str, int], Fraction] = defaultdict(Fraction)
    for e in instance.edges:
        c = assignment[e.index]
        loads[e.u, c] += e.weight
        loads[e.v, c] += e.weight
    bad = [Violation(v, c, load) for (v, c), load in loads.items() if load > ONE]
    bad.sort(key=lambda x: (x.vertex, x.color))
    return ViolationReport(tuple(bad))


def exact_min_colors(instance: Instance, limit: int = DEFAULT_COLOR_LIMIT) -> int:
    """Fewest colors admitting a proper coloring, by exhaustive search.

    Colors are interchangeable, so each edge may only open the next unused
    color. Heavier edges are placed first.
    """
    if len(instance.edges) > limit:
        raise OracleRefusal(f"exact coloring refused: {len(instance.edges)} edges exceeds limit {limit}")
    if not instance.edges:
        return 0
    edges = sorted(instance.edges, key=lambda e: (-e.weight, e.index))
    loads: dict[tuple[str, int], Fraction] = defaultdict(Fraction)

    def feasible(i: int, used: int, k: int) -> bool:
        if i == len(edges):
            return True
        e = edges[i]
        for c in range(1, min(used + 1, k) + 1):
            if loads[e.u, c] + e.weight > ONE or loads[e.v, c] + e.weight > ONE:
                continue
            loads[e.u, c] += e.weight
            loads[e.v, c] += e.weight
            ok = feasible(i + 1, max(used, c), k)
            loads[e.u, c] -= e.weight
            loads[e.v, c] -= e.weight
            if ok:
                return True
        return False

    k = 1
    while not feasible(0, 0, k):
        k += 1
    return k


# --- per-vertex transcripts ---------------------------------------------------

def restriction(coloring: Coloring, v: str) -> list[TraceStep]:
    """The coloring decisions touching ``v``, in the order they were made."""
    return [s for s in coloring.trace if v in (s.u, s.v)]


def _color_groups(steps: list[TraceStep]) -> list[list[int]]:
    groups: dict[int, list[int]] = {}
    for pos, s in enumerate(steps):
        groups.setdefault(s.color, []).append(pos)
    return list(groups.values())


def online_restriction_matches(coloring: Coloring, v: str,
                               kind_of: Callable[[Fraction], Hashable] = lambda w: 1) -> bool:
    """Does ``v``'s view of an online run equal a typed NEXT-FIT packing?

    Items are the incident edges in arrival order, labelled by (neighbour,
    size class); bins must coincide with the color classes at ``v``.
    """
    steps = restriction(coloring, v)
    items = [(s.weight, (s.v if s.u == v else s.u, kind_of(s.weight))) for s in steps]
    return typed_next_fit(items).groups() == _color_groups(steps)


def tree_restriction_matches(coloring: Coloring, v: str,
                             kind_of: Callable[[Fraction], Hashable] = lambda w: 1) -> bool:
    """Is ``v``'s view of a tree run a NEXT-FIT transcript per size class?

    The first color of each class may have been closed early (it can carry
    load at the parent that ``v`` does not see); every later color must be
    exactly what NEXT-FIT produces on the remaining items.
    """
    per_kind: dict[Hashable, list[TraceStep]] = defaultdict(list)
    for s in restriction(coloring, v):
        per_kind[kind_of(s.weight)].append(s)
    for steps in per_kind.values():
        first = steps[0].color
        cut = 0
        while cut < len(steps) and steps[cut].color == first:
            cut += 1
        rest = steps[cut:]
        if any(s.color == first for s in rest):
            return False
        if next_fit([s.weight for s in rest]).groups() != _color_groups(rest):
            return False
    return True


def closed_count_violations(coloring: Coloring, limit: Mapping[str, int]) -> list[tuple[int, str, int]]:
    """Replay the trace and report (step, vertex, closed count) whenever a
    vertex holds more closed colors than ``limit[vertex]``."""
    closed: dict[str, int] = defaultdict(int)
    out = []
    for pos, s in enumerate(coloring.trace):
        if s.closed is None:
            continue
        for x in (s.u, s.v):
            closed[x] += 1
            if closed[x] > limit[x]:
                out.append((pos, x, closed[x]))
    return out
