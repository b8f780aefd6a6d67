"""Offline colorers: BFS over multigraph forests and over simple graphs whose
cycles are edge-disjoint.

Roots are the least vertex id of each component, children are visited in
ascending id order, and parallel edges to one child go in arrival order.
"""

from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable

from .binpack import DEFAULT_M, exact_packing, harmonic_type
from .core import (ONE, Coloring, Instance, OracleRefusal, StructureError, TraceStep,
                   WeightedEdge, compute_stats)

DEFAULT_CYCLE_BUDGET = 10_000


class CycleBudgetExceeded(OracleRefusal):
    pass


@dataclass(frozen=True)
class StructureReport:
    is_simple: bool
    is_forest: bool
    y: int  # most cycles through any one edge of the underlying simple graph
    components: tuple[str, ...]  # root (least vertex id) of each component
    cycles: int = 0

    def to_json(self) -> dict:
        return {
            "is_simple": self.is_simple,
            "is_forest": self.is_forest,
            "y": self.y,
            "components": list(self.components),
            "cycles": self.cycles,
        }


def _neighbors(instance: Instance) -> dict[str, set[str]]:
    adj: dict[str, set[str]] = defaultdict(set)
    for e in instance.edges:
        adj[e.u].add(e.v)
        adj[e.v].add(e.u)
    return adj


def _component_roots(adj: dict[str, set[str]]) -> list[str]:
    seen: set[str] = set()
    roots = []
    for r in sorted(adj):
        if r in seen:
            continue
        roots.append(r)
        seen.add(r)
        queue = deque([r])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    return roots


def _simple_cycles(adj: dict[str, set[str]], budget: int):
    """Yield each simple cycle (length >= 3) of an undirected graph once, as a
    vertex list. Raises once more than ``budget`` cycles or ``100 * budget``
    search steps are needed."""
    order = {v: i for i, v in enumerate(sorted(adj))}
    found = 0
    steps = 0
    for s in sorted(adj):
        rank = order[s]
        path = [s]
        on_path = {s}
        stack = [iter(sorted(y for y in adj[s] if order[y] > rank))]
        while stack:
            steps += 1
            if steps > 100 * budget:
                raise CycleBudgetExceeded(f"cycle enumeration exceeded {100 * budget} steps")
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                on_path.discard(path.pop())
                continue
            if nxt in on_path:
                continue
            path.append(nxt)
            on_path.add(nxt)
            # close back to s; keep one of the two traversal directions
            if len(path) >= 3 and s in adj[nxt] and path[1] < nxt:
                found += 1
                if found > budget:
                    raise CycleBudgetExceeded(f"more than {budget} cycles")
                yield list(path)
            stack.append(iter(sorted(y for y in adj[nxt] if order[y] > rank and y not in on_path)))


def analyze_structure(instance: Instance, cycle_budget: int = DEFAULT_CYCLE_BUDGET) -> StructureReport:
    adj = _neighbors(instance)
    pairs = [e.pair for e in instance.edges]
    is_simple = len(pairs) == len(set(pairs))
    roots = _component_roots(adj)
    simple_edges = len(set(pairs))
    is_forest = simple_edges == len(adj) - len(roots)
    if is_forest:
        return StructureReport(is_simple, True, 0, tuple(roots))
    through: dict[tuple[str, str], int] = defaultdict(int)
    count = 0
    for cyc in _simple_cycles(adj, cycle_budget):
        count += 1
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            through[min(a, b), max(a, b)] += 1
    return StructureReport(is_simple, False, max(through.values(), default=0), tuple(roots), count)


class _Ledger:
    """Per-vertex loads and the set of colors ever used there."""

    def __init__(self) -> None:
        self.loads: dict[str, dict[int, Fraction]] = defaultdict(dict)
        self.used: dict[str, set[int]] = defaultdict(set)
        self.assignment: dict[int, int] = {}
        self.trace: list[TraceStep] = []
        self.high = 0

    def load(self, v: str, c: int) -> Fraction:
        return self.loads[v].get(c, Fraction(0))

    def fits(self, e: WeightedEdge, c: int) -> bool:
        return self.load(e.u, c) + e.weight <= ONE and self.load(e.v, c) + e.weight <= ONE

    def least_unused(self, a: str, b: str, reserved: set[int] | frozenset = frozenset()) -> int:
        c = 1
        ua, ub = self.used[a], self.used[b]
        while c in ua or c in ub or c in reserved:
            c += 1
        return c

    def place(self, e: WeightedEdge, c: int, closed: int | None = None) -> None:
        opened = c not in self.used[e.u] and c not in self.used[e.v]
        for x in (e.u, e.v):
            self.loads[x][c] = self.load(x, c) + e.weight
            self.used[x].add(c)
        self.assignment[e.index] = c
        self.high = max(self.high, c)
        self.trace.append(TraceStep(e.index, e.u, e.v, e.weight, c, closed, opened, self.high))


def _pair_edges(instance: Instance) -> dict[str, dict[str, list[WeightedEdge]]]:
    out: dict[str, dict[str, list[WeightedEdge]]] = defaultdict(lambda: defaultdict(list))
    for e in instance.edges:
        out[e.u][e.v].append(e)
        out[e.v][e.u].append(e)
    return out


def _require_forest(instance: Instance) -> StructureReport:
    report = analyze_structure(instance)
    if not report.is_forest:
        raise StructureError("tree colorers need a multigraph forest")
    return report


def _color_tree(instance: Instance, kinds: list[Hashable], kind_of, name: str) -> Coloring:
    report = _require_forest(instance)
    groups = _pair_edges(instance)
    book = _Ledger()
    for root in report.components:
        # per size class: the color each class starts the next group with
        queue = deque([(root, None, {k: i + 1 for i, k in enumerate(kinds)})])
        while queue:
            u, parent, current = queue.popleft()
            current = dict(current)
            for child in sorted(x for x in groups[u] if x != parent):
                for e in groups[u][child]:
                    k = kind_of(e.weight)
                    c = current[k]
                    closed = None
                    if not book.fits(e, c):
                        closed = c
                        c = book.least_unused(u, child, set(current.values()))
                        current[k] = c
                    book.place(e, c, closed)
                queue.append((child, u, dict(current)))
    return Coloring(name, book.assignment, book.trace)


def color_tree_nf(instance: Instance) -> Coloring:
    """NEXT-FIT along a BFS: each child group continues the last open color."""
    return _color_tree(instance, [1], lambda w: 1, "tree-nf")


def color_tree_harmonic(instance: Instance, M: int = DEFAULT_M) -> Coloring:
    """HARMONIC_M along a BFS; at the root, size class k starts on color k."""
    if M < 2:
        raise ValueError("M must be at least 2")
    return _color_tree(instance, list(range(1, M + 1)), lambda w: harmonic_type(w, M), "tree-harmonic")


def tree_nf_bound(m: int) -> int:
    return 2 * m


TREE_HARMONIC_RATIO = Fraction(1693, 1000)


def tree_harmonic_bound(m: int, M: int = DEFAULT_M) -> int:
    return math.ceil(TREE_HARMONIC_RATIO * m) + M


def color_edge_disjoint_cycles(instance: Instance, limit: int | None = None,
                               report: StructureReport | None = None) -> Coloring:
    """Color a simple graph vertex by vertex from an optimal per-vertex packing.

    At each BFS vertex all incident edges (colored or not) are packed into the
    fewest bins. A bin whose pre-colored edges agree on one color, not yet
    claimed by another bin, keeps that color; every other bin takes the least
    color its uncolored edges fit at this vertex and at their far ends. An
    edge that does not fit its bin's color falls back to the least color it
    fits. The result is always proper; ``bound_exceeded`` flags runs using
    more than m + y colors (m + 1 when y = 1, m on forests).
    """
    report = report or analyze_structure(instance)
    if not report.is_simple:
        raise StructureError("cycle colorer needs a simple graph")
    stats = compute_stats(instance, limit)
    incident = instance.incident()
    adj = _neighbors(instance)
    book = _Ledger()

    def fallback(e: WeightedEdge) -> int:
        c = 1
        while not book.fits(e, c):
            c += 1
        return c

    visited: set[str] = set()
    for root in report.components:
        visited.add(root)
        queue = deque([root])
        while queue:
            u = queue.popleft()
            edges = incident[u]
            bins = exact_packing([e.weight for e in edges], limit)
            claimed: dict[int, int] = {}
            for bi, members in enumerate(bins):
                pre = {book.assignment[edges[i].index] for i in members if edges[i].index in book.assignment}
                if len(pre) == 1:
                    (c,) = pre
                    if c not in claimed.values():
                        claimed[bi] = c
            for bi, c in claimed.items():
                for i in bins[bi]:
                    e = edges[i]
                    if e.index not in book.assignment:
                        book.place(e, c if book.fits(e, c) else fallback(e))
            for bi, members in enumerate(bins):
                if bi in claimed:
                    continue
                todo = [edges[i] for i in members if edges[i].index not in book.assignment]
                if not todo:
                    continue
                total = sum((e.weight for e in todo), Fraction(0))
                c = 1
                while book.load(u, c) + total > ONE or any(book.load(e.other(u), c) + e.weight > ONE for e in todo):
                    c += 1
                for e in todo:
                    book.place(e, c)
            for x in sorted(adj[u]):
                if x not in visited:
                    visited.add(x)
                    queue.append(x)
    coloring = Coloring("cycles", book.assignment, book.trace)
    coloring.bound_exceeded = coloring.max_color > stats.m + report.y
    return coloring
