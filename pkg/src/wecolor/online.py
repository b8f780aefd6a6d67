"""Online weighted edge coloring driven by NEXT-FIT or HARMONIC_M.

Every pair of neighbours holds one open color (NEXT-FIT) or one per size
class (HARMONIC_M). An arriving edge goes into its pair's open color if the
load stays at most one at both endpoints; otherwise that color is closed at
both endpoints and the least color empty at both is opened instead. The
palette is unbounded; bounds are checked afterwards on the colors used.
"""

from __future__ import annotations

import math
from collections import defaultdict
from fractions import Fraction
from typing import Callable, Hashable

from .binpack import DEFAULT_M, HARMONIC_RATIO, harmonic_type
from .core import ONE, Coloring, Instance, TraceStep


class PaletteState:
    """Per-vertex open, closed and empty colors with per-color loads.

    A color is *empty* at v when it is neither open nor closed there. Colors
    only ever move empty -> open -> closed, so the set of non-empty colors at
    a vertex grows monotonically and its least empty color can be cached.
    """

    def __init__(self) -> None:
        self.open: dict[str, dict[Hashable, int]] = defaultdict(dict)
        self.closed: dict[str, set[int]] = defaultdict(set)
        self.loads: dict[str, dict[int, Fraction]] = defaultdict(dict)
        self._used: dict[str, set[int]] = defaultdict(set)
        self._mex: dict[str, int] = defaultdict(lambda: 1)

    def nonempty(self, v: str) -> set[int]:
        return self._used[v]

    def is_empty(self, v: str, c: int) -> bool:
        return c not in self._used[v]

    def load(self, v: str, c: int) -> Fraction:
        return self.loads[v].get(c, Fraction(0))

    def open_color(self, u: str, v: str, kind: Hashable = 1) -> int | None:
        return self.open[u].get((v, kind))

    def least_empty(self, v: str) -> int:
        c = self._mex[v]
        used = self._used[v]
        while c in used:
            c += 1
        self._mex[v] = c
        return c

    def select_color(self, u: str, v: str) -> int:
        """Least positive color empty at both ``u`` and ``v``."""
        c = max(self.least_empty(u), self.least_empty(v))
        used_u, used_v = self._used[u], self._used[v]
        while c in used_u or c in used_v:
            c += 1
        return c

    def open_pair(self, u: str, v: str, kind: Hashable, c: int) -> None:
        assert self.is_empty(u, c) and self.is_empty(v, c), "opening a non-empty color"
        self.open[u][(v, kind)] = c
        self.open[v][(u, kind)] = c
        self._used[u].add(c)
        self._used[v].add(c)

    def close_pair(self, u: str, v: str, kind: Hashable) -> int:
        c = self.open[u].pop((v, kind))
        del self.open[v][(u, kind)]
        self.closed[u].add(c)
        self.closed[v].add(c)
        return c

    def add(self, u: str, v: str, c: int, w: Fraction) -> None:
        self.loads[u][c] = self.load(u, c) + w
        self.loads[v][c] = self.load(v, c) + w


def select_color(state: PaletteState, u: str, v: str) -> int:
    return state.select_color(u, v)


def _color_online(instance: Instance, kind_of: Callable[[Fraction], Hashable], name: str) -> Coloring:
    state = PaletteState()
    assignment: dict[int, int] = {}
    trace: list[TraceStep] = []
    high = 0
    for e in instance.edges:
        u, v, w = e.u, e.v, e.weight
        kind = kind_of(w)
        c = state.open_color(u, v, kind)
        closed = None
        opened = False
        if c is not None:
            lu, lv = state.load(u, c), state.load(v, c)
            # a pair-open color carries only that pair's edges
            assert lu == lv, f"open color {c} has unequal loads at {u} and {v}"
            if lu + w > ONE or lv + w > ONE:
                closed = state.close_pair(u, v, kind)
                c = None
        if c is None:
            c = state.select_color(u, v)
            state.open_pair(u, v, kind, c)
            opened = True
        state.add(u, v, c, w)
        assignment[e.index] = c
        high = max(high, c)
        trace.append(TraceStep(e.index, u, v, w, c, closed, opened, high))
    return Coloring(name, assignment, trace)


def color_online_nf(instance: Instance) -> Coloring:
    return _color_online(instance, lambda w: 1, "nf")


def color_online_harmonic(instance: Instance, M: int = DEFAULT_M) -> Coloring:
    if M < 2:
        raise ValueError("M must be at least 2")
    return _color_online(instance, lambda w: harmonic_type(w, M), "harmonic")


def nf_bound(m: int, t: int) -> int:
    """Largest color index the NEXT-FIT colorer may use: 4m + 2t - 1."""
    return 4 * m + 2 * t - 1


def harmonic_bound(m: int, t: int, M: int = DEFAULT_M, slack: bool = True) -> int:
    """ceil(2 * 1.6926 * m) + 2Mt, plus M on each side when ``slack``."""
    base = math.ceil(2 * HARMONIC_RATIO * m) + 2 * M * t
    return base + (2 * M if slack else 0)
