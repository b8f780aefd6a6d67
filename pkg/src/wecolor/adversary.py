"""Worst-case streams for the packing subroutines and the composed instance
that drives the online HARMONIC colorer toward twice its packing ratio.

Each generator returns its input together with an exact prediction of what
the deterministic algorithms will do, computed in closed form (never by
running them), so tests can compare the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .binpack import DEFAULT_M, harmonic_type
from .core import Instance, WeightedEdge

DELTA = Fraction(1, 10**6)
SYLVESTER = (Fraction(1, 2), Fraction(1, 3), Fraction(1, 7), Fraction(1, 43))


@dataclass(frozen=True)
class AdversaryPrediction:
    predicted_total: int
    predicted_per_part: dict[str, int]
    parameters: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "predicted_total": self.predicted_total,
            "predicted_per_part": dict(self.predicted_per_part),
            "parameters": {k: str(v) if isinstance(v, Fraction) else v for k, v in self.parameters.items()},
        }


def gen_nf_worstcase(p: int) -> tuple[list[Fraction], AdversaryPrediction]:
    """p repetitions of (1/2, 1/(4p)): NEXT-FIT pairs each half with one sliver."""
    if p < 1:
        raise ValueError("p must be at least 1")
    delta = Fraction(1, 4 * p)
    stream = [Fraction(1, 2), delta] * p
    # halves pair up exactly; the slivers total 1/4 and share a bin with the odd half if any
    opt = p // 2 + 1 if p % 2 == 0 else (p + 1) // 2
    pred = AdversaryPrediction(p, {"next_fit": p, "opt": opt}, {"p": p, "delta": delta})
    return stream, pred


def sylvester_stream(copies: int, delta: Fraction = DELTA) -> list[Fraction]:
    """``copies`` items of each size 1/2+d, 1/3+d, 1/7+d, 1/43+d, grouped by size."""
    return [s + delta for s in SYLVESTER for _ in range(copies)]


def _harmonic_counts(copies: int, M: int, delta: Fraction) -> dict[str, int]:
    counts = {}
    seen_types = set()
    for s in SYLVESTER:
        size = s + delta
        k = harmonic_type(size, M)
        if k in seen_types:
            raise ValueError(f"two sizes share class {k}; closed form needs distinct classes")
        seen_types.add(k)
        per_bin = math.floor(1 / size)  # equal items: NEXT-FIT puts floor(1/size) in each bin
        counts[f"type_{k}"] = -(-copies // per_bin)
    return counts


def gen_harmonic_worstcase(M: int = DEFAULT_M, copies: int = 42,
                           delta: Fraction = DELTA) -> tuple[list[Fraction], AdversaryPrediction]:
    if M != DEFAULT_M:
        raise ValueError("the stream is calibrated for M = 12")
    if copies < 1 or copies % 42:
        raise ValueError("copies must be a positive multiple of 42")
    if not 0 < delta < Fraction(1, 43 * 44):
        raise ValueError("delta must lie in (0, 1/1892)")
    per = _harmonic_counts(copies, M, delta)
    total = sum(per.values())
    # one item of each size fits a bin; every 1/2+d item needs its own
    per["opt"] = copies
    return sylvester_stream(copies, delta), AdversaryPrediction(
        total, per, {"M": M, "copies": copies, "delta": delta})


def gen_composed_tightness(pair_count: int, per_pair_copies: int, hub_copies: int,
                           delta: Fraction = DELTA) -> tuple[Instance, AdversaryPrediction]:
    """k disjoint pairs loaded with the HARMONIC worst case, then a hub.

    Every pair (u_i, v_i) receives ``per_pair_copies`` copies of the four
    sizes as parallel edges and so fills colors 1..B. The hub w then gets
    ``hub_copies`` copies of the same stream toward u_1, u_2, ... in turn.
    Colors 1..B are taken at every u_i and w's earlier segments are taken at
    w, so segment i occupies B + (i-1)S + 1 .. B + iS where S is one
    segment's color count. The largest color is B + kS.
    """
    k, n, c = pair_count, per_pair_copies, hub_copies
    if k < 1 or n < 1 or c < 1:
        raise ValueError("pair_count, per_pair_copies and hub_copies must be positive")
    if c > n:
        raise ValueError("hub_copies exceeds per_pair_copies: a hub segment would outweigh its pair")
    if not 0 < delta < Fraction(1, 43 * 44):
        raise ValueError("delta must lie in (0, 1/1892)")
    width = len(str(k))
    edges: list[WeightedEdge] = []

    def add(a: str, b: str, w: Fraction) -> None:
        edges.append(WeightedEdge(a, b, w, len(edges)))

    for i in range(1, k + 1):
        for w in sylvester_stream(n, delta):
            add(f"u{i:0{width}d}", f"v{i:0{width}d}", w)
    for i in range(1, k + 1):
        for w in sylvester_stream(c, delta):
            add("w", f"u{i:0{width}d}", w)

    pair_colors = sum(_harmonic_counts(n, DEFAULT_M, delta).values())
    segment_colors = sum(_harmonic_counts(c, DEFAULT_M, delta).values())
    top = pair_colors + k * segment_colors
    # more than half a bin each: the 1/2+d items fix m, and one of each size fits a bin
    m = max(n + c, k * c)
    return Instance(tuple(edges)), AdversaryPrediction(
        top,
        {
            "pair_colors": pair_colors,
            "segment_colors": segment_colors,
            "hub_first_color": pair_colors + 1,
            "max_color_index": top,
            "m": m,
            "t": max(k, 2),
        },
        {"pair_count": k, "per_pair_copies": n, "hub_copies": c, "delta": delta},
    )


def balanced_composed(pair_count: int, hub_copies: int = 42) -> tuple[Instance, AdversaryPrediction]:
    """Composed instance with per-pair copies (k-1)c, which gives the hub and
    each u_i the same m; the max-color/m ratio then approaches twice the
    per-pair waste 71/42 as k grows."""
    k = pair_count
    if k < 2:
        raise ValueError("need at least two pairs")
    return gen_composed_tightness(k, (k - 1) * hub_copies, hub_copies)
