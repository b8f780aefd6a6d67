"""Bounded-space online bin packing and an exact offline bin-count oracle.

``next_fit``, ``harmonic_pack`` and the typed variants all run the same
segregated NEXT-FIT loop: items are routed to a class (a single class, a
harmonic size class, a caller-supplied label, or label x size class) and each
class keeps one open bin that is closed for good when an item does not fit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from .core import ONE, OracleRefusal, exact_limit

DEFAULT_M = 12
HARMONIC_RATIO = Fraction(16926, 10000)  # HARMONIC_12 worst-case ratio
DEFAULT_NODE_BUDGET = 2_000_000

OPEN = "open"
CLOSED = "closed"


@dataclass
class Bin:
    items: list[Fraction] = field(default_factory=list)
    members: list[int] = field(default_factory=list)  # positions in the input stream
    load: Fraction = Fraction(0)
    status: str = OPEN
    type_tag: Hashable = None

    def to_json(self) -> dict:
        return {
            "items": [str(w) for w in self.items],
            "load": str(self.load),
            "status": self.status,
            "type_tag": self.type_tag if isinstance(self.type_tag, (int, str, type(None))) else str(self.type_tag),
        }


@dataclass(frozen=True)
class PackResult:
    bins: tuple[Bin, ...]
    placement: tuple[int, ...]  # item position -> bin index
    close_order: tuple[int, ...]  # bin indices in the order they were closed

    @property
    def total_bins(self) -> int:
        return len(self.bins)

    @property
    def closed_bins(self) -> int:
        return len(self.close_order)

    @property
    def open_bins(self) -> int:
        return self.total_bins - self.closed_bins

    def groups(self) -> list[list[int]]:
        return [list(b.members) for b in self.bins]

    def to_json(self) -> dict:
        return {
            "total_bins": self.total_bins,
            "closed_bins": self.closed_bins,
            "open_bins": self.open_bins,
            "close_order": list(self.close_order),
            "bins": [b.to_json() for b in self.bins],
        }


def _segregated_next_fit(items: Sequence[Fraction], keys: Sequence[Hashable],
                         tag: Callable[[Hashable], Hashable] = lambda k: k) -> PackResult:
    bins: list[Bin] = []
    placement: list[int] = []
    close_order: list[int] = []
    current: dict[Hashable, int] = {}
    for pos, (w, key) in enumerate(zip(items, keys)):
        if not 0 < w <= 1:
            raise ValueError(f"item {w} outside (0, 1]")
        b = current.get(key)
        if b is not None and bins[b].load + w > ONE:
            bins[b].status = CLOSED
            close_order.append(b)
            b = None
        if b is None:
            b = len(bins)
            bins.append(Bin(type_tag=tag(key)))
            current[key] = b
        target = bins[b]
        target.items.append(w)
        target.members.append(pos)
        target.load += w
        placement.append(b)
    return PackResult(tuple(bins), tuple(placement), tuple(close_order))


def next_fit(items: Iterable[Fraction]) -> PackResult:
    items = list(items)
    return _segregated_next_fit(items, [None] * len(items))


def harmonic_type(w: Fraction, M: int = DEFAULT_M) -> int:
    """Size class of ``w``: k when w is in (1/(k+1), 1/k] for k < M, else M."""
    if M < 2:
        raise ValueError("M must be at least 2")
    if not 0 < w <= 1:
        raise ValueError(f"item {w} outside (0, 1]")
    # w in (1/(k+1), 1/k]  <=>  floor(1/w) == k
    return min(math.floor(1 / Fraction(w)), M)


def harmonic_pack(items: Iterable[Fraction], M: int = DEFAULT_M) -> PackResult:
    items = list(items)
    return _segregated_next_fit(items, [harmonic_type(w, M) for w in items])


def typed_next_fit(items: Iterable[tuple[Fraction, Hashable]], t: int | None = None) -> PackResult:
    """NEXT-FIT where items with different labels never share a bin."""
    pairs = list(items)
    labels = [lab for _, lab in pairs]
    if t is not None and len(set(labels)) > t:
        raise ValueError(f"{len(set(labels))} labels seen but t={t}")
    return _segregated_next_fit([w for w, _ in pairs], labels)


def typed_harmonic_pack(items: Iterable[tuple[Fraction, Hashable]], M: int = DEFAULT_M,
                        t: int | None = None) -> PackResult:
    """HARMONIC_M run separately per label; bins are keyed by (label, size class)."""
    pairs = list(items)
    labels = [lab for _, lab in pairs]
    if t is not None and len(set(labels)) > t:
        raise ValueError(f"{len(set(labels))} labels seen but t={t}")
    keys = [(lab, harmonic_type(w, M)) for w, lab in pairs]
    return _segregated_next_fit([w for w, _ in pairs], keys)


# --- offline: exact oracle and first-fit-decreasing upper bound --------------

def _scale(items: Sequence[Fraction]) -> tuple[list[int], int]:
    """Integer sizes and capacity over a common denominator."""
    denom = 1
    for w in items:
        denom = math.lcm(denom, Fraction(w).denominator)
    return [int(w * denom) for w in items], denom


def _first_fit_decreasing(sizes: Sequence[int], cap: int) -> list[int]:
    """Bin index for each item under FFD, via a max-residual segment tree."""
    n = len(sizes)
    if n == 0:
        return []
    order = sorted(range(n), key=lambda i: (-sizes[i], i))
    width = 1
    while width < n:
        width *= 2
    tree = [cap] * (2 * width)  # every bin starts empty; at most n are used
    out = [0] * n
    for i in order:
        s = sizes[i]
        node = 1
        while node < width:
            node = 2 * node if tree[2 * node] >= s else 2 * node + 1
        out[i] = node - width
        tree[node] -= s
        node //= 2
        while node:
            tree[node] = max(tree[2 * node], tree[2 * node + 1])
            node //= 2
    return out


def first_fit_decreasing_count(items: Sequence[Fraction]) -> int:
    if not items:
        return 0
    sizes, cap = _scale(items)
    return len(set(_first_fit_decreasing(sizes, cap)))


def _lower_bound(sizes: Sequence[int], cap: int) -> int:
    """max(ceil(total), #items > 1/2), tightened by the Martello-Toth L2 bound."""
    total = sum(sizes)
    best = max(-(-total // cap), sum(1 for s in sizes if 2 * s > cap))
    for k in sorted({s for s in sizes if 2 * s <= cap}):
        big = [s for s in sizes if s > cap - k]
        mid = [s for s in sizes if cap - k >= s and 2 * s > cap]
        small = sum(s for s in sizes if 2 * s <= cap and s >= k)
        spare = len(mid) * cap - sum(mid)
        best = max(best, len(big) + len(mid) + max(0, -(-(small - spare) // cap)))
    return best


def exact_packing(items: Sequence[Fraction], limit: int | None = None,
                  node_budget: int = DEFAULT_NODE_BUDGET) -> list[list[int]]:
    """An optimal packing, as lists of item positions.

    Branch and bound by bin completion: for a target of k bins, each branch
    fills one bin with the largest remaining item plus a maximal set of others
    (no leftover item fits), and is cut as soon as the accumulated unused
    capacity exceeds ``k - total``. Items of equal size are interchangeable,
    so a bin is chosen as a count per distinct size, and failed remainders
    are memoised. Targets run upward from the lower bound; first-fit
    decreasing supplies the fallback optimum. More than ``node_budget``
    search nodes raises :class:`OracleRefusal`.
    """
    limit = exact_limit() if limit is None else limit
    if len(items) > limit:
        raise OracleRefusal(f"exact packing refused: {len(items)} items exceeds limit {limit}")
    if not items:
        return []
    for w in items:
        if not 0 < w <= 1:
            raise ValueError(f"item {w} outside (0, 1]")
    sizes, cap = _scale(items)
    lower = _lower_bound(sizes, cap)
    ffd = _first_fit_decreasing(sizes, cap)
    if len(set(ffd)) == lower:
        return _groups(range(len(sizes)), ffd)

    vals = sorted(set(sizes), reverse=True)
    counts = tuple(sizes.count(v) for v in vals)
    budget = [node_budget]
    for k in range(lower, len(set(ffd))):
        bins = _complete(vals, counts, k, cap, budget)
        if bins is not None:
            return _assign_positions(sizes, vals, bins)
    return _groups(range(len(sizes)), ffd)


def _complete(vals: Sequence[int], counts: tuple[int, ...], k: int, cap: int,
              budget: list[int]) -> list[tuple[int, ...]] | None:
    """Pack the multiset into k bins; each bin is returned as a count vector."""
    d = len(vals)
    failed: set[tuple[tuple[int, ...], int]] = set()

    def fill(rem: tuple[int, ...], bins_left: int) -> list[tuple[int, ...]] | None:
        total = sum(c * v for c, v in zip(rem, vals))
        if total == 0:
            return []
        slack = bins_left * cap - total
        if slack < 0 or bins_left < _count_lower(rem, vals, cap):
            return None
        key = (rem, bins_left)
        if key in failed:
            return None
        first = next(j for j in range(d) if rem[j])
        take = [0] * d
        take[first] = 1
        tail = [0] * (d + 1)  # weight still available at positions >= j
        for j in range(d - 1, -1, -1):
            tail[j] = tail[j + 1] + (rem[j] - (j == first)) * vals[j]

        def choose(j: int, residual: int, min_left: int):
            budget[0] -= 1
            if budget[0] < 0:
                raise OracleRefusal("exact packing refused: search budget exhausted")
            if residual - tail[j] > slack:
                return None
            if j == d:
                if min_left <= residual:  # some leftover item still fits: not maximal
                    return None
                if _dominated(take, rem, first, vals, residual):
                    return None
                nxt = tuple(r - q for r, q in zip(rem, take))
                rest = fill(nxt, bins_left - 1)
                return None if rest is None else [tuple(take)] + rest
            avail = rem[j] - (j == first)
            v = vals[j]
            base = take[j]
            for q in range(min(avail, residual // v), -1, -1):
                take[j] = base + q
                found = choose(j + 1, residual - q * v, v if q < avail else min_left)
                if found is not None:
                    return found
            take[j] = base
            return None

        found = choose(0, cap - vals[first], cap + 1)
        if found is None:
            failed.add(key)
        return found

    return fill(counts, k)


def _dominated(take: Sequence[int], rem: Sequence[int], first: int,
               vals: Sequence[int], residual: int) -> bool:
    """True if swapping an excluded item y for included smaller items summing
    to within ``residual`` below y gives a bin at least as good."""
    for a in range(first + 1, len(vals)):
        if rem[a] - take[a] <= 0:
            continue
        y = vals[a]
        smaller = [vals[j] for j in range(a + 1, len(vals)) for _ in range(take[j])]
        if not smaller:
            continue
        sums = {0}
        for z in smaller[:16]:
            sums |= {x + z for x in sums if x + z <= y}
        if any(x and y - residual <= x for x in sums):
            return True
    return False


def _count_lower(rem: Sequence[int], vals: Sequence[int], cap: int) -> int:
    return _lower_bound([v for c, v in zip(rem, vals) for _ in range(c)], cap)


def _assign_positions(sizes: Sequence[int], vals: Sequence[int], bins: list[tuple[int, ...]]) -> list[list[int]]:
    pools: dict[int, list[int]] = {}
    for pos, sz in enumerate(sizes):
        pools.setdefault(sz, []).append(pos)
    for pool in pools.values():
        pool.reverse()
    out = []
    for vec in bins:
        out.append(sorted(pools[v].pop() for v, q in zip(vals, vec) for _ in range(q)))
    return sorted(out)


def _groups(order: Sequence[int], assign: Sequence[int]) -> list[list[int]]:
    out: dict[int, list[int]] = {}
    for rank, b in enumerate(assign):
        out.setdefault(b, []).append(order[rank])
    return [sorted(out[b]) for b in sorted(out)]


def exact_min_bins(items: Sequence[Fraction], limit: int | None = None,
                   node_budget: int = DEFAULT_NODE_BUDGET) -> int:
    return len(exact_packing(list(items), limit, node_budget))
