"""Seeded random instances on the weight grid {i/1000 : 1 <= i <= 1000}."""

from __future__ import annotations

import random
from fractions import Fraction

from .core import Instance, WeightedEdge

GRID = 1000


def trial_rng(seed: int, trial: int) -> random.Random:
    """Independent stream per (seed, trial); string seeds hash deterministically."""
    return random.Random(f"wecolor:{seed}:{trial}")


def grid_weight(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, GRID), GRID)


def _names(count: int) -> list[str]:
    width = len(str(max(count - 1, 0)))
    return [f"v{i:0{width}d}" for i in range(count)]


def _build(triples: list[tuple[str, str, Fraction]]) -> Instance:
    return Instance(tuple(WeightedEdge(u, v, w, i) for i, (u, v, w) in enumerate(triples)))


def random_multigraph(rng: random.Random, vertices: int, edges: int, multi_rate: float = 0.2,
                      max_degree: int = 30) -> Instance:
    """Erdos-Renyi style multigraph: each edge repeats an existing pair with
    probability ``multi_rate``, else joins a uniform random pair. No vertex
    exceeds ``max_degree``; generation stops early if no legal pair is left."""
    if vertices < 2:
        raise ValueError("need at least two vertices")
    names = _names(vertices)
    degree = [0] * vertices
    pairs: list[tuple[int, int]] = []
    out = []
    for _ in range(edges):
        pick = None
        if pairs and rng.random() < multi_rate:
            a, b = rng.choice(pairs)
            if degree[a] < max_degree and degree[b] < max_degree:
                pick = (a, b)
        if pick is None:
            free = [i for i in range(vertices) if degree[i] < max_degree]
            if len(free) < 2:
                break
            a, b = rng.sample(free, 2)
            pick = (a, b)
            pairs.append(pick)
        a, b = pick
        degree[a] += 1
        degree[b] += 1
        out.append((names[a], names[b], grid_weight(rng)))
    return _build(out)


def random_forest(rng: random.Random, vertices: int, edges: int, max_degree: int = 30,
                  root_rate: float = 0.1) -> Instance:
    """A random multigraph forest with about ``edges`` edges (at least one per
    tree edge, so possibly more when ``edges`` < vertices - roots).
    Arrival order is shuffled."""
    names = _names(vertices)
    tree: list[tuple[int, int]] = []
    for i in range(1, vertices):
        if rng.random() >= root_rate:
            tree.append((rng.randrange(i), i))
    if not tree:
        tree.append((0, 1))
    degree = [0] * vertices
    mult = {}
    for a, b in tree:
        mult[a, b] = 1
        degree[a] += 1
        degree[b] += 1
    for _ in range(max(0, edges - len(tree))):
        a, b = rng.choice(tree)
        if degree[a] < max_degree and degree[b] < max_degree:
            mult[a, b] += 1
            degree[a] += 1
            degree[b] += 1
    out = [(names[a], names[b], grid_weight(rng)) for (a, b), k in mult.items() for _ in range(k)]
    rng.shuffle(out)
    return _build(out)


def random_cactus(rng: random.Random, vertices: int, cycle_rate: float = 0.5) -> Instance:
    """A connected simple graph whose cycles are pairwise edge-disjoint."""
    if vertices < 2:
        raise ValueError("need at least two vertices")
    names = _names(vertices)
    out = []
    placed = 1
    while placed < vertices:
        anchor = rng.randrange(placed)
        room = vertices - placed
        if room >= 2 and rng.random() < cycle_rate:
            length = rng.randint(3, min(6, room + 1))
            ring = [anchor] + list(range(placed, placed + length - 1))
            placed += length - 1
            for a, b in zip(ring, ring[1:] + ring[:1]):
                out.append((names[a], names[b], grid_weight(rng)))
        else:
            out.append((names[anchor], names[placed], grid_weight(rng)))
            placed += 1
    rng.shuffle(out)
    return _build(out)
