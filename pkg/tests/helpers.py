"""Graph generators shared by the tests."""

import random

from hypothesis import assume
from hypothesis import strategies as st

from matchrank import Graph
from matchrank.structure import is_connected, is_factor_critical


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


def random_connected(rng: random.Random, n: int, p: float, max_edges: int | None = None) -> Graph:
    """Random spanning tree plus extra edges, optionally capped."""
    edges = {(min(i, j), max(i, j)) for i in range(1, n) for j in [rng.randrange(i)]}
    extra = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in edges and rng.random() < p]
    rng.shuffle(extra)
    if max_edges is not None:
        extra = extra[:max(0, max_edges - len(edges))]
    return Graph(n, sorted(edges | set(extra)))


def random_factor_critical(rng: random.Random, max_nodes: int = 11) -> Graph:
    """An odd cycle grown by random odd ears, with a few chords thrown in."""
    k = rng.choice([3, 5, 7])
    edges = {(i, (i + 1) % k) if i < (i + 1) % k else ((i + 1) % k, i) for i in range(k)}
    n = k
    while n + 2 <= max_nodes and rng.random() < 0.7:
        length = rng.choice([1, 3, 3, 5]) if n + 4 <= max_nodes else rng.choice([1, 3])
        a, b = rng.randrange(n), rng.randrange(n)
        if length == 1:
            if a != b:
                edges.add((min(a, b), max(a, b)))
            continue
        path = [a] + list(range(n, n + length - 1)) + [b]
        n += length - 1
        for x, y in zip(path, path[1:]):
            edges.add((min(x, y), max(x, y)))
    g = Graph(n, sorted(edges))
    assert is_factor_critical(g)
    return g


@st.composite
def graphs(draw, min_nodes=1, max_nodes=7, connected=False):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    g = Graph(n, [p for p, keep in zip(pairs, mask) if keep])
    if connected:
        assume(is_connected(g))
    return g


@st.composite
def factor_critical_graphs(draw, max_nodes=9):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_factor_critical(random.Random(seed), max_nodes)
