"""Nice odd cycles and odd ear decompositions of factor-critical graphs.

Ears are grown by the alternating-path argument: with ``M`` a perfect matching
of the graph outside the current nice subgraph ``H`` and ``M_b`` a perfect
matching of ``G - b`` for an outside node ``b`` adjacent to ``a`` in ``H``,
the walk ``a, b, M(b), M_b(M(b)), ...`` stays outside ``H`` until it re-enters
``H`` through an ``M_b`` edge. That walk is an odd ear and ``H`` plus the
ear is again nice and factor-critical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .graph import Edge, Graph, Matching, PreconditionError
from .matching import has_perfect_matching, near_pm_excluding, perfect_matching
from .structure import is_2_connected, is_factor_critical, is_nice_subgraph


class ConstructionError(AssertionError):
    """A construction broke one of its own postconditions (a bug, not bad input)."""


@dataclass(frozen=True)
class Ear:
    path: tuple[int, ...]

    @property
    def endpoint_a(self) -> int:
        return self.path[0]

    @property
    def endpoint_b(self) -> int:
        return self.path[-1]

    @property
    def interior(self) -> tuple[int, ...]:
        return self.path[1:-1]

    @property
    def length(self) -> int:
        return len(self.path) - 1

    @property
    def is_proper(self) -> bool:
        return self.path[0] != self.path[-1]

    def edge_pairs(self) -> list[Edge]:
        return [_pair(a, b) for a, b in zip(self.path, self.path[1:])]

    def to_json(self) -> dict:
        return {"path": list(self.path), "proper": self.is_proper, "length": self.length}


@dataclass(frozen=True)
class EarDecomposition:
    initial_cycle: tuple[int, ...]
    ears: tuple[Ear, ...]

    def cycle_pairs(self) -> list[Edge]:
        c = self.initial_cycle
        return [_pair(c[k], c[(k + 1) % len(c)]) for k in range(len(c))]

    def prefixes(self) -> Iterator[tuple[frozenset[int], frozenset[Edge]]]:
        """Node and edge sets of C, C+P1, C+P1+P2, ..."""
        nodes = set(self.initial_cycle)
        edges = set(self.cycle_pairs())
        yield frozenset(nodes), frozenset(edges)
        for ear in self.ears:
            nodes.update(ear.path)
            edges.update(ear.edge_pairs())
            yield frozenset(nodes), frozenset(edges)

    def to_json(self) -> dict:
        return {"initial_cycle": list(self.initial_cycle),
                "ears": [e.to_json() for e in self.ears]}


def _pair(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


def _require_factor_critical(g: Graph) -> None:
    if not is_factor_critical(g):
        raise PreconditionError("graph is not factor-critical")


def alternating_path(first: dict[int, int], second: dict[int, int], start: int) -> list[int]:
    """Follow ``first``, ``second``, ``first``, ... mate maps from ``start`` until stuck."""
    path = [start]
    seen = {start}
    maps = (first, second)
    x, turn = start, 0
    while x in maps[turn]:
        x = maps[turn][x]
        if x in seen:
            raise ConstructionError(f"alternating walk revisits node {x}")
        seen.add(x)
        path.append(x)
        turn ^= 1
    return path


def nice_odd_cycle_through_edge(g: Graph, e: Sequence[int], *, check: bool = True) -> tuple[int, ...]:
    """Odd cycle through edge ``e = (i, j)`` whose node set is nice in ``g``.

    The cycle is the even alternating ``i``-``j`` path of ``M_i`` and ``M_j``
    closed by ``e``; it is returned as nodes in cycle order starting at ``i``.
    """
    i, j = int(e[0]), int(e[1])
    if not g.has_edge(i, j):
        raise PreconditionError(f"({i}, {j}) is not an edge")
    if check:
        _require_factor_critical(g)
    m_i = near_pm_excluding(g, i).mate(g)
    m_j = near_pm_excluding(g, j).mate(g)
    # i is exposed in M_i, so the walk starts with i's M_j edge
    path = alternating_path(m_j, m_i, i)
    if path[-1] != j or len(path) % 2 == 0:
        raise ConstructionError(f"alternating path {path} does not end at {j} with even length")
    return tuple(path)


class _EarGrower:
    """Grows ears from a nice factor-critical subgraph H of ``g``."""

    def __init__(self, g: Graph, nodes: Iterable[int], edges: Iterable[Edge]):
        self.g = g
        self.nodes: set[int] = set(nodes)
        self.edges: set[Edge] = set(edges)
        self._near: dict[int, dict[int, int]] = {}
        self._outside_pm: dict[int, int] | None = None

    def near(self, b: int) -> dict[int, int]:
        if b not in self._near:
            self._near[b] = near_pm_excluding(self.g, b).mate(self.g)
        return self._near[b]

    def outside_pm(self) -> dict[int, int]:
        if self._outside_pm is None:
            sub = self.g.without(self.nodes)
            pm = perfect_matching(sub)
            if pm is None:
                raise PreconditionError("current subgraph is not nice")
            mate: dict[int, int] = {}
            for a, b in sub.lift_pairs(pm.pairs(sub)):
                mate[a], mate[b] = b, a
            self._outside_pm = mate
        return self._outside_pm

    def candidates(self) -> list[int]:
        return [k for k, (u, v) in enumerate(self.g.edges)
                if (u, v) not in self.edges and (u in self.nodes or v in self.nodes)]

    def ear_from_edge(self, k: int, anchor: int | None = None) -> Ear:
        u, v = self.g.edges[k]
        if u in self.nodes and v in self.nodes:
            if anchor == v:
                u, v = v, u
            return Ear((u, v))
        a, b = (u, v) if u in self.nodes else (v, u)
        walk = alternating_path(self.outside_pm(), self.near(b), b)
        if walk[-1] not in self.nodes or any(x in self.nodes for x in walk[:-1]):
            raise ConstructionError(f"alternating walk {walk} does not re-enter the prefix cleanly")
        ear = Ear((a, *walk))
        if ear.length % 2 == 0:
            raise ConstructionError(f"ear {ear.path} has even length")
        return ear

    def search_proper_ear(self) -> Ear | None:
        """Shortest (then lexicographically least) proper odd ear keeping the prefix nice."""
        g = self.g
        outside = set(g.nodes) - self.nodes
        for length in range(3, len(outside) + 2, 2):
            for s in sorted(self.nodes):
                for path in self._paths(s, length, outside):
                    t = path[-1]
                    if t == s or t not in self.nodes:
                        continue
                    if has_perfect_matching(g.without(self.nodes | set(path))):
                        return Ear(tuple(path))
        return None

    def _paths(self, s: int, length: int, outside: set[int]) -> Iterator[list[int]]:
        adj = self.g.adjacency
        path = [s]

        def rec() -> Iterator[list[int]]:
            x = path[-1]
            if len(path) == length:
                for y in adj[x]:
                    if y in self.nodes:
                        yield path + [y]
                return
            for y in adj[x]:
                if y in outside and y not in path:
                    path.append(y)
                    yield from rec()
                    path.pop()

        yield from rec()

    def add(self, ear: Ear) -> None:
        self.nodes.update(ear.path)
        self.edges.update(ear.edge_pairs())
        self._outside_pm = None

    def grow(self, first_edge: int | None = None, first_anchor: int | None = None,
             proper: bool = False) -> list[Ear]:
        ears: list[Ear] = []
        if first_edge is not None:
            ear = self.ear_from_edge(first_edge, anchor=first_anchor)
            ears.append(ear)
            self.add(ear)
        while len(self.edges) < self.g.edge_count:
            cands = self.candidates()
            if not cands:
                raise PreconditionError("graph is not connected")
            chosen: Ear | None = None
            for k in cands:
                ear = self.ear_from_edge(k)
                if not proper or ear.is_proper:
                    chosen = ear
                    break
            if chosen is None:
                chosen = self.search_proper_ear()
                if chosen is None:
                    raise ConstructionError("no proper odd ear keeps the prefix nice")
            ears.append(chosen)
            self.add(chosen)
        return ears


def extend_ear_decomposition(g: Graph, nodes: Iterable[int], edges: Iterable[Edge] | None = None,
                             first_edge: Sequence[int] | None = None,
                             proper: bool = False) -> list[Ear]:
    """Odd ears growing the nice factor-critical subgraph on ``nodes`` into ``g``.

    ``edges`` defaults to the induced edges of ``nodes``. ``first_edge``
    forces the first ear to start ``(v, k)`` with ``v`` inside and ``k`` outside.
    """
    node_set = set(nodes)
    if edges is None:
        edges = [g.edges[k] for k in g.induced_edge_ids(node_set)]
    grower = _EarGrower(g, node_set, edges)
    fe = anchor = None
    if first_edge is not None:
        v, k = int(first_edge[0]), int(first_edge[1])
        if v not in node_set or k in node_set or not g.has_edge(v, k):
            raise PreconditionError(f"first ear edge ({v}, {k}) must leave the start subgraph")
        fe, anchor = g.edge_id(v, k), v
    return grower.grow(first_edge=fe, first_anchor=anchor, proper=proper)


def _validate_cycle(g: Graph, cycle: Sequence[int]) -> None:
    n = len(cycle)
    if n < 3 or n % 2 == 0 or len(set(cycle)) != n:
        raise PreconditionError(f"{list(cycle)} is not an odd cycle")
    for k in range(n):
        if not g.has_edge(cycle[k], cycle[(k + 1) % n]):
            raise PreconditionError(f"{list(cycle)} is not a cycle of the graph")


def odd_ear_decomposition(g: Graph, cycle: Sequence[int],
                          first_ear_edge: Sequence[int] | None = None) -> EarDecomposition:
    """Odd ear decomposition of factor-critical ``g`` starting from the nice odd ``cycle``.

    Ears are chosen greedily by smallest edge index among edges leaving or
    chording the current prefix. With ``first_ear_edge = (v, k)`` the first
    ear starts with that edge.
    """
    _require_factor_critical(g)
    _validate_cycle(g, cycle)
    if not is_nice_subgraph(g, cycle):
        raise PreconditionError(f"cycle {list(cycle)} is not nice")
    c = tuple(cycle)
    cyc_edges = [_pair(c[k], c[(k + 1) % len(c)]) for k in range(len(c))]
    ears = extend_ear_decomposition(g, c, cyc_edges, first_edge=first_ear_edge)
    return EarDecomposition(c, tuple(ears))


def proper_odd_ear_decomposition(g: Graph) -> EarDecomposition:
    """Odd ear decomposition with every ear proper, for factor-critical 2-connected ``g``.

    Greedy as in :func:`odd_ear_decomposition`, skipping candidates whose
    alternating ear closes on itself; if every candidate does, the shortest
    proper odd ear that keeps the prefix nice is searched for directly.
    """
    _require_factor_critical(g)
    if not is_2_connected(g):
        raise PreconditionError("graph is not 2-connected")
    c = nice_odd_cycle_through_edge(g, g.edges[0], check=False)
    cyc_edges = [_pair(c[k], c[(k + 1) % len(c)]) for k in range(len(c))]
    ears = _EarGrower(g, c, cyc_edges).grow(proper=True)
    return EarDecomposition(c, tuple(ears))


def decomposition_violations(g: Graph, dec: EarDecomposition, proper: bool = False) -> list[str]:
    """Every invariant a decomposition of ``g`` must satisfy; empty when valid."""
    out: list[str] = []
    try:
        _validate_cycle(g, dec.initial_cycle)
    except PreconditionError as exc:
        return [str(exc)]
    seen_nodes = set(dec.initial_cycle)
    seen_edges = set(dec.cycle_pairs())
    for idx, ear in enumerate(dec.ears):
        if ear.length % 2 == 0:
            out.append(f"ear {idx} has even length")
        if ear.endpoint_a not in seen_nodes or ear.endpoint_b not in seen_nodes:
            out.append(f"ear {idx} endpoints outside prefix")
        if any(x in seen_nodes for x in ear.interior) or len(set(ear.interior)) != len(ear.interior):
            out.append(f"ear {idx} interior meets prefix or repeats")
        if ear.length == 1 and not ear.is_proper:
            out.append(f"ear {idx} is a loop")
        if proper and not ear.is_proper:
            out.append(f"ear {idx} is not proper")
        for a, b in ear.edge_pairs():
            if not g.has_edge(a, b):
                out.append(f"ear {idx} uses non-edge ({a}, {b})")
            elif (a, b) in seen_edges:
                out.append(f"ear {idx} reuses edge ({a}, {b})")
        seen_nodes.update(ear.path)
        seen_edges.update(ear.edge_pairs())
    if seen_edges != set(g.edges):
        out.append("ears plus cycle do not partition the edge set")
    for idx, (nodes, edges) in enumerate(dec.prefixes()):
        sub = g.subgraph(nodes, [g.edge_id(a, b) for a, b in edges if g.has_edge(a, b)])
        if not is_nice_subgraph(g, nodes):
            out.append(f"prefix {idx} is not nice")
        if not is_factor_critical(sub):
            out.append(f"prefix {idx} is not factor-critical")
        if proper and not is_2_connected(sub):
            out.append(f"prefix {idx} is not 2-connected")
    return out


def cycle_near_pm(cycle: Sequence[int], missing: int) -> list[Edge]:
    """The unique perfect matching of the odd cycle with node ``missing`` removed."""
    n = len(cycle)
    k = list(cycle).index(missing)
    rest = [cycle[(k + t) % n] for t in range(1, n)]
    return [_pair(rest[t], rest[t + 1]) for t in range(0, n - 1, 2)]


def path_pm(path: Sequence[int]) -> list[Edge]:
    """Perfect matching of an even-order path, pairing consecutive nodes."""
    if len(path) % 2:
        raise ConstructionError(f"path {list(path)} has odd order")
    return [_pair(path[t], path[t + 1]) for t in range(0, len(path), 2)]


def matching_of(g: Graph, pairs: Iterable[Edge]) -> Matching:
    return Matching.from_pairs(g, pairs)
