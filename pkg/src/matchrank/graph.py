"""Simple undirected graphs, matchings, and the plain-text graph format.

Node ids are dense integers ``0..n-1``. Edges are stored as ``(u, v)`` with
``u < v`` and sorted, so an edge's position in ``Graph.edges`` is its
canonical index. Subgraphs are relabelled order-preservingly, which keeps
canonical tie-breaking consistent between a graph and its subgraphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

Edge = tuple[int, int]


class GraphFormatError(ValueError):
    """Malformed graph text or an invalid edge list."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(ValueError):
    """An operation was called on input outside its contract."""


class GuardExceeded(RuntimeError):
    """An exhaustive scan would exceed a configured size limit."""


def _canon(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Simple undirected graph with a canonical edge index.

    ``labels`` is set on graphs produced by :meth:`subgraph` and maps each
    local node id back to the parent's id.
    """

    def __init__(self, node_count: int, edges: Iterable[Sequence[int]] = (),
                 labels: Sequence[int] | None = None):
        if node_count < 0:
            raise GraphFormatError("node count must be nonnegative")
        seen: set[Edge] = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise GraphFormatError(f"self-loop at node {u}")
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise GraphFormatError(f"edge ({u}, {v}) out of range for {node_count} nodes")
            c = _canon(u, v)
            if c in seen:
                raise GraphFormatError(f"duplicate edge ({c[0]}, {c[1]})")
            seen.add(c)
        self.node_count = node_count
        self.edges: tuple[Edge, ...] = tuple(sorted(seen))
        self.labels = tuple(labels) if labels is not None else None
        self._index = {e: k for k, e in enumerate(self.edges)}

    def __repr__(self) -> str:
        return f"Graph(n={self.node_count}, m={len(self.edges)})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.node_count == other.node_count and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.node_count, self.edges))

    @property
    def nodes(self) -> range:
        return range(self.node_count)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def incident(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids incident to each node (the set delta(v))."""
        inc: list[list[int]] = [[] for _ in range(self.node_count)]
        for k, (u, v) in enumerate(self.edges):
            inc[u].append(k)
            inc[v].append(k)
        return tuple(tuple(a) for a in inc)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return _canon(u, v) in self._index

    def edge_id(self, u: int, v: int) -> int:
        try:
            return self._index[_canon(u, v)]
        except KeyError:
            raise KeyError(f"({u}, {v}) is not an edge") from None

    def induced_edge_ids(self, nodes: Iterable[int]) -> list[int]:
        """Edge ids of E[U]."""
        s = set(nodes)
        return [k for k, (u, v) in enumerate(self.edges) if u in s and v in s]

    def subgraph(self, nodes: Iterable[int], edge_ids: Iterable[int] | None = None) -> Graph:
        """Subgraph on ``nodes`` (induced unless ``edge_ids`` is given), relabelled 0..k-1."""
        keep = sorted(set(nodes))
        local = {x: i for i, x in enumerate(keep)}
        if edge_ids is None:
            edge_ids = self.induced_edge_ids(keep)
        pairs = []
        for k in edge_ids:
            u, v = self.edges[k]
            if u not in local or v not in local:
                raise PreconditionError(f"edge {self.edges[k]} leaves the node set")
            pairs.append((local[u], local[v]))
        return Graph(len(keep), pairs, labels=keep)

    def without(self, nodes: Iterable[int]) -> Graph:
        """Induced subgraph after deleting ``nodes``."""
        drop = set(nodes)
        return self.subgraph(x for x in self.nodes if x not in drop)

    def lift(self, v: int) -> int:
        return v if self.labels is None else self.labels[v]

    def lift_pairs(self, pairs: Iterable[Edge]) -> list[Edge]:
        return [_canon(self.lift(u), self.lift(v)) for u, v in pairs]


@dataclass(frozen=True)
class Matching:
    """A set of pairwise disjoint edges, by edge id."""

    edge_ids: frozenset[int]

    @classmethod
    def from_pairs(cls, g: Graph, pairs: Iterable[Sequence[int]]) -> Matching:
        m = cls(frozenset(g.edge_id(u, v) for u, v in pairs))
        if not is_matching(g, m.edge_ids):
            raise PreconditionError(f"edges {sorted(m.pairs(g))} are not a matching")
        return m

    def __len__(self) -> int:
        return len(self.edge_ids)

    def __iter__(self):
        return iter(sorted(self.edge_ids))

    def pairs(self, g: Graph) -> list[Edge]:
        return [g.edges[k] for k in sorted(self.edge_ids)]

    def vector(self, g: Graph) -> list[int]:
        return [1 if k in self.edge_ids else 0 for k in range(g.edge_count)]

    def covered(self, g: Graph) -> set[int]:
        return {x for k in self.edge_ids for x in g.edges[k]}

    def mate(self, g: Graph) -> dict[int, int]:
        out = {}
        for k in self.edge_ids:
            u, v = g.edges[k]
            out[u] = v
            out[v] = u
        return out

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (len(self.edge_ids), tuple(sorted(self.edge_ids)))


def is_matching(g: Graph, edge_ids: Iterable[int]) -> bool:
    used: set[int] = set()
    for k in edge_ids:
        u, v = g.edges[k]
        if u in used or v in used:
            return False
        used.update((u, v))
    return True


# -- text format -------------------------------------------------------------

def parse_graph(text: str) -> Graph:
    """Parse ``n <count>`` followed by ``e <u> <v>`` lines; ``#`` starts a comment."""
    n: int | None = None
    edges: list[Edge] = []
    seen: dict[Edge, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if n is None:
            if tok[0] != "n" or len(tok) != 2:
                raise GraphFormatError("expected 'n <node_count>'", lineno)
            try:
                n = int(tok[1])
            except ValueError:
                raise GraphFormatError(f"bad node count {tok[1]!r}", lineno) from None
            if n < 0:
                raise GraphFormatError("node count must be nonnegative", lineno)
            continue
        if tok[0] != "e" or len(tok) != 3:
            raise GraphFormatError("expected 'e <u> <v>'", lineno)
        try:
            u, v = int(tok[1]), int(tok[2])
        except ValueError:
            raise GraphFormatError(f"bad node id in {line!r}", lineno) from None
        if u == v:
            raise GraphFormatError(f"self-loop at node {u}", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"node id out of range 0..{n - 1}", lineno)
        c = _canon(u, v)
        if c in seen:
            raise GraphFormatError(f"duplicate edge {u} {v} (first on line {seen[c]})", lineno)
        seen[c] = lineno
        edges.append(c)
    if n is None:
        raise GraphFormatError("missing 'n <node_count>' line")
    return Graph(n, edges)


def format_graph(g: Graph) -> str:
    lines = [f"n {g.node_count}"]
    lines.extend(f"e {u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())
