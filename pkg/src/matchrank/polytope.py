"""Facets of the matching polytope and exact face dimensions.

Every inequality is kept in ``<=`` form; nonnegativity ``x_e >= 0`` is stored
as ``-x_e <= 0``. Faces are measured by the affine rank of the matchings
(vertices) tight on them, which is exact because the polytope is integral.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .graph import Graph, GuardExceeded, Matching, PreconditionError
from .linalg import affine_dimension
from .matching import enumerate_matchings
from .structure import is_2_connected, is_factor_critical

MAX_FACET_NODES = 16


class InvalidInequality(ValueError):
    """The inequality is violated by some matching."""


class Kind(enum.IntEnum):
    NONNEG = 0
    DEGREE = 1
    ODDSET = 2


_KIND_NAMES = {Kind.NONNEG: "nonneg", Kind.DEGREE: "degree", Kind.ODDSET: "oddset"}


@dataclass(frozen=True, order=True)
class Inequality:
    """One of ``-x_e <= 0``, ``x(delta(v)) <= 1`` or ``x(E[U]) <= |U| // 2``.

    ``support`` is ``(edge_id,)``, ``(node,)`` or the sorted node tuple of U.
    Ordering is canonical: kind, then support.
    """

    kind: Kind
    support: tuple[int, ...]
    rhs: int = field(compare=False)

    @classmethod
    def nonneg(cls, edge_id: int) -> Inequality:
        return cls(Kind.NONNEG, (edge_id,), 0)

    @classmethod
    def degree(cls, node: int) -> Inequality:
        return cls(Kind.DEGREE, (node,), 1)

    @classmethod
    def oddset(cls, nodes: Iterable[int]) -> Inequality:
        u = tuple(sorted(set(nodes)))
        if len(u) < 3 or len(u) % 2 == 0:
            raise PreconditionError(f"odd-set inequality needs an odd set of size >= 3, got {list(u)}")
        return cls(Kind.ODDSET, u, len(u) // 2)

    @property
    def name(self) -> str:
        return _KIND_NAMES[self.kind]

    def coefficients(self, g: Graph) -> list[int]:
        c = [0] * g.edge_count
        for k in self.edge_support(g):
            c[k] = -1 if self.kind is Kind.NONNEG else 1
        return c

    def edge_support(self, g: Graph) -> list[int]:
        if self.kind is Kind.NONNEG:
            return [self.support[0]]
        if self.kind is Kind.DEGREE:
            return list(g.incident[self.support[0]])
        return g.induced_edge_ids(self.support)

    def lhs(self, g: Graph, m: Matching) -> int:
        if self.kind is Kind.NONNEG:
            return -1 if self.support[0] in m.edge_ids else 0
        if self.kind is Kind.DEGREE:
            v = self.support[0]
            return sum(1 for k in m.edge_ids if v in g.edges[k])
        u = set(self.support)
        return sum(1 for k in m.edge_ids if g.edges[k][0] in u and g.edges[k][1] in u)

    def is_tight(self, g: Graph, m: Matching) -> bool:
        return self.lhs(g, m) == self.rhs

    def check_graph(self, g: Graph) -> None:
        if self.kind is Kind.NONNEG:
            if not 0 <= self.support[0] < g.edge_count:
                raise PreconditionError(f"edge id {self.support[0]} out of range")
        elif not all(0 <= x < g.node_count for x in self.support):
            raise PreconditionError(f"{self.label()} refers to nodes outside the graph")

    def label(self, g: Graph | None = None) -> str:
        if self.kind is Kind.NONNEG:
            e = self.support[0]
            if g is not None:
                return f"x{g.edges[e]} >= 0".replace(" ", "")
            return f"x[{e}] >= 0"
        if self.kind is Kind.DEGREE:
            return f"deg({self.support[0]}) <= 1"
        return "odd{" + ",".join(map(str, self.support)) + f"}} <= {self.rhs}"

    def to_json(self) -> dict:
        return {"kind": self.name, "support": list(self.support), "rhs": self.rhs}

    @classmethod
    def from_json(cls, d: dict) -> Inequality:
        kind = d["kind"]
        if kind == "nonneg":
            return cls.nonneg(int(d["support"][0]))
        if kind == "degree":
            return cls.degree(int(d["support"][0]))
        if kind == "oddset":
            return cls.oddset(d["support"])
        raise ValueError(f"unknown inequality kind {kind!r}")

    @classmethod
    def parse(cls, text: str) -> Inequality:
        """``nonneg:<edge id>``, ``degree:<node>`` or ``oddset:<n1>,<n2>,...``."""
        kind, _, rest = text.partition(":")
        kind = {"deg": "degree", "odd": "oddset", "nn": "nonneg"}.get(kind, kind)
        try:
            ids = [int(x) for x in rest.split(",") if x.strip()]
        except ValueError:
            raise ValueError(f"bad inequality spec {text!r}") from None
        if not ids:
            raise ValueError(f"bad inequality spec {text!r}")
        return cls.from_json({"kind": kind, "support": ids})


@dataclass(frozen=True)
class FaceDescriptor:
    tight_set: tuple[Inequality, ...]
    dimension: int
    tight_matchings: tuple[Matching, ...]

    def to_json(self) -> dict:
        return {"tight": [q.to_json() for q in self.tight_set],
                "dimension": self.dimension,
                "n_tight_matchings": len(self.tight_matchings)}


def _degree_facet_nodes(g: Graph) -> list[int]:
    out = []
    for v in g.nodes:
        d = g.degree(v)
        if d >= 3:
            out.append(v)
        elif d == 2:
            a, b = g.adjacency[v]
            if not g.has_edge(a, b):
                out.append(v)
    return out


def is_blossom_set(g: Graph, nodes: Sequence[int]) -> bool:
    """True iff G[U] is factor-critical and 2-connected (|U| odd, >= 3)."""
    if len(nodes) < 3 or len(nodes) % 2 == 0:
        return False
    sub = g.subgraph(nodes)
    return is_2_connected(sub) and is_factor_critical(sub)


def _odd_subsets(g: Graph, max_nodes: int):
    if g.node_count > max_nodes:
        raise GuardExceeded(f"odd-set scan needs |V| <= {max_nodes}, got {g.node_count}")
    for size in range(3, g.node_count + 1, 2):
        yield from combinations(g.nodes, size)


def enumerate_facets(g: Graph, max_nodes: int = MAX_FACET_NODES) -> list[Inequality]:
    """The facet list: all nonnegativity rows, qualifying degree rows, blossom odd sets."""
    out = [Inequality.nonneg(k) for k in range(g.edge_count)]
    out += [Inequality.degree(v) for v in _degree_facet_nodes(g)]
    for u in _odd_subsets(g, max_nodes):
        # cheap necessary condition before the matching tests
        if len(g.induced_edge_ids(u)) >= len(u) and is_blossom_set(g, u):
            out.append(Inequality.oddset(u))
    return sorted(out)


def syntactic_candidates(g: Graph, max_nodes: int = MAX_FACET_NODES) -> list[Inequality]:
    """Every member of the three families, facet or not."""
    out = [Inequality.nonneg(k) for k in range(g.edge_count)]
    out += [Inequality.degree(v) for v in g.nodes]
    out += [Inequality.oddset(u) for u in _odd_subsets(g, max_nodes)]
    return out


def polytope_dimension(g: Graph) -> int:
    return affine_dimension((m.vector(g) for m in enumerate_matchings(g)), g.edge_count)


def face_dimension(g: Graph, tight: Iterable[Inequality]) -> FaceDescriptor:
    """Face of conv(matchings) where every inequality in ``tight`` holds with equality."""
    tight = tuple(sorted(set(tight)))
    for q in tight:
        q.check_graph(g)
    ms = tuple(m for m in enumerate_matchings(g) if all(q.is_tight(g, m) for q in tight))
    dim = affine_dimension((m.vector(g) for m in ms), g.edge_count)
    return FaceDescriptor(tight, dim, ms)


def is_valid(g: Graph, q: Inequality) -> bool:
    q.check_graph(g)
    return all(q.lhs(g, m) <= q.rhs for m in enumerate_matchings(g))


def is_facet(g: Graph, q: Inequality) -> bool:
    if not is_valid(g, q):
        raise InvalidInequality(f"{q.label()} is violated by some matching")
    return face_dimension(g, [q]).dimension == g.edge_count - 1


def ridge_face(g: Graph, f: Inequality, h: Inequality) -> FaceDescriptor:
    if f == h:
        raise PreconditionError("ridge test needs two distinct facets")
    return face_dimension(g, [f, h])


def is_ridge_pair(g: Graph, f: Inequality, h: Inequality, *, check_facets: bool = True) -> bool:
    """True iff the facets of ``f`` and ``h`` meet in a face of dimension |E| - 2."""
    if check_facets:
        for q in (f, h):
            if not is_facet(g, q):
                raise PreconditionError(f"{q.label()} is not a facet")
    return ridge_face(g, f, h).dimension == g.edge_count - 2


def halfspace_key(g: Graph, q: Inequality) -> tuple[tuple[int, ...], int]:
    return tuple(q.coefficients(g)), q.rhs


def facet_oracle(g: Graph, max_nodes: int = MAX_FACET_NODES) -> list[Inequality]:
    """Facets found by testing every valid syntactic candidate's face dimension.

    Candidates with identical coefficient rows (an odd set U whose E[U] is a
    star, say) describe one facet; the canonically smallest spelling is kept.
    """
    found: dict[tuple[tuple[int, ...], int], Inequality] = {}
    for q in sorted(syntactic_candidates(g, max_nodes)):
        key = halfspace_key(g, q)
        if key in found or not is_valid(g, q):
            continue
        if is_facet(g, q):
            found[key] = q
    return sorted(found.values())
