"""Witness matchings showing an odd-set facet meets a degree facet in a ridge.

For a blossom facet ``x(E[U]) <= |U| // 2`` and an anchor node ``v`` of ``U``,
every other facet gets a matching that is tight on both the odd-set row and
``x(delta(v)) <= 1`` but slack on that facet. So no further row is implied
with equality on their intersection. The constructions follow the case split:

* ``Case1a`` / ``Case1b``: nonnegativity of an edge outside / inside ``E[U]``
* ``Case2``: degree rows of other nodes
* ``Case3a`` / ``Case3b`` / ``Case3c``: other odd sets, by how they sit against ``U``
* ``Case4``: ``G[U]`` is a chordless odd cycle

Each constructed matching is re-checked. If a construction fails, the
exhaustive search supplies the matching and the result is flagged as a
fallback.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .ears import (ConstructionError, Ear, cycle_near_pm, extend_ear_decomposition,
                   nice_odd_cycle_through_edge, odd_ear_decomposition, path_pm,
                   proper_odd_ear_decomposition)
from .graph import Edge, Graph, Matching, PreconditionError
from .matching import enumerate_matchings, perfect_matching
from .polytope import Inequality, Kind, enumerate_facets, is_blossom_set, ridge_face
from .structure import is_chordless_odd_cycle, is_factor_critical, is_nice_subgraph


class RankZeroFacet(PreconditionError):
    """The odd set is a triangle with a degree-2 node; it needs no anchor."""


class WitnessNotFound(AssertionError):
    """No matching separates the target; this would contradict the ridge claim."""


class Case(str, enum.Enum):
    CASE1A = "Case1a"
    CASE1B = "Case1b"
    CASE2 = "Case2"
    CASE3A = "Case3a"
    CASE3B = "Case3b"
    CASE3C = "Case3c"
    CASE4 = "Case4"
    BRUTE_FORCE = "brute_force"


def _pair(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass
class WitnessContext:
    g: Graph
    U: tuple[int, ...]
    v: int | None
    case_tag: Case
    scratch: dict = field(default_factory=dict)


@dataclass(frozen=True)
class WitnessResult:
    target: Inequality
    matching: Matching
    case_tag: Case
    checks: dict
    fallback: bool = False
    note: str = ""
    detail: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self, g: Graph) -> dict:
        return {
            "target": self.target.to_json(),
            "case": self.case_tag.value,
            "matching": [list(p) for p in self.matching.pairs(g)],
            "checks": dict(self.checks),
            "fallback": self.fallback,
        }


def evaluate_checks(g: Graph, U: Iterable[int], v: int, target: Inequality, m: Matching) -> dict:
    """The three conditions, computed from the raw matching."""
    u = set(U)
    inside = sum(1 for k in m.edge_ids if g.edges[k][0] in u and g.edges[k][1] in u)
    at_v = sum(1 for k in m.edge_ids if v in g.edges[k])
    return {
        "tight_on_U": inside == len(u) // 2,
        "tight_on_v": at_v == 1,
        "slack_on_target": target.lhs(g, m) < target.rhs,
    }


def _cycle_order(g: Graph, nodes: Sequence[int]) -> tuple[int, ...]:
    """Nodes of a chordless cycle G[nodes] in cycle order from the smallest."""
    s = set(nodes)
    start = min(s)
    order = [start]
    prev, x = None, start
    while True:
        nxt = min(y for y in g.adjacency[x] if y in s and y != prev)
        if nxt == start:
            break
        order.append(nxt)
        prev, x = x, nxt
    return tuple(order)


def choose_anchor(g: Graph, U: Iterable[int]) -> tuple[int, bool]:
    """Anchor node ``v`` for the odd set ``U`` and whether ``G[U]`` is a chordless odd cycle.

    For a chordless cycle the smallest node is used. Otherwise ``v`` is the
    smallest ear endpoint of a proper odd ear decomposition of ``G[U]`` with
    degree at least 3 in ``G[U]``.
    """
    u = tuple(sorted(set(U)))
    if not is_blossom_set(g, u):
        raise PreconditionError(f"G[{list(u)}] is not factor-critical and 2-connected")
    sub = g.subgraph(u)
    if is_chordless_odd_cycle(sub):
        if len(u) == 3 and any(g.degree(x) == 2 for x in u):
            raise RankZeroFacet(f"triangle {list(u)} has a degree-2 node; its facet has rank 0")
        return u[0], True
    dec = proper_odd_ear_decomposition(sub)
    ends = {sub.lift(x) for ear in dec.ears for x in (ear.endpoint_a, ear.endpoint_b)}
    cands = sorted(x for x in ends if sub.degree(u.index(x)) >= 3)
    if not cands:
        raise ConstructionError(f"no ear endpoint of degree >= 3 in G[{list(u)}]")
    return cands[0], False


# -- Case 3c scaffold -------------------------------------------------------------

def build_case3c_scaffold(g: Graph, U: Iterable[int], U_prime: Iterable[int],
                          v: int | None = None) -> WitnessContext:
    """Grow ``G[U']`` by ears inside ``G[U]`` until two hanging components join.

    Each ear outside ``U'`` is merged into a component; a component records
    the nodes of ``U'`` it touches. The first ear that leaves a component
    touching two nodes ``i != j`` is ``P_l``. ``I`` and ``J`` are the
    components it joined (possibly empty). ``G_l`` is ``G[U']`` plus the ears
    of ``I`` and ``J`` plus ``P_l``.
    """
    u = tuple(sorted(set(U)))
    up = tuple(sorted(set(U_prime)))
    uset, upset = set(u), set(up)
    if not (upset < uset):
        raise PreconditionError(f"{list(up)} is not a proper subset of {list(u)}")
    if not is_blossom_set(g, up):
        raise PreconditionError(f"G[{list(up)}] is not factor-critical and 2-connected")
    gu = g.subgraph(u)
    loc = {x: t for t, x in enumerate(u)}
    if not is_nice_subgraph(gu, [loc[x] for x in up]):
        raise PreconditionError(f"G[{list(up)}] is not nice in G[{list(u)}]")

    ears = [tuple(gu.lift(x) for x in ear.path)
            for ear in extend_ear_decomposition(gu, [loc[x] for x in up])]

    comp_of: dict[int, int] = {}
    comps: dict[int, dict] = {}
    stop = None
    for idx, path in enumerate(ears):
        a, b = path[0], path[-1]
        sides = []
        for x in (a, b):
            if x in upset:
                sides.append((x, frozenset(), ()))
            else:
                c = comps[comp_of[x]]
                if len(c["attach"]) != 1:
                    raise ConstructionError("component attached to several nodes before the stop")
                sides.append((next(iter(c["attach"])), frozenset(c["nodes"]), tuple(c["ears"])))
        touched = {comp_of[x] for x in (a, b) if x not in upset}
        nodes = set(path[1:-1])
        attach = {x for x in (a, b) if x in upset}
        ear_ids = [idx]
        for cid in touched:
            c = comps.pop(cid)
            nodes |= c["nodes"]
            attach |= c["attach"]
            ear_ids = c["ears"] + ear_ids
        cid = idx
        comps[cid] = {"nodes": nodes, "attach": attach, "ears": sorted(ear_ids)}
        for x in nodes:
            comp_of[x] = cid
        if len(attach) >= 2:
            stop = (idx, sides)
            break
    if stop is None:
        raise ConstructionError("ear growth never joined two components")

    ell, ((i, I, i_ears), (j, J, j_ears)) = stop
    p_ell = ears[ell]
    if len(p_ell) == 2:
        i2, j2 = p_ell
    else:
        i2, j2 = p_ell[1], p_ell[2]
    gl_nodes = upset | set(I) | set(J) | set(p_ell[1:-1])
    gl_edges = {g.edges[k] for k in g.induced_edge_ids(up)}
    for t in (*i_ears, *j_ears, ell):
        path = ears[t]
        gl_edges.update(_pair(x, y) for x, y in zip(path, path[1:]))

    ctx = WitnessContext(g, u, v, Case.CASE3C, {
        "U_prime": up, "extension": ears, "ell": ell, "P_ell": p_ell,
        "i": i, "j": j, "I": tuple(sorted(I)), "J": tuple(sorted(J)),
        "i_prime": i2, "j_prime": j2,
        "G_ell_nodes": tuple(sorted(gl_nodes)), "G_ell_edges": tuple(sorted(gl_edges)),
    })
    gl = g.subgraph(gl_nodes, [g.edge_id(*e) for e in gl_edges])
    if len(I) % 2 or len(J) % 2:
        raise ConstructionError("hanging components must have an even number of nodes")
    if not is_factor_critical(gl):
        raise ConstructionError("G_l is not factor-critical")
    if not is_nice_subgraph(gu, [loc[x] for x in gl_nodes]):
        raise ConstructionError("G_l is not nice in G[U]")
    return ctx


def _arcs(cycle: Sequence[int], a: int, b: int) -> tuple[list[int], list[int]]:
    """The two a-b paths around ``cycle``."""
    n = len(cycle)
    ka, kb = cycle.index(a), cycle.index(b)
    fwd = [cycle[(ka + t) % n] for t in range((kb - ka) % n + 1)]
    bwd = [cycle[(ka - t) % n] for t in range((ka - kb) % n + 1)]
    return fwd, bwd


def _has_step(path: Sequence[int], x: int, y: int) -> bool:
    return any({p, q} == {x, y} for p, q in zip(path, path[1:]))


def case3c_nice_cycle(ctx: WitnessContext) -> tuple[int, ...]:
    """Nice odd cycle of ``G_l`` through ``(i', j')``, split at ``i`` and ``j``.

    Checks that the arc through ``(i', j')`` has odd length and leaves ``U'``,
    and that the other arc is even, has an interior node and stays in ``U'``.
    """
    s = ctx.scratch
    g = ctx.g
    gl_nodes = s["G_ell_nodes"]
    gl = g.subgraph(gl_nodes, [g.edge_id(*e) for e in s["G_ell_edges"]])
    loc = {x: t for t, x in enumerate(gl_nodes)}
    cyc = tuple(gl.lift(x) for x in
                nice_odd_cycle_through_edge(gl, (loc[s["i_prime"]], loc[s["j_prime"]]), check=False))
    i, j, up = s["i"], s["j"], set(s["U_prime"])
    if i not in cyc or j not in cyc:
        raise ConstructionError(f"cycle {cyc} misses i={i} or j={j}")
    fwd, bwd = _arcs(list(cyc), i, j)
    odd, even = (fwd, bwd) if _has_step(fwd, s["i_prime"], s["j_prime"]) else (bwd, fwd)
    if (len(odd) - 1) % 2 != 1 or any(x in up for x in odd[1:-1]):
        raise ConstructionError(f"arc {odd} is not an odd path outside U'")
    if (len(even) - 1) % 2 or len(even) < 3 or any(x not in up for x in even):
        raise ConstructionError(f"arc {even} is not an even path inside U' with an interior node")
    gu = g.subgraph(ctx.U)
    uloc = {x: t for t, x in enumerate(ctx.U)}
    if not is_nice_subgraph(gu, [uloc[x] for x in cyc]):
        raise ConstructionError("constructed cycle is not nice in G[U]")
    s.update(cycle=cyc, odd_arc=tuple(odd), even_arc=tuple(even))
    return cyc


# -- constructive witnesses -------------------------------------------------------

class _Builder:
    """Per-(g, U, v) constructions; all node ids are those of ``g``."""

    def __init__(self, g: Graph, U: Sequence[int], v: int, hole: bool):
        self.g = g
        self.U = tuple(sorted(U))
        self.uset = set(self.U)
        self.v = v
        self.hole = hole
        self.gu = g.subgraph(self.U)
        self.loc = {x: t for t, x in enumerate(self.U)}
        self.cycle = _cycle_order(g, self.U) if hole else None

    # matchings inside G[U]
    def pm_of(self, nodes: Iterable[int]) -> list[Edge]:
        nodes = set(nodes)
        sub = self.g.subgraph(nodes)
        pm = perfect_matching(sub)
        if pm is None:
            raise ConstructionError(f"G[{sorted(nodes)}] has no perfect matching")
        return sub.lift_pairs(pm.pairs(sub))

    def near_pm(self, w: int) -> list[Edge]:
        return self.pm_of(self.uset - {w})

    def lift_path(self, ear: Ear) -> tuple[int, ...]:
        return tuple(self.gu.lift(x) for x in ear.path)

    def other_than_v(self, pool: Iterable[int]) -> int | None:
        c = sorted(set(pool) - {self.v})
        return c[0] if c else None

    def cycle_with_edge(self, cycle: Sequence[int], e: Edge, nice_nodes: Iterable[int]) -> list[Edge]:
        """Near-perfect matching of the odd ``cycle`` using ``e`` and avoiding v's deletion."""
        for m in sorted(set(cycle) - {self.v}):
            pairs = cycle_near_pm(cycle, m)
            if e in pairs:
                return pairs + self.pm_of(self.uset - set(nice_nodes))
        raise ConstructionError(f"no near-perfect matching of {list(cycle)} uses {e} and covers {self.v}")

    # Case 1
    def case1a(self, e: Edge) -> list[Edge]:
        a, b = e
        if a in self.uset:
            return self.near_pm(a) + [e]
        if b in self.uset:
            return self.near_pm(b) + [e]
        return self.near_pm(self.other_than_v(self.U)) + [e]

    def case1b(self, e: Edge, scratch: dict) -> list[Edge]:
        i, j = e
        c_loc = nice_odd_cycle_through_edge(self.gu, (self.loc[i], self.loc[j]), check=False)
        cyc = tuple(self.gu.lift(x) for x in c_loc)
        scratch["cycle"] = cyc
        v = self.v
        if not (len(cyc) == 3 and v in cyc and v not in e):
            return self.cycle_with_edge(cyc, e, cyc)
        # triangle i, j, v: grow the first ear through an edge (v, k) leaving the triangle
        k = min(x for x in self.g.adjacency[v] if x in self.uset and x not in cyc)
        dec = odd_ear_decomposition(self.gu, c_loc, first_ear_edge=(self.loc[v], self.loc[k]))
        p1 = self.lift_path(dec.ears[0])
        scratch.update(k=k, first_ear=p1)
        nice_nodes = set(cyc) | set(p1)
        if p1[0] != v:
            raise ConstructionError("first ear does not start at the anchor")
        if p1[-1] != v:
            s = p1[-1]
            other = i if s == j else j
            new_cycle = (*p1, other)
            scratch["repaired_cycle"] = new_cycle
            return self.cycle_with_edge(new_cycle, e, nice_nodes)
        ring = p1[:-1]
        m = min(x for x in ring if x != v)
        return cycle_near_pm(ring, m) + [e] + self.pm_of(self.uset - nice_nodes)

    # Case 2
    def case2(self, w: int) -> list[Edge]:
        if w in self.uset:
            return self.near_pm(w)
        return self.near_pm(self.other_than_v(self.U))

    # Case 3
    def case3a(self, up: set[int]) -> list[Edge]:
        w = self.other_than_v(self.uset & up)
        if w is None:
            w = self.other_than_v(self.U)
        return self.near_pm(w)

    def case3b(self, up: set[int]) -> list[Edge]:
        w = self.other_than_v(self.uset & up)
        if w is None:
            # U' meets U only in v: v gets matched inside U \ U'
            w = self.other_than_v(self.U)
        return self.near_pm(w)

    def case3c(self, up: tuple[int, ...], scratch: dict) -> list[Edge]:
        gu_up = [self.loc[x] for x in up]
        if not is_nice_subgraph(self.gu, gu_up):
            scratch["nice"] = False
            return self.near_pm(self.other_than_v(up))
        scratch["nice"] = True
        ctx = build_case3c_scaffold(self.g, self.U, up, self.v)
        cyc = case3c_nice_cycle(ctx)
        s = ctx.scratch
        scratch.update({k: s[k] for k in ("i", "j", "i_prime", "j_prime", "I", "J", "P_ell",
                                          "cycle", "odd_arc", "even_arc")})
        even = s["even_arc"]
        v = self.v
        m = self.other_than_v({even[1], even[-2]})
        if m is not None:
            scratch["m"] = m
            return cycle_near_pm(cyc, m) + self.pm_of(self.uset - set(cyc))
        # v is the only node between i and j on the even arc
        n = len(cyc)
        kv = cyc.index(v)
        rest = [cyc[(kv + t) % n] for t in range(1, n)]
        base = path_pm(rest)
        outside = sorted(x for x in self.g.adjacency[v] if x in self.uset and x not in cyc)
        if outside:
            r = outside[0]
            c_loc = [self.loc[x] for x in cyc]
            dec = odd_ear_decomposition(self.gu, c_loc, first_ear_edge=(self.loc[v], self.loc[r]))
            p1 = self.lift_path(dec.ears[0])
            scratch.update(r=r, first_ear=p1)
            interior = p1[1:-1]
            if p1[0] != v or interior[0] != r or len(interior) < 2:
                raise ConstructionError(f"first ear {p1} does not leave v through r")
            # v takes r; the interior node next to the far end stays exposed
            return (base + [_pair(v, r)] + path_pm(interior[1:-1])
                    + self.pm_of(self.uset - set(cyc) - set(p1)))
        # every further neighbour of v is on the odd arc: swap v in along that chord
        r = min(x for x in self.g.adjacency[v] if x in cyc and x not in (s["i"], s["j"]))
        scratch.update(r=r, chord=True)
        pairs = [p for p in base if r not in p] + [_pair(v, r)]
        return pairs + self.pm_of(self.uset - set(cyc))

    # Case 4 (odd hole)
    def case4_edge(self, e: Edge) -> list[Edge]:
        v = self.v
        if len(self.U) == 3 and v not in e:
            r = min(x for x in self.g.adjacency[v] if x not in self.uset)
            return [e, _pair(v, r)]
        return self.cycle_with_edge(self.cycle, e, self.U)


def _dispatch(b: _Builder, target: Inequality, scratch: dict) -> tuple[Case, list[Edge]]:
    g = b.g
    if target.kind is Kind.NONNEG:
        e = g.edges[target.support[0]]
        if not (e[0] in b.uset and e[1] in b.uset):
            return (Case.CASE4 if b.hole else Case.CASE1A), b.case1a(e)
        if b.hole:
            return Case.CASE4, b.case4_edge(e)
        return Case.CASE1B, b.case1b(e, scratch)
    if target.kind is Kind.DEGREE:
        return (Case.CASE4 if b.hole else Case.CASE2), b.case2(target.support[0])
    up = set(target.support)
    if len(up) >= len(b.U) or not (up & b.uset):
        return (Case.CASE4 if b.hole else Case.CASE3A), b.case3a(up)
    if not up <= b.uset:
        return (Case.CASE4 if b.hole else Case.CASE3B), b.case3b(up)
    if b.hole:
        raise ConstructionError(f"odd set {sorted(up)} inside a chordless cycle cannot be a facet")
    return Case.CASE3C, b.case3c(tuple(sorted(up)), scratch)


def brute_force_witness(g: Graph, U: Iterable[int], v: int, target: Inequality) -> WitnessResult:
    """Canonically smallest matching meeting the three conditions, by exhaustive scan."""
    u = tuple(sorted(set(U)))
    if not is_blossom_set(g, u):
        raise PreconditionError(f"G[{list(u)}] is not factor-critical and 2-connected")
    for m in enumerate_matchings(g):
        checks = evaluate_checks(g, u, v, target, m)
        if all(checks.values()):
            return WitnessResult(target, m, Case.BRUTE_FORCE, checks)
    raise WitnessNotFound(f"no matching is tight on odd{list(u)} and deg({v}) but slack on {target.label()}")


def _validate_target(g: Graph, u: tuple[int, ...], v: int, target: Inequality) -> None:
    target.check_graph(g)
    if target == Inequality.oddset(u) or target == Inequality.degree(v):
        raise PreconditionError(f"{target.label()} is one of the two rows held tight")


def witness_matching(g: Graph, U: Iterable[int], v: int, target: Inequality,
                     hole: bool | None = None) -> WitnessResult:
    """Constructive witness for ``target``; falls back to the exhaustive scan if a case fails."""
    u = tuple(sorted(set(U)))
    if v not in u:
        raise PreconditionError(f"anchor {v} is not in {list(u)}")
    _validate_target(g, u, v, target)
    if hole is None:
        hole = is_chordless_odd_cycle(g.subgraph(u))
    b = _Builder(g, u, v, hole)
    return _witness(b, target)


def _witness(b: _Builder, target: Inequality) -> WitnessResult:
    g = b.g
    scratch: dict = {}
    tag = None
    problem = ""
    try:
        tag, pairs = _dispatch(b, target, scratch)
        m = Matching.from_pairs(g, pairs)
        checks = evaluate_checks(g, b.U, b.v, target, m)
        if all(checks.values()):
            return WitnessResult(target, m, tag, checks, detail=scratch)
        problem = f"construction failed checks {checks}"
    except (ConstructionError, PreconditionError, ValueError) as exc:
        problem = f"construction error: {exc}"
    res = brute_force_witness(g, b.U, b.v, target)
    return WitnessResult(target, res.matching, tag or Case.BRUTE_FORCE, res.checks,
                         fallback=True, note=problem, detail=scratch)


@dataclass
class WitnessReport:
    U: tuple[int, ...]
    v: int
    hole: bool
    results: list[WitnessResult]
    ridge_dimension: int
    edge_count: int

    @property
    def ridge(self) -> bool:
        return self.ridge_dimension == self.edge_count - 2

    @property
    def fallback_count(self) -> int:
        return sum(r.fallback for r in self.results)

    @property
    def ok(self) -> bool:
        return self.ridge and all(r.ok for r in self.results) and self.fallback_count == 0

    def to_json(self, g: Graph) -> dict:
        return {
            "facet": Inequality.oddset(self.U).to_json(),
            "anchor": self.v,
            "odd_hole": self.hole,
            "ridge_dimension": self.ridge_dimension,
            "ridge": self.ridge,
            "fallback_count": self.fallback_count,
            "witnesses": [r.to_json(g) for r in self.results],
        }


def witness_all(g: Graph, U: Iterable[int], v: int | None = None,
                facets: Sequence[Inequality] | None = None) -> WitnessReport:
    """Witnesses for every facet other than the odd-set row of ``U`` and the degree row of ``v``."""
    u = tuple(sorted(set(U)))
    anchor, hole = choose_anchor(g, u)
    if v is None:
        v = anchor
    elif v not in u:
        raise PreconditionError(f"anchor {v} is not in {list(u)}")
    if facets is None:
        facets = enumerate_facets(g)
    skip = {Inequality.oddset(u), Inequality.degree(v)}
    b = _Builder(g, u, v, hole)
    results = [_witness(b, q) for q in sorted(facets) if q not in skip]
    face = ridge_face(g, Inequality.oddset(u), Inequality.degree(v))
    return WitnessReport(u, v, hole, results, face.dimension, g.edge_count)
