"""Minimal formulations, rank-0 facets and the geometric rank hierarchy."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import Graph, GuardExceeded, PreconditionError
from .polytope import (FaceDescriptor, Inequality, Kind, enumerate_facets, is_facet,
                       ridge_face)

log = logging.getLogger(__name__)

MAX_FACETS_EXHAUSTIVE = 12
MAX_INTEGER_NODES = 2_000_000


class ConjectureViolation(AssertionError):
    """The computed rank exceeds 1 or an anchor ridge is missing."""

    def __init__(self, message: str, report: RankReport | None = None):
        super().__init__(message)
        self.report = report


def lemma_minimal_formulation(g: Graph, facets: Sequence[Inequality] | None = None) -> list[Inequality]:
    """Nonnegativity and degree facets plus triangles that contain a degree-2 node of ``g``."""
    if facets is None:
        facets = enumerate_facets(g)
    out = []
    for q in facets:
        if q.kind is not Kind.ODDSET:
            out.append(q)
        elif len(q.support) == 3 and any(g.degree(x) == 2 for x in q.support):
            out.append(q)
    return sorted(out)


# -- integer points of a subsystem --------------------------------------------

def unbounded_edges(g: Graph, system: Iterable[Inequality]) -> list[int]:
    """Edges whose variable is unbounded above or below in the integer hull of ``system``.

    All non-nonnegativity rows have 0/1 coefficients, so x_e is bounded below
    iff its nonnegativity row is present and bounded above iff some other row
    contains it.
    """
    lower = set()
    upper = set()
    for q in system:
        if q.kind is Kind.NONNEG:
            lower.add(q.support[0])
        else:
            upper.update(q.edge_support(g))
    return [k for k in range(g.edge_count) if k not in lower or k not in upper]


def _non_matching_point(g: Graph, system: Sequence[Inequality],
                        limit: int = MAX_INTEGER_NODES) -> tuple[int, ...] | None:
    """An integer point of the (bounded) system that is not a matching vector, if any.

    Backtracks over edges in index order inside the box [0, ub_e]; since every
    row other than nonnegativity has nonnegative coefficients, a partial row
    sum above its rhs prunes the branch.
    """
    rows = [(set(q.edge_support(g)), q.rhs) for q in system if q.kind is not Kind.NONNEG]
    m = g.edge_count
    rows_of: list[list[int]] = [[] for _ in range(m)]
    for r, (supp, _) in enumerate(rows):
        for k in supp:
            rows_of[k].append(r)
    ub = [min(rows[r][1] for r in rows_of[k]) for k in range(m)]
    slack = [rhs for _, rhs in rows]
    x = [0] * m
    visited = 0

    def is_matching_vector() -> bool:
        used = set()
        for k in range(m):
            if x[k] > 1:
                return False
            if x[k]:
                u, v = g.edges[k]
                if u in used or v in used:
                    return False
                used.update((u, v))
        return True

    def rec(k: int) -> bool:
        nonlocal visited
        visited += 1
        if visited > limit:
            raise GuardExceeded(f"integer point search exceeded {limit} nodes")
        if k == m:
            return not is_matching_vector()
        for val in range(ub[k], -1, -1):
            if any(slack[r] < val for r in rows_of[k]):
                continue
            for r in rows_of[k]:
                slack[r] -= val
            x[k] = val
            found = rec(k + 1)
            for r in rows_of[k]:
                slack[r] += val
            x[k] = 0
            if found:
                x[k] = val
                return True
        return False

    if rec(0):
        return tuple(x)
    return None


@dataclass
class FormulationCheck:
    """Outcome of the two minimal-formulation conditions for one subset."""

    hull_ok: bool
    unbounded: list[int] = field(default_factory=list)
    bad_point: tuple[int, ...] | None = None
    # member -> non-matching integer point admitted once it is dropped (None: unbounded)
    drop_witness: dict[Inequality, tuple[int, ...] | None] = field(default_factory=dict)
    redundant: list[Inequality] = field(default_factory=list)

    @property
    def minimal(self) -> bool:
        return self.hull_ok and not self.redundant


def integer_hull_is_polytope(g: Graph, system: Sequence[Inequality]) -> tuple[bool, list[int], tuple[int, ...] | None]:
    """Condition (i): every integer point of ``system`` is a matching (and the set is bounded)."""
    unb = unbounded_edges(g, system)
    if unb:
        return False, unb, None
    pt = _non_matching_point(g, system)
    return pt is None, [], pt


def check_minimal_formulation(g: Graph, fmin: Iterable[Inequality]) -> FormulationCheck:
    fmin = sorted(set(fmin))
    ok, unb, pt = integer_hull_is_polytope(g, fmin)
    res = FormulationCheck(ok, unb, pt)
    if not ok:
        return res
    for h in fmin:
        rest = [q for q in fmin if q != h]
        sub_ok, sub_unb, sub_pt = integer_hull_is_polytope(g, rest)
        if sub_ok:
            res.redundant.append(h)
        else:
            res.drop_witness[h] = sub_pt
    return res


def is_minimal_formulation(g: Graph, fmin: Iterable[Inequality]) -> bool:
    """Both conditions: the integer hull is the matching polytope and no member can be dropped."""
    return check_minimal_formulation(g, fmin).minimal


def rank_zero_facets(g: Graph, mode: str = "lemma", facets: Sequence[Inequality] | None = None,
                     max_facets: int = MAX_FACETS_EXHAUSTIVE) -> list[Inequality]:
    """Rank-0 facets: the lemma set, or (``exhaustive``) the union of all minimal formulations."""
    if facets is None:
        facets = enumerate_facets(g)
    if mode == "lemma":
        return lemma_minimal_formulation(g, facets)
    if mode != "exhaustive":
        raise ValueError(f"unknown f0 mode {mode!r}")
    facets = sorted(facets)
    n = len(facets)
    if max_facets > MAX_FACETS_EXHAUSTIVE:
        log.warning("exhaustive rank-0 cap raised to %d facets; the scan is exponential", max_facets)
    if n > max_facets:
        raise GuardExceeded(f"exhaustive rank-0 scan needs at most {max_facets} facets, got {n}")
    # condition (i) is upward closed, so minimal formulations are exactly the
    # inclusion-minimal subsets satisfying it
    hull_ok = [False] * (1 << n)
    for mask in range(1 << n):
        subset = [facets[t] for t in range(n) if mask >> t & 1]
        hull_ok[mask] = integer_hull_is_polytope(g, subset)[0]
    members = 0
    for mask in range(1 << n):
        if hull_ok[mask] and all(not hull_ok[mask & ~(1 << t)] for t in range(n) if mask >> t & 1):
            members |= mask
    return [facets[t] for t in range(n) if members >> t & 1]


# -- rank hierarchy --------------------------------------------------------------

@dataclass
class RankReport:
    rank_zero_set: list[Inequality]
    rank_of: dict[Inequality, int]
    rho: int
    certificates: dict[Inequality, tuple[Inequality, FaceDescriptor]]
    exhausted: bool = True
    f0_mode: str = "custom"
    # rank-1 odd set -> (degree facet of the anchor node, ridge face)
    anchor_certificates: dict[Inequality, tuple[Inequality, FaceDescriptor]] = field(default_factory=dict)
    edge_count: int = 0

    def layers(self) -> list[list[Inequality]]:
        out: list[list[Inequality]] = [[] for _ in range(self.rho + 1)]
        for q, r in sorted(self.rank_of.items()):
            out[r].append(q)
        return out

    def to_json(self) -> dict:
        return {
            "rho": self.rho,
            "exhausted": self.exhausted,
            "f0_mode": self.f0_mode,
            "ranks": [{"facet": q.to_json(), "rank": r} for q, r in sorted(self.rank_of.items())],
            "certificates": [
                {"facet": q.to_json(), "partner": p.to_json(), "ridge_dimension": face.dimension}
                for q, (p, face) in sorted(self.certificates.items())
            ],
            "anchor_certificates": [
                {"facet": q.to_json(), "partner": p.to_json(), "ridge_dimension": face.dimension}
                for q, (p, face) in sorted(self.anchor_certificates.items())
            ],
        }


def rank_hierarchy(g: Graph, f0: Iterable[Inequality], facets: Sequence[Inequality] | None = None,
                   f0_mode: str = "custom") -> RankReport:
    """Assign rank r+1 to every unranked facet with a ridge to some facet of rank <= r.

    Rounds stop when every facet is ranked or a round makes no progress (then
    ``exhausted`` is False). Certificates name the canonically smallest partner.
    """
    if facets is None:
        facets = enumerate_facets(g)
    facets = sorted(facets)
    fset = set(facets)
    f0 = sorted(set(f0))
    if not f0:
        raise PreconditionError("rank hierarchy needs a nonempty rank-0 set")
    for q in f0:
        if q not in fset:
            raise PreconditionError(f"{q.label()} is not a facet")
    rank_of = {q: 0 for q in f0}
    certificates: dict[Inequality, tuple[Inequality, FaceDescriptor]] = {}
    target = g.edge_count - 2
    r = 0
    while len(rank_of) < len(facets):
        ranked = sorted(rank_of)
        new: dict[Inequality, int] = {}
        for f in facets:
            if f in rank_of:
                continue
            for h in ranked:
                face = ridge_face(g, f, h)
                if face.dimension == target:
                    new[f] = r + 1
                    certificates[f] = (h, face)
                    break
        if not new:
            break
        rank_of.update(new)
        r += 1
        log.debug("round %d ranked %d facets", r, len(new))
    return RankReport(
        rank_zero_set=f0,
        rank_of=rank_of,
        rho=max(rank_of.values()),
        certificates=certificates,
        exhausted=len(rank_of) == len(facets),
        f0_mode=f0_mode,
        edge_count=g.edge_count,
    )


def verify_rank_at_most_one(g: Graph, facets: Sequence[Inequality] | None = None) -> RankReport:
    """Rank hierarchy from the lemma set, asserting rank <= 1 and anchor ridges.

    Every rank-1 odd set must also form a ridge with the degree facet of the
    anchor node chosen by :func:`matchrank.witness.choose_anchor`.
    """
    from .witness import choose_anchor

    if facets is None:
        facets = enumerate_facets(g)
    report = rank_hierarchy(g, lemma_minimal_formulation(g, facets), facets, f0_mode="lemma")
    if not report.exhausted:
        raise ConjectureViolation("rank hierarchy does not reach every facet", report)
    if report.rho > 1:
        raise ConjectureViolation(f"geometric rank {report.rho} > 1", report)
    for q, r in sorted(report.rank_of.items()):
        if r != 1:
            continue
        if q.kind is not Kind.ODDSET:
            raise ConjectureViolation(f"{q.label()} has rank 1 but is not an odd set", report)
        v, _ = choose_anchor(g, q.support)
        partner = Inequality.degree(v)
        if partner not in report.rank_of:
            raise ConjectureViolation(f"anchor degree row {partner.label()} is not a facet", report)
        face = ridge_face(g, q, partner)
        if face.dimension != g.edge_count - 2:
            raise ConjectureViolation(
                f"{q.label()} and {partner.label()} meet in dimension {face.dimension}", report)
        report.anchor_certificates[q] = (partner, face)
    return report


def certificate_violations(g: Graph, report: RankReport) -> list[str]:
    """Independent re-check of every certificate in ``report``."""
    out = []
    for q, (p, _) in report.certificates.items():
        if report.rank_of.get(p, 10**9) >= report.rank_of[q]:
            out.append(f"{q.label()}: partner {p.label()} does not have lower rank")
        if ridge_face(g, q, p).dimension != g.edge_count - 2:
            out.append(f"{q.label()}: {p.label()} is not a ridge partner")
    for q, r in report.rank_of.items():
        if r >= 1 and q not in report.certificates:
            out.append(f"{q.label()}: rank {r} without certificate")
        if (r == 0) != (q in report.rank_zero_set):
            out.append(f"{q.label()}: rank 0 mismatch")
        if not is_facet(g, q):
            out.append(f"{q.label()} is not a facet")
    return out
