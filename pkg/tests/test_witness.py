import random
from collections import Counter

import pytest

from matchrank import Graph, Inequality, Kind, PreconditionError, corpus
from matchrank.graph import is_matching
from matchrank.polytope import enumerate_facets
from matchrank.rank import lemma_minimal_formulation
from matchrank.structure import is_chordless_odd_cycle, is_factor_critical, is_nice_subgraph
from matchrank.witness import (Case, RankZeroFacet, brute_force_witness, build_case3c_scaffold,
                               case3c_nice_cycle, choose_anchor, evaluate_checks, witness_all,
                               witness_matching)

from .helpers import complete, cycle, random_connected

# two nested blossoms; the scaffold for U' = {0,3,4,5,6} grows a component I = {1, 2}
NESTED = Graph(9, [(0, 1), (0, 2), (0, 3), (0, 5), (1, 2), (1, 4), (1, 7), (3, 4), (3, 5),
                   (4, 6), (5, 6), (6, 8), (7, 8)])


def scaffold_ok(g, U, ctx):
    s = ctx.scratch
    assert len(s["I"]) % 2 == 0 and len(s["J"]) % 2 == 0
    assert not set(s["I"]) & set(s["J"])
    gl = g.subgraph(s["G_ell_nodes"], [g.edge_id(*e) for e in s["G_ell_edges"]])
    assert is_factor_critical(gl)
    sub = g.subgraph(U)
    assert is_nice_subgraph(sub, [U.index(x) for x in s["G_ell_nodes"]])
    c = case3c_nice_cycle(ctx)
    assert len(c) % 2 == 1
    assert is_nice_subgraph(sub, [U.index(x) for x in c])
    pairs = {frozenset(p) for p in zip(c, c[1:] + c[:1])}
    assert frozenset((s["i_prime"], s["j_prime"])) in pairs
    return c


def test_c5_nonneg_example():
    g = cycle(5)
    r = witness_matching(g, range(5), 0, Inequality.nonneg(g.edge_id(1, 2)))
    assert r.case_tag is Case.CASE4
    assert r.matching.pairs(g) == [(0, 4), (1, 2)]
    assert r.ok and not r.fallback


def test_c5_degree_example():
    g = cycle(5)
    r = witness_matching(g, range(5), 0, Inequality.degree(2))
    assert r.matching.pairs(g) == [(0, 1), (3, 4)]
    assert r.ok


def test_k5_triangle_target():
    g = complete(5)
    r = witness_matching(g, range(5), 0, Inequality.oddset([1, 2, 3]))
    assert r.case_tag is Case.CASE3C
    assert r.ok and len(r.matching) == 2


def test_anchor_choice():
    assert choose_anchor(cycle(5), range(5)) == (0, True)
    assert choose_anchor(complete(5), range(5)) == (0, False)
    assert choose_anchor(complete(4), [0, 1, 2]) == (0, True)
    with pytest.raises(RankZeroFacet):
        choose_anchor(complete(3), range(3))
    with pytest.raises(PreconditionError):
        choose_anchor(cycle(4), [0, 1, 2])


def test_c5_witness_all():
    g = cycle(5)
    rep = witness_all(g, range(5))
    assert len(rep.results) == 9
    assert rep.ridge and rep.fallback_count == 0


def test_k4_triangle_witness_all():
    g = complete(4)
    rep = witness_all(g, [0, 1, 2])
    assert rep.hole and rep.ok
    assert {r.case_tag for r in rep.results} == {Case.CASE4}


def test_petersen_pentagon_is_case4():
    g = corpus.load("petersen")
    rep = witness_all(g, [0, 1, 2, 3, 4])
    assert rep.hole and rep.ok
    assert {r.case_tag for r in rep.results} == {Case.CASE4}


def test_k5_scaffold():
    g = complete(5)
    U = tuple(range(5))
    ctx = build_case3c_scaffold(g, U, [0, 1, 2])
    scaffold_ok(g, U, ctx)


def test_two_triangles_scaffold():
    g = corpus.load("two_triangles")
    U = tuple(range(7))
    v, _ = choose_anchor(g, U)
    ctx = build_case3c_scaffold(g, U, [3, 4, 5], v)
    scaffold_ok(g, U, ctx)
    assert witness_all(g, U).ok


def test_scaffold_grows_components():
    U = tuple(range(9))
    ctx = build_case3c_scaffold(NESTED, U, [1, 4, 6, 7, 8], 0)
    assert ctx.scratch["I"] == (0, 2)
    scaffold_ok(NESTED, U, ctx)
    assert witness_all(NESTED, U).ok


def test_single_edge_connecting_ear():
    U = tuple(range(9))
    ctx = build_case3c_scaffold(NESTED, U, [0, 3, 4, 5, 6], 0)
    s = ctx.scratch
    # a closed ear on 0 grows I = {1, 2}; the edge (1, 4) then joins it to U'
    assert s["I"] == (1, 2) and s["J"] == ()
    assert s["P_ell"] == (1, 4) == (s["i_prime"], s["j_prime"])
    assert s["j"] == s["j_prime"] == 4
    scaffold_ok(NESTED, U, ctx)


def test_scaffold_rejects_non_nice_subset():
    g = complete(5)
    with pytest.raises(PreconditionError):
        build_case3c_scaffold(g, range(5), [0, 1, 2, 3, 4])


def test_brute_force_oracle():
    g = cycle(5)
    r = brute_force_witness(g, range(5), 0, Inequality.degree(3))
    assert r.case_tag is Case.BRUTE_FORCE and r.ok
    with pytest.raises(PreconditionError):
        brute_force_witness(cycle(4), [0, 1, 2], 0, Inequality.degree(3))


def test_target_cannot_be_a_tight_row():
    g = cycle(5)
    with pytest.raises(PreconditionError):
        witness_matching(g, range(5), 0, Inequality.degree(0))
    with pytest.raises(PreconditionError):
        witness_matching(g, range(5), 7, Inequality.degree(1))


def rank_one_sets(g, facets):
    lemma = set(lemma_minimal_formulation(g, facets))
    return [q.support for q in facets if q.kind is Kind.ODDSET and q not in lemma]


def test_random_graphs_constructive_witnesses():
    rng = random.Random(1)
    tags = Counter()
    for _ in range(40):
        g = random_connected(rng, rng.randint(5, 9), 0.35, max_edges=14)
        facets = enumerate_facets(g)
        for U in rank_one_sets(g, facets):
            rep = witness_all(g, U, None, facets)
            assert rep.ok, (g.edges, U)
            assert rep.hole == is_chordless_odd_cycle(g.subgraph(U))
            for r in rep.results:
                assert is_matching(g, r.matching.edge_ids)
                assert evaluate_checks(g, U, rep.v, r.target, r.matching) == r.checks
                tags[r.case_tag] += 1
    assert {Case.CASE1A, Case.CASE1B, Case.CASE2, Case.CASE3A, Case.CASE3C, Case.CASE4} <= set(tags)
    assert Case.BRUTE_FORCE not in tags


def test_report_json_shape():
    g = cycle(5)
    j = witness_all(g, range(5)).to_json(g)
    assert j["fallback_count"] == 0 and j["ridge"] and j["anchor"] == 0
    assert set(j["witnesses"][0]) == {"target", "case", "matching", "checks", "fallback"}
