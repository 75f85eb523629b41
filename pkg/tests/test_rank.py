import random

import pytest
from hypothesis import given, settings

from matchrank import Graph, GuardExceeded, Inequality, Kind, PreconditionError, corpus
from matchrank.polytope import enumerate_facets
from matchrank.rank import (certificate_violations, check_minimal_formulation,
                            is_minimal_formulation, lemma_minimal_formulation, rank_hierarchy,
                            rank_zero_facets, unbounded_edges, verify_rank_at_most_one)

from .helpers import cycle, graphs, random_connected

# computed by the exhaustive subset scan
EXHAUSTIVE_F0_SIZES = {"k3": 4, "c4": 8, "c5": 10, "paw": 6}
RHO = {"k3": 0, "c4": 0, "paw": 0, "c5": 1, "c7": 1, "k4": 1, "k5": 1, "two_triangles": 1, "petersen": 1}


def test_c4_every_facet_is_rank_zero():
    g = cycle(4)
    facets = enumerate_facets(g)
    assert len(facets) == 8
    assert rank_zero_facets(g, "exhaustive", facets) == facets
    assert lemma_minimal_formulation(g, facets) == facets
    assert rank_hierarchy(g, facets, facets).rho == 0


def test_c4_dropping_degree_admits_double_cover():
    g = cycle(4)
    facets = [q for q in enumerate_facets(g) if q != Inequality.degree(0)]
    res = check_minimal_formulation(g, facets)
    assert not res.hull_ok
    x = res.bad_point
    assert x[g.edge_id(0, 1)] == 1 and x[g.edge_id(0, 3)] == 1


def test_dropping_nonnegativity_is_unbounded():
    g = cycle(4)
    facets = [q for q in enumerate_facets(g) if q != Inequality.nonneg(2)]
    assert unbounded_edges(g, facets) == [2]
    assert not is_minimal_formulation(g, facets)


def test_c5_exhaustive_rank_zero_is_the_lemma_set():
    g = cycle(5)
    f0 = rank_zero_facets(g, "exhaustive")
    assert f0 == lemma_minimal_formulation(g)
    assert Inequality.oddset(range(5)) not in f0
    assert len(f0) == 10


@pytest.mark.parametrize("name", sorted(EXHAUSTIVE_F0_SIZES))
def test_exhaustive_golden(name):
    g = corpus.load(name)
    f0 = rank_zero_facets(g, "exhaustive")
    assert len(f0) == EXHAUSTIVE_F0_SIZES[name]
    assert set(lemma_minimal_formulation(g)) <= set(f0)


def test_paw_triangle_is_in_the_lemma_set():
    g = corpus.load("paw")
    lemma = lemma_minimal_formulation(g)
    assert Inequality.oddset([0, 1, 2]) in lemma
    assert is_minimal_formulation(g, lemma)


def test_k3_all_rank_zero():
    g = corpus.load("k3")
    rep = verify_rank_at_most_one(g)
    assert rep.rho == 0
    assert len(rep.rank_zero_set) == 4


def test_exhaustive_guard():
    with pytest.raises(GuardExceeded):
        rank_zero_facets(corpus.load("k4"), "exhaustive")
    with pytest.raises(ValueError):
        rank_zero_facets(cycle(4), "greedy")


def test_hierarchy_preconditions():
    g = cycle(5)
    with pytest.raises(PreconditionError):
        rank_hierarchy(g, [])
    with pytest.raises(PreconditionError):
        rank_hierarchy(g, [Inequality.oddset([0, 1, 2])])


@pytest.mark.parametrize("name", sorted(RHO))
def test_corpus_rho(name):
    g = corpus.load(name)
    rep = verify_rank_at_most_one(g)
    assert rep.rho == RHO[name]
    assert certificate_violations(g, rep) == []
    for q, (p, face) in rep.anchor_certificates.items():
        assert p.kind is Kind.DEGREE and face.dimension == g.edge_count - 2


def test_k5_golden_report():
    g = corpus.load("k5")
    rep = verify_rank_at_most_one(g)
    odd = {q: r for q, r in rep.rank_of.items() if q.kind is Kind.ODDSET}
    assert len(odd) == 11 and set(odd.values()) == {1}
    assert len(rep.rank_zero_set) == 15
    j = rep.to_json()
    assert j["rho"] == 1 and j["f0_mode"] == "lemma" and len(j["certificates"]) == 11


def test_small_rank_zero_set_can_give_higher_rank():
    g = cycle(5)
    rep = rank_hierarchy(g, [Inequality.nonneg(0)])
    assert rep.rho >= 2
    assert certificate_violations(g, rep) == []


def test_random_graphs_rank_at_most_one():
    rng = random.Random(21)
    for _ in range(30):
        g = random_connected(rng, rng.randint(3, 7), 0.4, max_edges=12)
        rep = verify_rank_at_most_one(g)
        assert rep.rho <= 1
        assert certificate_violations(g, rep) == []


@settings(max_examples=30, deadline=None)
@given(graphs(min_nodes=3, max_nodes=6, connected=True))
def test_hierarchy_invariants(g):
    facets = enumerate_facets(g)
    rep = rank_hierarchy(g, lemma_minimal_formulation(g, facets), facets)
    assert set(rep.rank_of) == set(facets)
    assert rep.rho == max(rep.rank_of.values())
    assert certificate_violations(g, rep) == []


@settings(max_examples=25, deadline=None)
@given(graphs(min_nodes=3, max_nodes=6, connected=True))
def test_enlarging_rank_zero_never_raises_ranks(g):
    facets = enumerate_facets(g)
    small = rank_hierarchy(g, facets[:1], facets)
    big = rank_hierarchy(g, facets[: max(2, len(facets) // 2)], facets)
    for q, r in big.rank_of.items():
        if q in small.rank_of:
            assert r <= small.rank_of[q]
    if small.exhausted:
        assert big.exhausted and big.rho <= small.rho


@settings(max_examples=20, deadline=None)
@given(graphs(min_nodes=3, max_nodes=5, connected=True))
def test_lemma_set_inside_exhaustive(g):
    facets = enumerate_facets(g)
    if len(facets) > 12:
        return
    assert set(lemma_minimal_formulation(g, facets)) <= set(rank_zero_facets(g, "exhaustive", facets))
