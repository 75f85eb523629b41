"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line in ``RESULTS``; the lines are printed in
the terminal summary of the pytest run (and immediately with ``-s``).
"""

import random
import time
from contextlib import contextmanager

import pytest

from matchrank import Inequality, Kind, corpus
from matchrank.ears import (decomposition_violations, nice_odd_cycle_through_edge, odd_ear_decomposition,
                            proper_odd_ear_decomposition)
from matchrank.polytope import enumerate_facets, facet_oracle, polytope_dimension
from matchrank.rank import (check_minimal_formulation, integer_hull_is_polytope, is_minimal_formulation,
                            lemma_minimal_formulation, rank_hierarchy, rank_zero_facets,
                            verify_rank_at_most_one)
from matchrank.structure import is_2_connected, is_factor_critical, is_nice_subgraph
from matchrank.witness import brute_force_witness, evaluate_checks, witness_all, witness_matching

from .helpers import random_factor_critical, random_graph

RESULTS: dict[int, str] = {}


@contextmanager
def criterion(n: int, title: str):
    start = time.perf_counter()
    info: dict = {}
    try:
        yield info
    except BaseException as exc:
        RESULTS[n] = f"criterion {n} FAIL  {title}: {type(exc).__name__}: {str(exc)[:200]}"
        print(RESULTS[n])
        raise
    extra = f" ({info['detail']})" if "detail" in info else ""
    RESULTS[n] = f"criterion {n} PASS  {title}{extra} [{time.perf_counter() - start:.2f}s]"
    print(RESULTS[n])


def rank_one_oddsets(g, facets):
    lemma = set(lemma_minimal_formulation(g, facets))
    return [q for q in facets if q.kind is Kind.ODDSET and q not in lemma]


def test_criterion_1_c4_rank_zero():
    with criterion(1, "C4: every facet is rank 0, rho = 0, no facet can be dropped") as info:
        start = time.perf_counter()
        g = corpus.load("c4")
        facets = enumerate_facets(g)
        assert len(facets) == 8
        f0 = rank_zero_facets(g, "exhaustive", facets)
        assert f0 == facets
        assert rank_hierarchy(g, f0, facets).rho == 0
        for h in facets:
            ok, _, _ = integer_hull_is_polytope(g, [q for q in facets if q != h])
            assert not ok, f"dropping {h.label(g)} keeps the integer hull"
        elapsed = time.perf_counter() - start
        assert elapsed < 1.0, f"took {elapsed:.2f}s"
        info["detail"] = f"{elapsed:.3f}s"


def test_criterion_2_rank_at_most_one_on_corpus():
    with criterion(2, "rho <= 1 on every corpus graph with degree-facet ridge certificates") as info:
        start = time.perf_counter()
        rhos = {}
        for name, g in corpus.bundled_corpus().items():
            facets = enumerate_facets(g)
            rep = verify_rank_at_most_one(g, facets)
            assert rep.rho <= 1, name
            for q, r in rep.rank_of.items():
                if r == 1:
                    p, face = rep.anchor_certificates[q]
                    assert p.kind is Kind.DEGREE and face.dimension == g.edge_count - 2, (name, q)
            rhos[name] = rep.rho
        elapsed = time.perf_counter() - start
        assert elapsed < 60.0, f"took {elapsed:.1f}s"
        info["detail"] = " ".join(f"{k}={v}" for k, v in rhos.items())


def test_criterion_3_witness_completeness():
    with criterion(3, "constructive witnesses for every rank-1 odd-set facet, no fallback") as info:
        total = 0
        for name, g in corpus.bundled_corpus().items():
            facets = enumerate_facets(g)
            for q in rank_one_oddsets(g, facets):
                rep = witness_all(g, q.support, None, facets)
                assert rep.ridge, (name, q.support)
                assert rep.fallback_count == 0, (name, q.support)
                for r in rep.results:
                    checks = evaluate_checks(g, q.support, rep.v, r.target, r.matching)
                    assert all(checks.values()) and checks == r.checks, (name, q.support, r.target)
                total += len(rep.results)
        info["detail"] = f"{total} witnesses"


def test_criterion_4_facet_oracle_equivalence():
    with criterion(4, "facet list equals the dimension oracle; P is full-dimensional") as info:
        checked = []
        for name, g in corpus.bundled_corpus().items():
            if g.edge_count > 15:
                continue
            assert enumerate_facets(g) == facet_oracle(g), name
            assert polytope_dimension(g) == g.edge_count, name
            checked.append(name)
        info["detail"] = f"{len(checked)} graphs"


def test_criterion_5_witness_oracle_agreement():
    with criterion(5, "constructive and brute-force witnesses agree on every tuple") as info:
        tuples = 0
        for name, g in corpus.bundled_corpus().items():
            facets = enumerate_facets(g)
            for q in rank_one_oddsets(g, facets):
                rep = witness_all(g, q.support, None, facets)
                for t in facets:
                    if t in (q, Inequality.degree(rep.v)):
                        continue
                    a = witness_matching(g, q.support, rep.v, t)
                    b = brute_force_witness(g, q.support, rep.v, t)
                    assert not a.fallback, (name, q.support, t)
                    assert a.checks == b.checks and all(a.checks.values()), (name, q.support, t)
                    tuples += 1
        info["detail"] = f"{tuples} tuples"


def test_criterion_6_factor_critical_machinery():
    with criterion(6, "nice odd cycles through edges and ear decompositions on random graphs") as info:
        rng = random.Random(20240601)
        graphs = []
        while len(graphs) < 160:
            graphs.append(random_factor_critical(rng, 11))
        while len(graphs) < 220:
            g = random_graph(rng, rng.choice([3, 5, 7, 9, 11]), rng.uniform(0.3, 0.8))
            if is_factor_critical(g) and g.edge_count:
                graphs.append(g)
        cycles = proper = 0
        violations = []
        for g in graphs:
            assert g.node_count <= 11
            for e in g.edges:
                c = nice_odd_cycle_through_edge(g, e)
                pairs = {frozenset(p) for p in zip(c, c[1:] + c[:1])}
                if not (len(c) % 2 == 1 and frozenset(e) in pairs and is_nice_subgraph(g, c)
                        and all(g.has_edge(*tuple(p)) for p in pairs)):
                    violations.append((g.edges, e, c))
                cycles += 1
            dec = odd_ear_decomposition(g, nice_odd_cycle_through_edge(g, g.edges[0]))
            violations += decomposition_violations(g, dec)
            if g.node_count >= 3 and is_2_connected(g):
                violations += decomposition_violations(g, proper_odd_ear_decomposition(g), proper=True)
                proper += 1
        assert violations == [], violations[:5]
        info["detail"] = f"{len(graphs)} graphs, {cycles} cycles, {proper} proper decompositions"


def test_criterion_7_lemma_set_is_minimal():
    with criterion(7, "lemma set is a minimal formulation on every corpus graph") as info:
        for name, g in corpus.bundled_corpus().items():
            lemma = lemma_minimal_formulation(g)
            res = check_minimal_formulation(g, lemma)
            assert res.hull_ok, (name, res.unbounded, res.bad_point)
            assert res.redundant == [], (name, [q.label(g) for q in res.redundant])
            assert is_minimal_formulation(g, lemma)
            for h in lemma:
                assert not is_minimal_formulation(g, [q for q in lemma if q != h]), (name, h.label(g))
        info["detail"] = f"{len(corpus.NAMES)} graphs"
