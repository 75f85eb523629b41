import pytest
from hypothesis import given, settings

from matchrank import Graph, PreconditionError
from matchrank.matching import has_perfect_matching
from matchrank.structure import (cut_nodes, is_2_connected, is_chordless_odd_cycle, is_connected,
                                 is_factor_critical, is_nice_subgraph)

from .helpers import complete, cycle, graphs


def test_factor_critical_examples():
    assert is_factor_critical(cycle(5))
    assert is_factor_critical(complete(5))
    assert not is_factor_critical(cycle(4))
    assert not is_factor_critical(Graph(3, [(0, 1), (1, 2)]))


def test_cut_nodes_bowtie():
    bowtie = Graph(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
    assert cut_nodes(bowtie) == {2}
    assert is_factor_critical(bowtie)
    assert not is_2_connected(bowtie)
    assert is_2_connected(cycle(5))
    with pytest.raises(PreconditionError):
        is_2_connected(Graph(2, [(0, 1)]))


def test_nice_subgraph():
    g = cycle(6)
    assert is_nice_subgraph(g, [0, 1])
    assert not is_nice_subgraph(g, [0, 2])
    with pytest.raises(PreconditionError):
        is_nice_subgraph(g, [0, 9])


def test_chordless_cycle():
    assert is_chordless_odd_cycle(cycle(7))
    assert not is_chordless_odd_cycle(cycle(6))
    assert not is_chordless_odd_cycle(complete(4))


def brute_cut_nodes(g):
    out = set()
    for v in g.nodes:
        rest = [x for x in g.nodes if x != v]
        if is_connected(g) and rest and not is_connected(g.subgraph(rest)):
            out.add(v)
    return out


@settings(max_examples=100, deadline=None)
@given(graphs(max_nodes=8, connected=True))
def test_cut_nodes_match_deletion(g):
    assert cut_nodes(g) == brute_cut_nodes(g)


@settings(max_examples=100, deadline=None)
@given(graphs(max_nodes=7))
def test_factor_critical_definition(g):
    expected = g.node_count % 2 == 1 and all(
        has_perfect_matching(g.without([v])) for v in g.nodes)
    assert is_factor_critical(g) == expected
