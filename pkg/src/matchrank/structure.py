"""Factor-criticality, 2-connectivity and nice subgraphs."""

from __future__ import annotations

from typing import Iterable

from .graph import Graph, PreconditionError
from .matching import has_perfect_matching


def is_factor_critical(g: Graph) -> bool:
    """True iff deleting any single node leaves a graph with a perfect matching."""
    if g.node_count % 2 == 0:
        return False
    return all(has_perfect_matching(g.without([v])) for v in g.nodes)


def is_connected(g: Graph) -> bool:
    if g.node_count == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in g.adjacency[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == g.node_count


def cut_nodes(g: Graph) -> set[int]:
    """Articulation points via iterative Hopcroft-Tarjan low-points."""
    n = g.node_count
    disc = [-1] * n
    low = [0] * n
    cuts: set[int] = set()
    timer = 0
    for root in g.nodes:
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        stack = [(root, -1, iter(g.adjacency[root]))]
        while stack:
            x, par, it = stack[-1]
            advanced = False
            for y in it:
                if disc[y] == -1:
                    disc[y] = low[y] = timer
                    timer += 1
                    stack.append((y, x, iter(g.adjacency[y])))
                    advanced = True
                    break
                if y != par:
                    low[x] = min(low[x], disc[y])
            if advanced:
                continue
            stack.pop()
            if par == -1:
                continue
            low[par] = min(low[par], low[x])
            if par == root:
                root_children += 1
            elif low[x] >= disc[par]:
                cuts.add(par)
        if root_children > 1:
            cuts.add(root)
    return cuts


def is_2_connected(g: Graph) -> bool:
    if g.node_count < 3:
        raise PreconditionError("2-connectivity is defined here for graphs with at least 3 nodes")
    return is_connected(g) and not cut_nodes(g)


def is_nice_subgraph(g: Graph, nodes: Iterable[int]) -> bool:
    """True iff ``g`` minus ``nodes`` has a perfect matching (vacuous when nothing remains)."""
    u = set(nodes)
    if not u <= set(g.nodes):
        raise PreconditionError(f"nodes {sorted(u - set(g.nodes))} are not in the graph")
    return has_perfect_matching(g.without(u))


def is_chordless_odd_cycle(g: Graph) -> bool:
    """Connected, 2-regular, odd order: an odd hole (or triangle)."""
    n = g.node_count
    return (n >= 3 and n % 2 == 1 and g.edge_count == n
            and all(g.degree(v) == 2 for v in g.nodes) and is_connected(g))
