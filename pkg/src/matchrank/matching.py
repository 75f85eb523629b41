"""Cardinality matchings: Edmonds' blossom algorithm plus brute-force enumeration."""

from __future__ import annotations

from collections import deque
from functools import lru_cache

from .graph import Graph, GuardExceeded, Matching, PreconditionError

MAX_ENUM_EDGES = 24


def _max_matching_pairs(g: Graph) -> list[tuple[int, int]]:
    """Edmonds' augmenting-path search with blossom shrinking via base labels."""
    n = g.node_count
    adj = g.adjacency
    match = [-1] * n
    for u in range(n):
        if match[u] == -1:
            for w in adj[u]:
                if match[w] == -1:
                    match[u], match[w] = w, u
                    break

    for root in range(n):
        if match[root] != -1:
            continue
        parent = [-1] * n
        base = list(range(n))
        used = [False] * n
        used[root] = True
        queue = deque([root])
        end = -1

        def lca(a: int, b: int) -> int:
            seen = [False] * n
            while True:
                a = base[a]
                seen[a] = True
                if match[a] == -1:
                    break
                a = parent[match[a]]
            while True:
                b = base[b]
                if seen[b]:
                    return b
                b = parent[match[b]]

        def mark_path(x: int, b: int, child: int, blossom: list[bool]) -> None:
            while base[x] != b:
                blossom[base[x]] = blossom[base[match[x]]] = True
                parent[x] = child
                child = match[x]
                x = parent[match[x]]

        while queue and end == -1:
            x = queue.popleft()
            for y in adj[x]:
                if base[x] == base[y] or match[x] == y:
                    continue
                if y == root or (match[y] != -1 and parent[match[y]] != -1):
                    cur = lca(x, y)
                    blossom = [False] * n
                    mark_path(x, cur, y, blossom)
                    mark_path(y, cur, x, blossom)
                    for z in range(n):
                        if blossom[base[z]]:
                            base[z] = cur
                            if not used[z]:
                                used[z] = True
                                queue.append(z)
                elif parent[y] == -1:
                    parent[y] = x
                    if match[y] == -1:
                        end = y
                        break
                    used[match[y]] = True
                    queue.append(match[y])

        # flip the augmenting path root ... end
        while end != -1:
            p = parent[end]
            nxt = match[p]
            match[end], match[p] = p, end
            end = nxt

    return [(u, match[u]) for u in range(n) if match[u] > u]


def maximum_matching(g: Graph) -> Matching:
    """Maximum cardinality matching of ``g`` (deterministic for a fixed graph)."""
    return Matching(frozenset(g.edge_id(u, v) for u, v in _max_matching_pairs(g)))


def matching_number(g: Graph) -> int:
    return len(_max_matching_pairs(g))


def has_perfect_matching(g: Graph) -> bool:
    if g.node_count % 2:
        return False
    return 2 * matching_number(g) == g.node_count


def perfect_matching(g: Graph) -> Matching | None:
    """Lexicographically smallest perfect matching under canonical edge order, or None.

    Edges are decided in index order; an edge is kept iff the graph left after
    removing its endpoints (and those already matched) still has a perfect
    matching.
    """
    if not has_perfect_matching(g):
        return None
    covered: set[int] = set()
    chosen: list[int] = []
    for k, (u, v) in enumerate(g.edges):
        if u in covered or v in covered:
            continue
        rest = g.without(covered | {u, v})
        if has_perfect_matching(rest):
            chosen.append(k)
            covered.update((u, v))
            if len(covered) == g.node_count:
                break
    return Matching(frozenset(chosen))


def near_pm_excluding(g: Graph, v: int) -> Matching:
    """Smallest perfect matching of ``g - v``, as a matching of ``g``.

    Raises :class:`PreconditionError` if ``g - v`` has none, which is exactly
    the case where ``g`` fails factor-criticality at ``v``.
    """
    if not 0 <= v < g.node_count:
        raise PreconditionError(f"node {v} not in graph")
    sub = g.without([v])
    pm = perfect_matching(sub)
    if pm is None:
        raise PreconditionError(f"graph minus node {v} has no perfect matching (not factor-critical)")
    return Matching(frozenset(g.edge_id(a, b) for a, b in sub.lift_pairs(pm.pairs(sub))))


def enumerate_matchings(g: Graph, max_edges: int = MAX_ENUM_EDGES) -> list[Matching]:
    """All matchings including the empty one, ordered by (size, sorted edge ids)."""
    return list(_enumerate_cached(g, max_edges))


@lru_cache(maxsize=64)
def _enumerate_cached(g: Graph, max_edges: int) -> tuple[Matching, ...]:
    if g.edge_count > max_edges:
        raise GuardExceeded(f"matching enumeration needs |E| <= {max_edges}, got {g.edge_count}")
    out: list[tuple[int, ...]] = []
    edges = g.edges

    def rec(start: int, used: int, acc: tuple[int, ...]) -> None:
        out.append(acc)
        for k in range(start, len(edges)):
            u, v = edges[k]
            bits = (1 << u) | (1 << v)
            if used & bits:
                continue
            rec(k + 1, used | bits, acc + (k,))

    rec(0, 0, ())
    out.sort(key=lambda t: (len(t), t))
    return tuple(Matching(frozenset(t)) for t in out)
