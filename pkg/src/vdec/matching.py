"""Maximum-cardinality matching in general graphs (Edmonds' blossom method)
and the factor-criticality tests built on it."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Mapping

from .errors import NoPerfectMatchingError
from .graph import Graph

Matching = list[tuple[int, int]]
Adjacency = Mapping[int, Iterable[int]]


def _as_adjacency(g: Graph) -> dict[int, list[int]]:
    return {v: list(g.adj[v]) for v in range(g.n)}


def max_matching_adj(adj: Adjacency) -> Matching:
    """Maximum matching of the graph given as ``vertex -> neighbours``.

    Vertex ids may be arbitrary hashables that sort; neighbours outside the
    key set are ignored.
    """
    verts = sorted(adj)
    idx = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    nbrs = [[idx[w] for w in adj[v] if w in idx and w != v] for v in verts]
    mate = [-1] * n

    # greedy start; the blossom search only has to fix what is left
    for v in range(n):
        if mate[v] == -1:
            for w in nbrs[v]:
                if mate[w] == -1:
                    mate[v], mate[w] = w, v
                    break

    for root in range(n):
        if mate[root] == -1:
            _augment_from(root, nbrs, mate)

    return sorted((verts[v], verts[mate[v]]) for v in range(n) if v < mate[v])


def _augment_from(root: int, nbrs: list[list[int]], mate: list[int]) -> bool:
    n = len(nbrs)
    parent = [-1] * n
    base = list(range(n))
    in_tree = [False] * n
    in_tree[root] = True
    queue = deque([root])

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[mate[b]]

    def mark(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = blossom[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    while queue:
        v = queue.popleft()
        for to in nbrs[v]:
            if base[v] == base[to] or mate[v] == to:
                continue
            if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                # odd cycle: shrink the blossom onto its base
                cur = lca(v, to)
                blossom = [False] * n
                mark(v, cur, to, blossom)
                mark(to, cur, v, blossom)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = cur
                        if not in_tree[i]:
                            in_tree[i] = True
                            queue.append(i)
            elif parent[to] == -1:
                parent[to] = v
                if mate[to] == -1:
                    # augmenting path found: flip it back to the root
                    x = to
                    while x != -1:
                        px = parent[x]
                        nxt = mate[px]
                        mate[x], mate[px] = px, x
                        x = nxt
                    return True
                in_tree[mate[to]] = True
                queue.append(mate[to])
    return False


def max_matching(g: Graph) -> Matching:
    return max_matching_adj(_as_adjacency(g))


def _is_connected(adj: Adjacency) -> bool:
    verts = list(adj)
    if not verts:
        return True
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y in adj and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(verts)


def _without(adj: Adjacency, x) -> dict:
    return {v: [w for w in ns if w != x] for v, ns in adj.items() if v != x}


def is_factor_critical_adj(adj: Adjacency) -> bool:
    n = len(adj)
    if n % 2 == 0 or not _is_connected(adj):
        return False
    half = (n - 1) // 2
    return all(len(max_matching_adj(_without(adj, x))) == half for x in sorted(adj))


def is_factor_critical(g: Graph) -> bool:
    """Connected, and ``g - x`` has a perfect matching for every vertex x."""
    return is_factor_critical_adj(_as_adjacency(g))


def near_perfect_matching_adj(adj: Adjacency, x) -> Matching:
    rest = _without(adj, x)
    m = max_matching_adj(rest)
    if 2 * len(m) != len(rest):
        raise NoPerfectMatchingError(f"graph minus {x!r} has no perfect matching")
    return m


def near_perfect_matching(g: Graph, x: int) -> Matching:
    """A perfect matching of ``g - x``."""
    return near_perfect_matching_adj(_as_adjacency(g), x)
