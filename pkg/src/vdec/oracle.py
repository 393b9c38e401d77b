"""Brute-force oracles for desk-scale cross-checks.

None of these share code with the algorithms they check beyond the
``Graph`` container; they trade speed for obviousness.
"""

from __future__ import annotations

import random
from itertools import combinations, permutations
from typing import Sequence

from .edge_coloring import EdgeColoring
from .graph import Graph, k_lower_bound


# --------------------------------------------------------------------------
# exact chromatic index for vertex-distinguishing colorings
# --------------------------------------------------------------------------


def _edge_order(g: Graph) -> list[tuple[int, int]]:
    # BFS vertex order so vertices finish early and duplicate checks prune
    pos: dict[int, int] = {}
    for root in range(g.n):
        if root in pos:
            continue
        pos[root] = len(pos)
        queue = [root]
        for v in queue:
            for w in g.adj[v]:
                if w not in pos:
                    pos[w] = len(pos)
                    queue.append(w)
    return sorted(g.edges, key=lambda e: (max(pos[e[0]], pos[e[1]]), min(pos[e[0]], pos[e[1]])))


def exact_vd_coloring(g: Graph, k: int) -> EdgeColoring | None:
    """A proper vd coloring with colors in [1, k], or None if none exists.

    Colors are introduced in increasing order (the first edge always gets
    color 1), and a vertex whose last edge is placed must not repeat the set
    of an earlier finished vertex.
    """
    edges = _edge_order(g)
    m = len(edges)
    last = {v: -1 for v in range(g.n)}
    for i, (u, v) in enumerate(edges):
        last[u] = i
        last[v] = i
    finishing: list[list[int]] = [[] for _ in range(m)]
    for v, i in last.items():
        if i >= 0:
            finishing[i].append(v)
    mask = [0] * g.n
    done = {0} if any(i < 0 for i in last.values()) else set()
    colors = [0] * m

    def place(i: int, highest: int) -> bool:
        if i == m:
            return True
        u, v = edges[i]
        for col in range(1, min(k, highest + 1) + 1):
            bit = 1 << col
            if mask[u] & bit or mask[v] & bit:
                continue
            mask[u] |= bit
            mask[v] |= bit
            added = []
            ok = True
            for x in finishing[i]:
                if mask[x] in done:
                    ok = False
                    break
                done.add(mask[x])
                added.append(mask[x])
            if ok:
                colors[i] = col
                if place(i + 1, max(highest, col)):
                    return True
            for s in added:
                done.discard(s)
            mask[u] ^= bit
            mask[v] ^= bit
        return False

    if not place(0, 0):
        return None
    return EdgeColoring(g, k, dict(zip(edges, colors)))


def exact_chi_vd(g: Graph, k_max: int | None = None) -> int | None:
    """Smallest k in [k(G), k_max] with a proper vd k-coloring, else None.

    ``k_max`` defaults to k(G) + 3.
    """
    lo = k_lower_bound(g)
    hi = lo + 3 if k_max is None else k_max
    for k in range(lo, hi + 1):
        if exact_vd_coloring(g, k) is not None:
            return k
    return None


# --------------------------------------------------------------------------
# randomized upper bound (independent of the exact search)
# --------------------------------------------------------------------------


class _Score:
    """Improper incidences plus surplus vertices per shared color-set."""

    def __init__(self, g: Graph, col: dict[tuple[int, int], int]):
        self.g, self.col = g, col
        self.lists = {v: [] for v in range(g.n)}
        for (u, v), c in col.items():
            self.lists[u].append(c)
            self.lists[v].append(c)
        self.seen: dict[frozenset, int] = {}
        for v in range(g.n):
            key = frozenset(self.lists[v])
            self.seen[key] = self.seen.get(key, 0) + 1
        self.value = sum(len(cs) - len(set(cs)) for cs in self.lists.values()) + sum(
            c - 1 for c in self.seen.values()
        )

    def _local(self, v: int) -> int:
        cs = self.lists[v]
        return len(cs) - len(set(cs))

    def recolor(self, e: tuple[int, int], c: int) -> None:
        old = self.col[e]
        if old == c:
            return
        for v in e:
            self.value -= self._local(v)
            key = frozenset(self.lists[v])
            self.seen[key] -= 1
            if self.seen[key] >= 1:
                self.value -= 1
            self.lists[v].remove(old)
            self.lists[v].append(c)
            key = frozenset(self.lists[v])
            self.seen[key] = self.seen.get(key, 0) + 1
            if self.seen[key] >= 2:
                self.value += 1
            self.value += self._local(v)
        self.col[e] = c


def random_vd_coloring(
    g: Graph, k: int, *, seed: int = 0, attempts: int = 20, steps: int = 1500
) -> EdgeColoring | None:
    """Min-conflicts search with random restarts; None means "not found"."""
    rng = random.Random(seed)
    edges = list(g.edges)
    for _ in range(attempts):
        col = {e: rng.randint(1, k) for e in edges}
        score = _Score(g, col)
        for _ in range(steps):
            if score.value == 0:
                break
            e = rng.choice(edges)
            old = col[e]
            before = score.value
            best, best_cols = None, []
            for c in range(1, k + 1):
                score.recolor(e, c)
                if best is None or score.value < best:
                    best, best_cols = score.value, [c]
                elif score.value == best:
                    best_cols.append(c)
            keep = best <= before or rng.random() < 0.1
            score.recolor(e, rng.choice(best_cols) if keep else old)
        if score.value == 0:
            return EdgeColoring(g, k, dict(col))
    return None


def random_chi_vd_upper(g: Graph, k_max: int | None = None, *, seed: int = 0) -> int | None:
    lo = k_lower_bound(g)
    hi = lo + 3 if k_max is None else k_max
    for k in range(lo, hi + 1):
        if random_vd_coloring(g, k, seed=seed) is not None:
            return k
    return None


# --------------------------------------------------------------------------
# matchings, factors and suns by exhaustion
# --------------------------------------------------------------------------


def brute_matching_size(g: Graph) -> int:
    """Maximum matching size: the lowest free vertex stays single or takes a
    free neighbour, exhaustively."""

    def go(free: frozenset) -> int:
        if len(free) < 2:
            return 0
        v = min(free)
        rest = free - {v}
        best = go(rest)
        for w in g.adj[v]:
            if w in rest:
                best = max(best, 1 + go(rest - {w}))
        return best

    return go(frozenset(range(g.n)))


def _has_perfect_matching(g: Graph, verts: Sequence[int]) -> bool:
    verts = list(verts)
    if not verts:
        return True
    if len(verts) % 2:
        return False
    v, rest = verts[0], verts[1:]
    for w in rest:
        if g.has_edge(v, w) and _has_perfect_matching(g, [x for x in rest if x != w]):
            return True
    return False


def brute_has_path_factor(g: Graph, verts: Sequence[int] | None = None) -> bool:
    """Does the induced subgraph have a spanning {P3, P4, P5}-factor?

    Tries every vertex sequence of length 3..5 that starts at the lowest
    remaining vertex or contains it.
    """
    remaining = sorted(range(g.n) if verts is None else verts)
    if not remaining:
        return True
    v = remaining[0]
    others = remaining[1:]
    for size in (3, 4, 5):
        for rest in combinations(others, size - 1):
            for order in permutations((v, *rest)):
                if order[0] > order[-1]:
                    continue
                if all(g.has_edge(a, b) for a, b in zip(order, order[1:])):
                    left = [x for x in others if x not in rest]
                    if brute_has_path_factor(g, left):
                        return True
                    break
    return False


def brute_is_sun(g: Graph) -> bool:
    """Sun test straight from the definition on a connected graph."""
    n = g.n
    if n in (1, 2):
        return n == 1 or g.m == 1
    if n < 6 or n % 2:
        return False
    for core in combinations(range(n), n // 2):
        cset = set(core)
        leaves = [v for v in range(n) if v not in cset]
        if any(g.degree(v) != 1 or g.adj[v][0] not in cset for v in leaves):
            continue
        if len({g.adj[v][0] for v in leaves}) != len(core):
            continue
        if all(
            _has_perfect_matching(g, [y for y in core if y != x]) for x in core
        ) and _core_connected(g, core):
            return True
    return False


def _core_connected(g: Graph, core: Sequence[int]) -> bool:
    cset = set(core)
    seen = {core[0]}
    stack = [core[0]]
    while stack:
        v = stack.pop()
        for w in g.adj[v]:
            if w in cset and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == cset
