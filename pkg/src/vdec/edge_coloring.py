"""Proper edge colorings, Kempe chains and the semi-vertex-distinguishing
refinement.

Colors are positive integers ``1..palette``.  Internally color-sets are Python
ints used as bitsets (bit ``c`` set when color ``c`` is present), which keeps
them hashable at any palette width.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Iterator

from .errors import PreconditionError, SemiVdFailed
from .graph import Graph, degree_profile

ColorSet = frozenset
Edge = tuple[int, int]


def _canon(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass
class EdgeColoring:
    """Map from canonical host edges to colors in ``[1, palette]``.

    May be partial; ``is_total`` tells.
    """

    host: Graph
    palette: int
    colors: dict[Edge, int] = field(default_factory=dict)

    def color(self, u: int, v: int) -> int | None:
        return self.colors.get(_canon(u, v))

    def is_total(self) -> bool:
        return len(self.colors) == self.host.m

    def colors_used(self) -> set[int]:
        return set(self.colors.values())

    def color_set(self, v: int) -> frozenset[int]:
        return color_set(self, v)

    def is_proper(self) -> bool:
        for v in range(self.host.n):
            seen = set()
            for w in self.host.adj[v]:
                c = self.colors.get(_canon(v, w))
                if c is None:
                    continue
                if c in seen or not 1 <= c <= self.palette:
                    return False
                seen.add(c)
        return True

    def copy(self) -> "EdgeColoring":
        return EdgeColoring(self.host, self.palette, dict(self.colors))


def color_set(c: EdgeColoring, v: int) -> frozenset[int]:
    """Colors on the edges at ``v``; raises if any of them is uncolored."""
    out = []
    for w in c.host.adj[v]:
        col = c.colors.get(_canon(v, w))
        if col is None:
            raise ValueError(f"edge ({v}, {w}) is uncolored")
        out.append(col)
    return frozenset(out)


def partial_color_set(c: EdgeColoring, v: int) -> frozenset[int]:
    """Colors on the colored edges at ``v`` (uncolored edges skipped)."""
    return frozenset(
        col
        for w in c.host.adj[v]
        if (col := c.colors.get(_canon(v, w))) is not None
    )


def color_set_table(c: EdgeColoring) -> Counter:
    """ColorSet -> number of vertices carrying it (nonzero entries only)."""
    return Counter(color_set(c, v) for v in range(c.host.n))


def potential(c: EdgeColoring) -> int:
    """Sum of squared color-set multiplicities."""
    return sum(k * k for k in color_set_table(c).values())


def max_multiplicity(c: EdgeColoring) -> int:
    return max(color_set_table(c).values(), default=0)


def is_semi_vd(c: EdgeColoring) -> bool:
    return max_multiplicity(c) <= 2


# --------------------------------------------------------------------------
# Vizing (Misra-Gries fan rotation)
# --------------------------------------------------------------------------


def vizing_color(g: Graph) -> EdgeColoring:
    """Proper coloring with palette ``max_degree + 1``."""
    palette = g.max_degree + 1
    at: list[dict[int, int]] = [dict() for _ in range(g.n)]
    for u, v in g.edges:
        _misra_gries_step(at, u, v, palette)
    colors = {}
    for u in range(g.n):
        for col, w in at[u].items():
            if u < w:
                colors[(u, w)] = col
    return EdgeColoring(g, palette, colors)


def _lowest_free(at_v: dict[int, int], palette: int) -> int:
    for col in range(1, palette + 1):
        if col not in at_v:
            return col
    raise AssertionError("no free color; palette below max degree + 1")


def _set(at, u: int, v: int, col: int) -> None:
    at[u][col] = v
    at[v][col] = u


def _unset(at, u: int, v: int, col: int) -> None:
    del at[u][col]
    del at[v][col]


def _misra_gries_step(at: list[dict[int, int]], u: int, v: int, palette: int) -> None:
    # maximal fan at u starting with the uncolored edge uv
    fan = [v]
    in_fan = {v}
    while True:
        last = at[fan[-1]]
        ext = None
        for col in range(1, palette + 1):
            if col not in last:
                z = at[u].get(col)
                if z is not None and z not in in_fan:
                    ext = z
                    break
        if ext is None:
            break
        fan.append(ext)
        in_fan.add(ext)

    c = _lowest_free(at[u], palette)
    d = _lowest_free(at[fan[-1]], palette)

    if c != d:
        # invert the cd-path through u; it starts with u's d-edge since c is free at u
        path = [u]
        cur, col = u, d
        while col in at[cur]:
            cur = at[cur][col]
            path.append(cur)
            col = c if col == d else d
        cols = [d if i % 2 == 0 else c for i in range(len(path) - 1)]
        for i, col in enumerate(cols):
            _unset(at, path[i], path[i + 1], col)
        for i, col in enumerate(cols):
            _set(at, path[i], path[i + 1], c if col == d else d)

    # shortest valid fan prefix ending at a vertex where d is free
    end = None
    for i, f in enumerate(fan):
        if i > 0:
            col_i = _edge_color(at, u, f)
            if col_i is None or col_i in at[fan[i - 1]]:
                break
        if d not in at[f]:
            end = i
            break
    if end is None:
        raise AssertionError("Misra-Gries invariant broken")

    shifted = [_edge_color(at, u, fan[j + 1]) for j in range(end)]
    for j in range(end):
        _unset(at, u, fan[j + 1], shifted[j])
    for j in range(end):
        _set(at, u, fan[j], shifted[j])
    _set(at, u, fan[end], d)


def _edge_color(at, u: int, w: int) -> int | None:
    for col, z in at[u].items():
        if z == w:
            return col
    return None


# --------------------------------------------------------------------------
# Kempe chains
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class KempeChain:
    """A maximal a/b-colored component: vertices in walk order."""

    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    is_cycle: bool


def kempe_chains(c: EdgeColoring, a: int, b: int) -> list[KempeChain]:
    """Components of the subgraph formed by the a- and b-colored edges."""
    if a == b:
        raise ValueError("Kempe chains need two distinct colors")
    at: dict[int, dict[int, int]] = {}
    for (u, v), col in c.colors.items():
        if col == a or col == b:
            at.setdefault(u, {})[col] = v
            at.setdefault(v, {})[col] = u
    seen: set[int] = set()
    chains = []
    # paths first start at their degree-1 ends so the walk covers them whole
    starts = sorted(at, key=lambda x: (len(at[x]) != 1, x))
    for s in starts:
        if s in seen:
            continue
        verts = [s]
        seen.add(s)
        col = min(at[s])
        cur = s
        closed = False
        while col in at[cur]:
            nxt = at[cur][col]
            if nxt == s:
                closed = True
                break
            verts.append(nxt)
            seen.add(nxt)
            cur = nxt
            col = b if col == a else a
        edges = tuple(_canon(verts[i], verts[i + 1]) for i in range(len(verts) - 1))
        if closed:
            edges += (_canon(verts[-1], s),)
        chains.append(KempeChain(tuple(verts), edges, closed))
    chains.sort(key=lambda ch: min(ch.vertices))
    return chains


def swap_chain(c: EdgeColoring, chain: KempeChain, a: int, b: int) -> EdgeColoring:
    out = c.copy()
    for e in chain.edges:
        col = out.colors[e]
        out.colors[e] = b if col == a else a
    return out


# --------------------------------------------------------------------------
# semi-vd refinement
# --------------------------------------------------------------------------


class _Search:
    """Mutable working copy for the Kempe local search."""

    def __init__(self, c: EdgeColoring):
        g = c.host
        self.g = g
        self.palette = c.palette
        self.at: list[dict[int, int]] = [dict() for _ in range(g.n)]
        for (u, v), col in c.colors.items():
            self.at[u][col] = v
            self.at[v][col] = u
        self.mask = [0] * g.n
        for v in range(g.n):
            m = 0
            for col in self.at[v]:
                m |= 1 << col
            self.mask[v] = m
        self.table: Counter = Counter(self.mask)
        self.potential = sum(k * k for k in self.table.values())

    def coloring(self) -> EdgeColoring:
        colors = {}
        for u in range(self.g.n):
            for col, w in self.at[u].items():
                if u < w:
                    colors[(u, w)] = col
        return EdgeColoring(self.g, self.palette, colors)

    def worst(self) -> int:
        return max(self.table.values(), default=0)

    def chain_end(self, v: int, a: int, b: int) -> int:
        at = self.at
        cur, col = v, a
        while True:
            nxt = at[cur].get(col)
            if nxt is None:
                return cur
            cur = nxt
            col = b if col == a else a

    def delta(self, v: int, w: int, flip: int) -> int:
        t = self.table
        change: dict[int, int] = {}
        for x in (v, w):
            old = self.mask[x]
            change[old] = change.get(old, 0) - 1
            change[old ^ flip] = change.get(old ^ flip, 0) + 1
        total = 0
        for key, d in change.items():
            if d:
                cur = t.get(key, 0)
                total += (cur + d) ** 2 - cur * cur
        return total

    def apply(self, v: int, a: int, b: int, delta: int) -> None:
        at = self.at
        path = [v]
        cur, col = v, a
        while col in at[cur]:
            cur = at[cur][col]
            path.append(cur)
            col = b if col == a else a
        cols = [a if i % 2 == 0 else b for i in range(len(path) - 1)]
        for i, col in enumerate(cols):
            x, y = path[i], path[i + 1]
            del at[x][col]
            del at[y][col]
        for i, col in enumerate(cols):
            x, y = path[i], path[i + 1]
            new = b if col == a else a
            at[x][new] = y
            at[y][new] = x
        flip = (1 << a) | (1 << b)
        for x in (v, path[-1]):
            old = self.mask[x]
            self.table[old] -= 1
            if not self.table[old]:
                del self.table[old]
            self.mask[x] = old ^ flip
            self.table[old ^ flip] += 1
        self.potential += delta

    def moves_at(self, v: int) -> Iterator[tuple[int, int]]:
        present = sorted(self.at[v])
        absent = [b for b in range(1, self.palette + 1) if b not in self.at[v]]
        for a in present:
            for b in absent:
                yield a, b

    def improve_at(self, v: int) -> bool:
        for a, b in self.moves_at(v):
            w = self.chain_end(v, a, b)
            d = self.delta(v, w, (1 << a) | (1 << b))
            if d < 0:
                self.apply(v, a, b, d)
                return True
        return False

    def descend(self) -> int:
        """First-improvement descent; returns the number of accepted moves."""
        n = self.g.n
        moves = 0
        idle = 0
        v = 0
        while idle < n:
            if self.table[self.mask[v]] >= 2 and self.improve_at(v):
                moves += 1
                idle = 0
                continue
            idle += 1
            v = (v + 1) % n
        return moves

    def perturb(self, rng: random.Random, steps: int, uphill: int = 4) -> None:
        n = self.g.n
        for _ in range(steps):
            v = rng.randrange(n)
            if not self.at[v]:
                continue
            a = rng.choice(sorted(self.at[v]))
            absent = [b for b in range(1, self.palette + 1) if b not in self.at[v]]
            if not absent:
                continue
            b = rng.choice(absent)
            w = self.chain_end(v, a, b)
            d = self.delta(v, w, (1 << a) | (1 << b))
            if d <= uphill:
                self.apply(v, a, b, d)


def _check_refine_preconditions(c: EdgeColoring) -> None:
    if not c.is_total() or not c.is_proper():
        raise PreconditionError("semi-vd refinement needs a total proper coloring")
    for d, n_d in degree_profile(c.host).items():
        if d >= 1 and comb(c.palette, d) < n_d:
            raise PreconditionError(
                f"palette {c.palette} too small: C({c.palette},{d}) < n_{d}={n_d}"
            )


def semi_vd_refine(
    c: EdgeColoring, *, seed: int = 0, restarts: int = 50
) -> EdgeColoring:
    """Recolor along Kempe chains until every color-set occurs at most twice.

    Runs first-improvement descent on the potential; when it stalls short of
    the goal, perturbs with ``2|E|`` random chain swaps (uphill by at most 4)
    and descends again, up to ``restarts`` times.
    """
    _check_refine_preconditions(c)
    search = _Search(c)
    search.descend()
    if search.worst() <= 2:
        return search.coloring()
    rng = random.Random(seed)
    for _ in range(restarts):
        search.perturb(rng, 2 * c.host.m)
        search.descend()
        if search.worst() <= 2:
            return search.coloring()
    raise SemiVdFailed(
        f"no semi-vd coloring found after {restarts} restarts "
        f"(worst multiplicity {search.worst()})"
    )


# --------------------------------------------------------------------------
# JSON
# --------------------------------------------------------------------------


def coloring_to_json(c: EdgeColoring) -> str:
    labels = c.host.labels
    edges = [
        {"u": labels[u], "v": labels[v], "color": c.colors[(u, v)]}
        for u, v in sorted(c.colors)
    ]
    return json.dumps({"palette": c.palette, "edges": edges}, indent=2) + "\n"


def coloring_from_json(text: str, g: Graph) -> EdgeColoring:
    data = json.loads(text)
    index = {lab: i for i, lab in enumerate(g.labels)}
    colors = {}
    for item in data["edges"]:
        u, v = index[str(item["u"])], index[str(item["v"])]
        if not g.has_edge(u, v):
            raise ValueError(f"{item['u']}-{item['v']} is not an edge of the graph")
        colors[_canon(u, v)] = int(item["color"])
    return EdgeColoring(g, int(data["palette"]), colors)
