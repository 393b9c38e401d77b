"""Suns, deficiency, {P3,P4,P5}-factors and the linear-forest construction.

Paths are vertex sequences; a path with ``t`` edges has ``t + 1`` vertices.
Most helpers work on a host adjacency (``Graph.adj``) restricted to a vertex
subset, so components never need to be copied into fresh graphs.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import combinations
from math import ceil
from typing import Iterable, Sequence

from .errors import ForestFailed, HallViolated, PreconditionError, SizeExceededError
from .graph import Graph, Multigraph, components, components_avoiding
from .matching import is_factor_critical_adj, near_perfect_matching_adj

Adj = Sequence[Sequence[int]]
Path = tuple[int, ...]

DEFAULT_EXACT_LIMIT = 20
DEFAULT_RESTARTS = 200


@dataclass(frozen=True)
class SunDecomposition:
    """``kind`` is ``"K1"``, ``"K2"`` or ``"big"``.

    For big suns ``core`` is the factor-critical core, ``pendant_of`` maps each
    core vertex to its degree-one neighbour and ``core_adj`` is the core's
    induced adjacency.
    """

    kind: str
    vertices: tuple[int, ...]
    core: tuple[int, ...] = ()
    pendant_of: dict[int, int] = field(default_factory=dict)
    core_adj: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def core_vertex_of(self, pendant: int) -> int:
        for c, p in self.pendant_of.items():
            if p == pendant:
                return c
        raise KeyError(pendant)


@dataclass(frozen=True)
class DeficiencyCertificate:
    S: tuple[int, ...]
    value: int


@dataclass
class PathPacking:
    paths: list[Path]
    allowed: frozenset = frozenset({2, 3, 4})

    def covered(self) -> set[int]:
        return {v for p in self.paths for v in p}


@dataclass
class LinearForest:
    paths: list[Path]
    uncovered: tuple[int, ...]

    def forest_degree(self) -> dict[int, int]:
        out = {}
        for p in self.paths:
            for i, v in enumerate(p):
                out[v] = 1 if i in (0, len(p) - 1) else 2
        return out

    def edges(self) -> list[tuple[int, int]]:
        return [
            (a, b) if a < b else (b, a) for p in self.paths for a, b in zip(p, p[1:])
        ]


# --------------------------------------------------------------------------
# suns
# --------------------------------------------------------------------------


def _sun_of(adj: Adj, verts: Iterable[int]) -> SunDecomposition | None:
    vs = sorted(verts)
    n = len(vs)
    if n == 1:
        return SunDecomposition("K1", tuple(vs))
    if n == 2:
        return SunDecomposition("K2", tuple(vs)) if vs[1] in adj[vs[0]] else None
    if n < 6 or n % 2:
        return None
    inside = set(vs)
    local = {v: [w for w in adj[v] if w in inside] for v in vs}
    leaves = [v for v in vs if len(local[v]) == 1]
    if len(leaves) != n // 2:
        return None
    pendant_of: dict[int, int] = {}
    for leaf in leaves:
        c = local[leaf][0]
        if len(local[c]) == 1 or c in pendant_of:
            return None
        pendant_of[c] = leaf
    leaf_set = set(leaves)
    core = [v for v in vs if v not in leaf_set]
    core_adj = {v: tuple(w for w in local[v] if w not in leaf_set) for v in core}
    if not is_factor_critical_adj(core_adj):
        return None
    return SunDecomposition("big", tuple(vs), tuple(core), pendant_of, core_adj)


def is_sun(component: Graph) -> SunDecomposition | None:
    """Sun decomposition of a connected graph, or None if it is not a sun."""
    return _sun_of(component.adj, range(component.n))


class _SunCache:
    def __init__(self, adj: Adj):
        self.adj = adj
        self.memo: dict[frozenset, SunDecomposition | None] = {}

    def get(self, comp: Sequence[int]) -> SunDecomposition | None:
        if len(comp) <= 2:
            return _sun_of(self.adj, comp)
        key = frozenset(comp)
        if key not in self.memo:
            self.memo[key] = _sun_of(self.adj, comp)
        return self.memo[key]

    def count(self, verts: Iterable[int], removed: set[int]) -> int:
        total = 0
        for comp in components_avoiding(self.adj, verts, removed):
            if len(comp) <= 2 or (len(comp) >= 6 and self.get(comp) is not None):
                total += 1
        return total


def sun_count(g: Graph) -> int:
    """Number of components of ``g`` that are suns."""
    return _SunCache(g.adj).count(range(g.n), set())


# --------------------------------------------------------------------------
# deficiency
# --------------------------------------------------------------------------


def _exact_deficiency(adj: Adj, verts: Sequence[int], cache: _SunCache) -> DeficiencyCertificate:
    vs = sorted(verts)
    n = len(vs)
    best_val = cache.count(vs, set())
    best_s: tuple[int, ...] = ()
    size = 1
    # sun(G - S) <= n - |S|, so sizes with n - 3|S| <= best cannot win
    while size <= n and n - 3 * size > best_val:
        for s in combinations(vs, size):
            val = cache.count(vs, set(s)) - 2 * size
            if val > best_val:
                best_val, best_s = val, s
        size += 1
    return DeficiencyCertificate(best_s, best_val)


def deficiency(g: Graph, exact_limit: int = DEFAULT_EXACT_LIMIT) -> DeficiencyCertificate:
    """max over S of sun(g - S) - 2|S| by pruned subset enumeration.

    Ties go to the smallest S, then the lexicographically least one.
    """
    if g.n > exact_limit:
        raise SizeExceededError(f"{g.n} vertices exceeds exact limit {exact_limit}")
    return _exact_deficiency(g.adj, range(g.n), _SunCache(g.adj))


def kaneko_condition(g: Graph, exact_limit: int = DEFAULT_EXACT_LIMIT) -> bool:
    """True iff sun(g - S) <= 2|S| for every vertex subset S."""
    return deficiency(g, exact_limit).value <= 0


def _heuristic_witness(
    adj: Adj,
    verts: Sequence[int],
    cache: _SunCache,
    rng: random.Random,
    tries: int = 30,
    passes: int = 25,
) -> tuple[set[int], int]:
    """Toggle local search for a set with large sun(G-S) - 2|S|.

    Strict improvements are always taken; additions that keep the value are
    taken at random so the walk can cross plateaus (useful witnesses often
    need several vertices that only pay off together).
    """
    vs = sorted(verts)
    inside = set(vs)

    def value(s: set[int]) -> int:
        return cache.count(vs, s) - 2 * len(s)

    support = {
        w for v in vs for w in adj[v]
        if w in inside and sum(1 for x in adj[v] if x in inside) == 1
    }
    starts = [set(), support]
    best_s: set[int] = set()
    best_v = value(best_s)
    for t in range(tries):
        s = set(starts[t]) if t < len(starts) else {v for v in vs if rng.random() < 0.15}
        cur = value(s)
        stale = 0
        for _ in range(passes):
            order = list(vs)
            rng.shuffle(order)
            moved = False
            for v in order:
                adding = v not in s
                s ^= {v}
                val = value(s)
                if val > cur or (val == cur and adding and rng.random() < 0.5):
                    moved = moved or val > cur
                    cur = val
                    if cur > best_v:
                        best_v, best_s = cur, set(s)
                else:
                    s ^= {v}
            stale = 0 if moved else stale + 1
            if stale >= 3:
                break
        if best_v > 0:
            break
    return best_s, best_v


# --------------------------------------------------------------------------
# exact {P3,P4,P5}-factor search
# --------------------------------------------------------------------------


class _Budget(Exception):
    pass


def _arms(adj: Adj, v: int, free: set[int], length: int, avoid: tuple = ()):
    """Simple paths of exactly ``length`` vertices hanging off ``v`` inside ``free``."""
    if length == 0:
        yield ()
        return
    stack = [(w,) for w in reversed(adj[v]) if w in free and w != v and w not in avoid]
    while stack:
        arm = stack.pop()
        if len(arm) == length:
            yield arm
            continue
        tip = arm[-1]
        for w in reversed(adj[tip]):
            if w in free and w != v and w not in arm and w not in avoid:
                stack.append(arm + (w,))


def _paths_through(adj: Adj, v: int, free: set[int]):
    """Paths with 3-5 vertices inside ``free`` containing ``v``, generated lazily.

    Paths with ``v`` at an end come first, longest first.
    """
    for length in (4, 3, 2):
        for arm in _arms(adj, v, free, length):
            yield (v,) + arm
    for left, right in ((1, 3), (2, 2), (1, 2), (1, 1)):
        for a1 in _arms(adj, v, free, left):
            for a2 in _arms(adj, v, free, right, a1):
                if left == right and a1 > a2:
                    continue
                yield tuple(reversed(a1)) + (v,) + a2


def _exact_factor(adj: Adj, verts: Iterable[int], budget: int | None = None) -> list[Path] | None:
    failed: set[frozenset] = set()
    nodes = [0]

    def solve(free: frozenset) -> list[Path] | None:
        out: list[Path] = []
        for comp in components_avoiding(adj, free, set()):
            if len(comp) < 3:
                return None
            part = solve_connected(frozenset(comp))
            if part is None:
                return None
            out.extend(part)
        return out

    def solve_connected(free: frozenset) -> list[Path] | None:
        if free in failed:
            return None
        if len(free) <= 5 and _is_path_graph(adj, free):
            return [_path_order(adj, free)]
        v = min(free, key=lambda x: (sum(1 for w in adj[x] if w in free), x))
        fs = set(free)
        for p in _paths_through(adj, v, fs):
            nodes[0] += 1
            if budget is not None and nodes[0] > budget:
                raise _Budget
            rest = solve(free - set(p))
            if rest is not None:
                return [p] + rest
        failed.add(free)
        return None

    return solve(frozenset(verts))


def _is_path_graph(adj: Adj, verts: frozenset) -> bool:
    n = len(verts)
    if not 3 <= n <= 5:
        return False
    degs = [sum(1 for w in adj[v] if w in verts) for v in verts]
    return sum(degs) == 2 * (n - 1) and max(degs) <= 2


def _path_order(adj: Adj, verts: frozenset) -> Path:
    ends = sorted(v for v in verts if sum(1 for w in adj[v] if w in verts) == 1)
    order = [ends[0]]
    prev = None
    while len(order) < len(verts):
        cur = order[-1]
        nxt = next(w for w in adj[cur] if w in verts and w != prev and w not in order)
        prev = cur
        order.append(nxt)
    p = tuple(order)
    return min(p, p[::-1])


def find_factor(g: Graph) -> PathPacking | None:
    """Exhaustive search for a {P3,P4,P5}-factor; None if none exists."""
    paths = _exact_factor(g.adj, range(g.n))
    return None if paths is None else PathPacking(sorted(paths))


# --------------------------------------------------------------------------
# heuristic factor search
# --------------------------------------------------------------------------


def _greedy_path_cover(adj: Adj, verts: Sequence[int], rng: random.Random) -> list[list[int]]:
    free = set(verts)
    deg = {v: sum(1 for w in adj[v] if w in free) for v in verts}
    tiebreak = {v: rng.random() for v in verts}
    paths = []

    def take(x: int) -> None:
        free.discard(x)
        for w in adj[x]:
            if w in free:
                deg[w] -= 1

    def grow(path: list[int]) -> None:
        while True:
            tip = path[-1]
            cands = [w for w in adj[tip] if w in free]
            if not cands:
                return
            w = min(cands, key=lambda x: (deg[x], tiebreak[x]))
            take(w)
            path.append(w)

    while free:
        start = min(free, key=lambda x: (deg[x], tiebreak[x]))
        take(start)
        path = [start]
        grow(path)
        path.reverse()
        grow(path)
        paths.append(path)
    return paths


def _absorb_short(adj: Adj, paths: list[list[int]], rng: random.Random) -> bool:
    """Merge paths with fewer than 3 vertices into others; True when none remain."""
    for _ in range(4 * len(paths) + 10):
        short = [i for i, p in enumerate(paths) if len(p) < 3]
        if not short:
            return True
        rng.shuffle(short)
        progress = False
        for i in short:
            if _absorb_one(adj, paths, i, rng):
                paths[:] = [p for p in paths if p]
                progress = True
                break
        if not progress:
            return False
    return not any(len(p) < 3 for p in paths)


def _absorb_one(adj: Adj, paths: list[list[int]], i: int, rng: random.Random) -> bool:
    short = paths[i]
    where = {v: (j, pos) for j, p in enumerate(paths) for pos, v in enumerate(p)}
    orientations = [short, short[::-1]] if len(short) > 1 else [short]
    options = []
    for lead in orientations:
        x = lead[-1]
        for y in adj[x]:
            if y not in where:
                continue
            j, pos = where[y]
            if j == i:
                continue
            p = paths[j]
            # lead + p[pos:] with remainder p[:pos]
            options.append((j, lead + p[pos:], p[:pos]))
            # p[:pos+1] + reversed(lead) with remainder p[pos+1:]
            options.append((j, p[: pos + 1] + lead[::-1], p[pos + 1 :]))
    rng.shuffle(options)
    for j, merged, rest in options:
        before = 1 + (len(paths[j]) < 3)
        after = (0 < len(merged) < 3) + (0 < len(rest) < 3)
        if after >= before:
            continue
        paths[j] = merged
        paths[i] = []
        if rest:
            paths.append(rest)
        return True
    return False


def _chop(path: Sequence[int], rng: random.Random) -> list[Path]:
    """Split a path with >= 3 vertices into consecutive pieces of 3-5 vertices."""
    out = []
    rest = list(path)
    while rest:
        n = len(rest)
        if n <= 5:
            size = n
        else:
            size = rng.choice([s for s in (3, 4, 5) if n - s == 0 or n - s >= 3])
        out.append(tuple(rest[:size]))
        rest = rest[size:]
    return out


def _heuristic_factor(
    adj: Adj, verts: Sequence[int], rng: random.Random, restarts: int = DEFAULT_RESTARTS
) -> list[Path] | None:
    if len(verts) < 3:
        return None
    for _ in range(restarts):
        paths = _greedy_path_cover(adj, verts, rng)
        if _absorb_short(adj, paths, rng):
            return [q for p in paths for q in _chop(p, rng)]
    return None


def spanning_factor(g: Graph, seed: int = 0, restarts: int = DEFAULT_RESTARTS) -> PathPacking | None:
    """Randomized {P3,P4,P5}-factor search over the whole graph."""
    rng = random.Random(seed)
    paths = []
    for comp in components(g):
        part = _heuristic_factor(g.adj, comp, rng, restarts)
        if part is None:
            return None
        paths.extend(part)
    return PathPacking(paths)


# --------------------------------------------------------------------------
# sun packings (both modes)
# --------------------------------------------------------------------------


def sun_packing(d: SunDecomposition, mode: str, w: int | None = None) -> PathPacking:
    """Long-path packings of a big sun.

    ``mode="uncover-leaf"``: a {P4,P5}-packing missing exactly one pendant,
    whose neighbour is a path interior.  ``w`` picks the core vertex the P5
    runs through (default: lowest core vertex).

    ``mode="uncover-core-vertex"``: a {P4}-packing missing exactly ``w`` and
    its pendant.
    """
    if d.kind != "big":
        raise PreconditionError("sun packings need a sun of order at least six")
    if mode not in ("uncover-leaf", "uncover-core-vertex"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "uncover-core-vertex" and (w is None or w not in d.pendant_of):
        raise PreconditionError("mode uncover-core-vertex needs a core vertex w")
    x = w if w is not None else d.core[0]
    if x not in d.pendant_of:
        raise PreconditionError(f"{x} is not a core vertex")
    matching = near_perfect_matching_adj(d.core_adj, x)
    pend = d.pendant_of
    paths: list[Path] = []
    if mode == "uncover-core-vertex":
        for a, b in matching:
            paths.append((pend[a], a, b, pend[b]))
        return PathPacking(paths, frozenset({3}))
    mate = {}
    for a, b in matching:
        mate[a], mate[b] = b, a
    aj = min(v for v in d.core_adj[x] if v in mate)
    bj = mate[aj]
    for a, b in matching:
        if aj in (a, b):
            paths.append((pend[x], x, aj, bj, pend[bj]))
        else:
            paths.append((pend[a], a, b, pend[b]))
    return PathPacking(paths, frozenset({3, 4}))


# --------------------------------------------------------------------------
# bipartite P3 packing covering S and U
# --------------------------------------------------------------------------


def _b_matching(
    s_nbrs: dict[int, list[int]]
) -> tuple[dict[int, list[int]], set[int]]:
    """Give every S-vertex two distinct partners (W capacity one).

    Returns ``(assignment, violators)``; violators is empty on success and is
    otherwise a set S1 with fewer than 2|S1| neighbours.
    """
    slots = [(s, k) for s in sorted(s_nbrs) for k in (0, 1)]
    owner: dict[int, int] = {}  # w -> slot index
    slot_w: list[int | None] = [None] * len(slots)

    def try_slot(i: int, seen: set[int]) -> bool:
        s = slots[i][0]
        for w in s_nbrs[s]:
            if w in seen:
                continue
            seen.add(w)
            if w not in owner or try_slot(owner[w], seen):
                owner[w] = i
                slot_w[i] = w
                return True
        return False

    unmatched = [i for i in range(len(slots)) if not try_slot(i, set())]
    if not unmatched:
        out: dict[int, list[int]] = {s: [] for s in s_nbrs}
        for i, w in enumerate(slot_w):
            out[slots[i][0]].append(w)
        return {s: sorted(ws) for s, ws in out.items()}, set()
    # alternating reachability from an unmatched slot gives a Hall violator
    reach_s = set()
    stack = [unmatched[0]]
    seen_w: set[int] = set()
    while stack:
        s = slots[stack.pop()][0]
        reach_s.add(s)
        for w in s_nbrs[s]:
            if w not in seen_w:
                seen_w.add(w)
                if w in owner:
                    stack.append(owner[w])
    return {}, reach_s


def _cover_u(
    s_nbrs: dict[int, list[int]], assign: dict[int, list[int]], u_set: set[int]
) -> None:
    """Alternating-path exchanges so every vertex of ``u_set`` is a leaf."""
    w_nbrs: dict[int, list[int]] = {}
    for s, ws in s_nbrs.items():
        for w in ws:
            w_nbrs.setdefault(w, []).append(s)
    holder = {w: s for s, ws in assign.items() for w in ws}
    for u in sorted(u_set):
        if u in holder:
            continue
        # BFS over u -> s (non-packing edge) -> w (packing edge) -> ...
        prev: dict[int, tuple[int, int]] = {}
        queue = [u]
        seen_w = {u}
        seen_s: set[int] = set()
        end = None
        while queue and end is None:
            w0 = queue.pop(0)
            for s in sorted(w_nbrs.get(w0, ())):
                if s in seen_s or holder.get(w0) == s:
                    continue
                seen_s.add(s)
                for w1 in assign[s]:
                    if w1 in seen_w:
                        continue
                    seen_w.add(w1)
                    prev[w1] = (s, w0)
                    if w1 not in u_set:
                        end = w1
                        break
                    queue.append(w1)
                if end is not None:
                    break
        if end is None:
            raise HallViolated(f"cannot cover high-degree vertex {u}")
        w1 = end
        del holder[w1]
        while w1 != u:
            s, w0 = prev[w1]
            assign[s].remove(w1)
            assign[s].append(w0)
            assign[s].sort()
            holder[w0] = s
            w1 = w0


def p3_packing_covering(b: Multigraph, S: Iterable[int], U: Iterable[int]) -> PathPacking:
    """P3s centred at every S-vertex, leaves in the other part, covering U.

    Each S-vertex gets exactly two distinct neighbours; each other vertex is
    used at most once.  Raises :class:`HallViolated` when some subset S1 of S
    has fewer than 2|S1| neighbours.
    """
    s_list = sorted(set(S))
    s_set = set(s_list)
    s_nbrs = {s: [w for w in b.neighbors(s) if w not in s_set] for s in s_list}
    assign, bad = _b_matching(s_nbrs)
    if bad:
        raise HallViolated(f"S-vertices {sorted(bad)} have too few neighbours")
    _cover_u(s_nbrs, assign, set(U))
    return PathPacking([(ws[0], s, ws[1]) for s, ws in sorted(assign.items())], frozenset({2}))


# --------------------------------------------------------------------------
# linear forest
# --------------------------------------------------------------------------


@dataclass
class _ForestConfig:
    exact_limit: int
    restarts: int
    rng: random.Random


def _factor_or_none(adj: Adj, verts: Sequence[int], cfg: _ForestConfig) -> tuple[list[Path] | None, bool]:
    """(paths, certain): certain means a None answer is a proof of absence."""
    if len(verts) < 3:
        return None, True
    if len(verts) <= cfg.exact_limit:
        return _exact_factor(adj, verts), True
    found = _heuristic_factor(adj, verts, cfg.rng, min(cfg.restarts, 20))
    if found is not None:
        return found, True
    try:
        return _exact_factor(adj, verts, budget=20000), True
    except _Budget:
        pass
    return _heuristic_factor(adj, verts, cfg.rng, cfg.restarts), False


def _witness(adj: Adj, verts: Sequence[int], cache: _SunCache, cfg: _ForestConfig) -> set[int] | None:
    s, val = _heuristic_witness(adj, verts, cache, cfg.rng)
    if val > 0:
        return s
    if len(verts) <= cfg.exact_limit:
        cert = _exact_deficiency(adj, verts, cache)
        if cert.value > 0:
            return set(cert.S)
    return None


def _attach_arm(adj: Adj, s: int, sun: SunDecomposition) -> tuple[list[int], list[Path]]:
    """Arm hanging off ``s`` into a sun component plus packing of the rest."""
    touching = [v for v in sun.vertices if s in adj[v]]
    if sun.kind == "K1":
        return [sun.vertices[0]], []
    if sun.kind == "K2":
        x = touching[0]
        other = sun.vertices[0] if sun.vertices[1] == x else sun.vertices[1]
        return [x, other], []
    core_hits = [v for v in touching if v in sun.pendant_of]
    if core_hits:
        x = core_hits[0]
        arm = [x, sun.pendant_of[x]]
        w = x
    else:
        x = touching[0]
        w = sun.core_vertex_of(x)
        arm = [x, w]
    return arm, sun_packing(sun, "uncover-core-vertex", w).paths


def _deficiency_forest(
    adj: Adj, verts: Sequence[int], cfg: _ForestConfig, stages: list[str]
) -> tuple[list[Path], list[int]]:
    """Linear forest for one connected component with no long-path factor."""
    vs = sorted(verts)
    cache = _SunCache(adj)
    delta = max(sum(1 for w in adj[v]) for v in vs)
    if len(vs) <= cfg.exact_limit:
        S = set(_exact_deficiency(adj, vs, cache).S)
        stages.append("exact-deficiency")
    else:
        S = set()
    for _ in range(len(vs) + 2):
        comps = components_avoiding(adj, vs, S)
        suns: dict[int, SunDecomposition] = {}
        factors: dict[int, list[Path]] = {}
        grow = None
        for ci, comp in enumerate(comps):
            dec = cache.get(comp)
            if dec is not None:
                suns[ci] = dec
                continue
            paths, _certain = _factor_or_none(adj, comp, cfg)
            if paths is None:
                grow = _witness(adj, comp, cache, cfg)
                if grow is None:
                    raise ForestFailed(
                        f"component of G-S on {len(comp)} vertices has neither a "
                        "long-path factor nor a deficiency witness",
                        stage="non-sun-factor",
                    )
                break
            factors[ci] = paths
        if grow is not None:
            S |= grow
            stages.append("grow-S")
            continue

        comp_of = {v: ci for ci, comp in enumerate(comps) for v in comp}
        s_nbrs = {
            s: sorted({comp_of[w] for w in adj[s] if w in comp_of and comp_of[w] in suns})
            for s in sorted(S)
        }
        assign, bad = _b_matching(s_nbrs)
        if bad:
            S -= bad
            stages.append("shrink-S")
            continue
        threshold = ceil(delta / 2)
        weight = {ci: 0 for ci in suns}
        for s in S:
            for w in adj[s]:
                ci = comp_of.get(w)
                if ci in weight:
                    weight[ci] += 1
        high = {ci for ci, wt in weight.items() if wt >= threshold}
        _cover_u(s_nbrs, assign, high)
        break
    else:
        raise ForestFailed("deficiency set did not stabilise", stage="maximize-S")

    paths: list[Path] = []
    used_suns: set[int] = set()
    for s in sorted(S):
        arms = []
        for ci in assign[s]:
            arm, rest = _attach_arm(adj, s, suns[ci])
            arms.append(arm)
            paths.extend(rest)
            used_suns.add(ci)
        paths.append(tuple(arms[0][::-1]) + (s,) + tuple(arms[1]))
    uncovered: list[int] = []
    for ci, dec in suns.items():
        if ci in used_suns:
            continue
        if dec.kind == "big":
            packing = sun_packing(dec, "uncover-leaf")
            paths.extend(packing.paths)
            uncovered.extend(set(dec.vertices) - packing.covered())
        else:
            uncovered.extend(dec.vertices)
    for ci in sorted(factors):
        paths.extend(factors[ci])
    return paths, sorted(uncovered)


def _extend_maximal(adj: Adj, paths: list[Path], uncovered: set[int]) -> list[Path]:
    """Hang uncovered vertices off path ends; split any P6 into two P3s."""
    work = [list(p) for p in paths]
    changed = True
    while changed:
        changed = False
        for i, p in enumerate(work):
            for end_pos in (0, -1):
                u = p[end_pos]
                cands = sorted(v for v in adj[u] if v in uncovered)
                if not cands:
                    continue
                v = cands[0]
                uncovered.discard(v)
                if end_pos == 0:
                    p.insert(0, v)
                else:
                    p.append(v)
                if len(p) == 6:
                    work[i] = p[:3]
                    work.append(p[3:])
                changed = True
                break
            if changed:
                break
    return [min(tuple(p), tuple(p[::-1])) for p in work]


def find_linear_forest(
    g: Graph,
    *,
    exact_limit: int = DEFAULT_EXACT_LIMIT,
    seed: int = 0,
    restarts: int = DEFAULT_RESTARTS,
) -> LinearForest:
    """Linear forest of 2-4-edge paths such that the uncovered vertices induce
    isolated vertices/edges of degree at most (max_degree + 1) / 2 and all
    their covered neighbours are path interiors.

    Each component first tries for a spanning {P3,P4,P5}-factor; components
    without one go through the sun/deficiency construction.
    """
    from .verify import verify_forest

    cfg = _ForestConfig(exact_limit, restarts, random.Random(seed))
    paths: list[Path] = []
    uncovered: set[int] = set()
    stages: list[str] = []
    for comp in components(g):
        if len(comp) <= 2:
            uncovered.update(comp)
            continue
        found, _certain = _factor_or_none(g.adj, comp, cfg)
        if found is not None:
            paths.extend(found)
            continue
        part, left = _deficiency_forest(g.adj, comp, cfg, stages)
        paths.extend(part)
        uncovered.update(left)
    paths = _extend_maximal(g.adj, paths, uncovered)
    forest = LinearForest(sorted(paths), tuple(sorted(uncovered)))
    report = verify_forest(g, forest)
    if not report.passed:
        last = stages[-1] if stages else "factor"
        raise ForestFailed(
            f"forest failed verification after {last}: {report.violations[:3]}", stage=last
        )
    return forest


def forest_to_json(f: LinearForest, g: Graph) -> str:
    payload = {
        "paths": [[g.labels[v] for v in p] for p in f.paths],
        "uncovered": [g.labels[v] for v in f.uncovered],
    }
    return json.dumps(payload, indent=2) + "\n"
