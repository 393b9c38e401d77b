"""End-to-end vertex-distinguishing colorings.

``general_vdec`` works for every vdec graph and uses at most
``floor(5.5 k(G) + 6.5)`` colors; ``regular_vdec`` handles d-regular graphs
with ``d >= log2 n >= 8`` using at most ``k(G) + 3`` colors.
"""

from __future__ import annotations

import json
import math
import random
import time
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product
from math import comb
from typing import Iterable, Sequence

from .edge_coloring import EdgeColoring, semi_vd_refine, vizing_color
from .errors import (
    CandidateExhausted,
    ForestFailed,
    PreconditionError,
    SearchExhausted,
    SemiVdViolated,
    VerificationFailed,
)
from .graph import Graph, degree_profile, k_lower_bound
from .path_factor import DEFAULT_EXACT_LIMIT, LinearForest, find_linear_forest, spanning_factor
from .verify import verify_vd

Pair = tuple[int, int]


def _canon(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def recolor_palette(k: int) -> int:
    """floor(3.5k + 1), computed without floats."""
    return (7 * k + 2) // 2


def general_bound(k_g: int) -> int:
    """floor(5.5 k + 6.5) in integer arithmetic."""
    return (11 * k_g + 13) // 2


# --------------------------------------------------------------------------
# trace
# --------------------------------------------------------------------------


@dataclass
class StageRecord:
    name: str
    palette: tuple[int, int]
    vertices: int
    edges: int
    elapsed_ms: float


@dataclass
class PipelineTrace:
    seeds: dict[str, int] = field(default_factory=dict)
    stages: list[StageRecord] = field(default_factory=list)
    forest: LinearForest | None = None
    base: EdgeColoring | None = None
    shifted: EdgeColoring | None = None
    recoloring: EdgeColoring | None = None
    pairs: list[Pair] = field(default_factory=list)
    conflict_edges: list[tuple[int, int]] = field(default_factory=list)
    forbidden: dict[int, set[int]] = field(default_factory=dict)

    def record(self, name, palette, vertices, edges, started) -> None:
        self.stages.append(
            StageRecord(name, palette, vertices, edges, (time.perf_counter() - started) * 1000)
        )

    def to_json(self) -> str:
        payload = {
            "seeds": self.seeds,
            "stages": [
                {
                    "name": s.name,
                    "palette": list(s.palette),
                    "vertices": s.vertices,
                    "edges": s.edges,
                    "elapsed_ms": round(s.elapsed_ms, 3),
                }
                for s in self.stages
            ],
        }
        return json.dumps(payload, indent=2) + "\n"


@dataclass
class PipelineResult:
    coloring: EdgeColoring
    trace: PipelineTrace
    k_g: int
    bound: int

    @property
    def colors_used(self) -> int:
        return len(self.coloring.colors_used())


# --------------------------------------------------------------------------
# path recoloring with forbidden color-set clashes
# --------------------------------------------------------------------------


def path_recolor(
    forest: LinearForest,
    base: EdgeColoring,
    forb: dict[int, Iterable[int]],
    pairs: Iterable[Pair] = (),
) -> EdgeColoring:
    """Recolor the forest from a fresh palette of floor(3.5k + 1) colors.

    ``k`` is ``base.palette``.  Afterwards every pair in ``pairs`` with both
    ends in the forest has distinct color-sets, and so does every ``v`` with
    each ``u`` in ``forb[v]``.  Paths are processed by smallest vertex; per
    path, candidate colors are filtered forward and chosen backward, so each
    choice only has to dodge sets already fixed on earlier paths.
    """
    k = base.palette
    if k < 2:
        raise PreconditionError("path recoloring needs k >= 2")
    host = base.host
    width = recolor_palette(k)
    fdeg = forest.forest_degree()

    partner: dict[int, int] = {}
    for u, v in pairs:
        if u in fdeg and v in fdeg:
            if u in partner or v in partner or u == v:
                raise PreconditionError("pairs must be disjoint 2-element sets")
            partner[u], partner[v] = v, u

    clash_with: dict[int, set[int]] = defaultdict(set)
    for v, us in forb.items():
        for u in us:
            if u in fdeg and v in fdeg and u != v:
                clash_with[v].add(u)
                clash_with[u].add(v)
    for v, u in partner.items():
        clash_with[v].add(u)
    for v, us in clash_with.items():
        limit = 2 * comb(k, fdeg[v]) - 1
        if sum(1 for u in us if fdeg[u] == fdeg[v]) > limit:
            raise PreconditionError(
                f"vertex {v}: {len(us)} forbidden vertices exceeds 2*C({k},{fdeg[v]})-1"
            )

    current: dict[int, frozenset[int]] = {}
    out: dict[tuple[int, int], int] = {}
    palette = range(1, width + 1)
    for path in sorted(forest.paths, key=min):
        t = len(path) - 1
        taken = [
            {current[u] for u in clash_with.get(v, ()) if u in current} for v in path
        ]
        cand: list[list[int]] = [[a for a in palette if frozenset((a,)) not in taken[0]]]
        for i in range(1, t):
            prev = cand[-1]
            cand.append(
                [
                    a
                    for a in palette
                    if sum(
                        1 for b in prev if b != a and frozenset((a, b)) not in taken[i]
                    )
                    >= 4
                ]
            )
        alpha = [0] * t
        last = [a for a in cand[t - 1] if frozenset((a,)) not in taken[t]]
        if not last:
            raise CandidateExhausted(f"no final color for path {path}")
        alpha[t - 1] = last[0]
        for i in range(t - 2, -1, -1):
            chosen = set(alpha[i + 1 :])
            options = [
                b
                for b in cand[i]
                if b not in chosen and frozenset((b, alpha[i + 1])) not in taken[i + 1]
            ]
            if not options:
                raise CandidateExhausted(f"no color for edge {i} of path {path}")
            alpha[i] = options[0]
        for i in range(t):
            out[_canon(path[i], path[i + 1])] = alpha[i]
        for i, v in enumerate(path):
            current[v] = frozenset(alpha[j] for j in (i - 1, i) if 0 <= j < t)
    return EdgeColoring(host, width, out)


# --------------------------------------------------------------------------
# conflict edges inside the uncovered set
# --------------------------------------------------------------------------


def select_conflict_edges(
    g: Graph, forest: LinearForest, base: EdgeColoring
) -> tuple[list[Pair], list[tuple[int, int]], Graph]:
    """Pick one edge per same-color-set pair inside the uncovered set X.

    Returns ``(pairs, edges, H)`` where ``H`` is the spanning subgraph on the
    selected edges.  Shifting those edges into a fresh color range separates
    every pair while keeping distinct color-sets distinct.
    """
    x_set = set(forest.uncovered)
    groups: dict[frozenset, list[int]] = defaultdict(list)
    for v in sorted(x_set):
        groups[base.color_set(v)].append(v)
    all_groups: dict[frozenset, int] = defaultdict(int)
    for v in range(g.n):
        all_groups[base.color_set(v)] += 1
    if any(c >= 3 for c in all_groups.values()):
        raise SemiVdViolated("base coloring has a color-set on three or more vertices")
    pairs = sorted(tuple(vs) for vs in groups.values() if len(vs) == 2)

    def outside(v: int) -> list[int]:
        return [w for w in g.adj[v] if w not in x_set]

    chosen: dict[Pair, tuple[int, int]] = {}
    case: dict[Pair, int] = {}
    for u, v in pairs:
        if outside(u):
            chosen[(u, v)] = _canon(u, outside(u)[0])
            case[(u, v)] = 1
        elif outside(v):
            chosen[(u, v)] = _canon(v, outside(v)[0])
            case[(u, v)] = 2
        else:
            # both have degree one inside edge-components of G[X]
            chosen[(u, v)] = _canon(u, g.adj[u][0])
            case[(u, v)] = 3

    # replacement rule: a case-1 pair whose partner is hit by another pair's
    # edge drops its own edge, leaving degrees {0, 1}
    for (u, v), e in list(chosen.items()):
        if case[(u, v)] != 1:
            continue
        others = [f for p, f in chosen.items() if p != (u, v)]
        if any(u in f for f in others):
            continue
        if any(v in f for f in others):
            del chosen[(u, v)]

    edges = sorted(set(chosen.values()))
    h = Graph.from_edges(g.n, edges, g.labels)
    return pairs, edges, h


# --------------------------------------------------------------------------
# general pipeline
# --------------------------------------------------------------------------


def _derive_seeds(seed: int, names: Sequence[str]) -> dict[str, int]:
    rng = random.Random(seed)
    out = {"master": seed}
    for name in names:
        out[name] = rng.randrange(2**32)
    return out


def general_vdec(
    g: Graph,
    seed: int = 0,
    *,
    exact_limit: int = DEFAULT_EXACT_LIMIT,
    restarts: int = 50,
    forest_restarts: int = 200,
) -> PipelineResult:
    k_g = k_lower_bound(g)
    k = k_g + 1
    assert k >= 2
    trace = PipelineTrace(seeds=_derive_seeds(seed, ["forest", "refine"]))

    started = time.perf_counter()
    forest = find_linear_forest(
        g, exact_limit=exact_limit, seed=trace.seeds["forest"], restarts=forest_restarts
    )
    trace.forest = forest
    trace.record("forest", (0, 0), g.n - len(forest.uncovered), len(forest.edges()), started)

    started = time.perf_counter()
    start = vizing_color(g)
    phi = semi_vd_refine(
        EdgeColoring(g, k, start.colors), seed=trace.seeds["refine"], restarts=restarts
    )
    trace.base = phi
    trace.record("semi-vd", (1, k), g.n, g.m, started)

    started = time.perf_counter()
    pairs_x, e_x, h = select_conflict_edges(g, forest, phi)
    phi1 = phi.copy()
    phi1.palette = 2 * k
    for e in e_x:
        phi1.colors[e] += k
    trace.shifted = phi1
    trace.conflict_edges = e_x
    trace.record("shift", (k + 1, 2 * k), len(pairs_x) * 2, len(e_x), started)

    sets1 = [phi1.color_set(v) for v in range(g.n)]
    f_edges = set(forest.edges())
    fdeg = forest.forest_degree()
    by_set: dict[frozenset, list[int]] = defaultdict(list)
    for v in range(g.n):
        by_set[sets1[v]].append(v)
    pairs = sorted(tuple(vs) for vs in by_set.values() if len(vs) == 2)
    trace.pairs = pairs

    # B_phi1(v): same G- and F-degree, same non-forest part, different set
    groups: dict[tuple, list[int]] = defaultdict(list)
    for v in fdeg:
        non_f = frozenset(
            phi1.colors[_canon(v, w)] for w in g.adj[v] if _canon(v, w) not in f_edges
        )
        groups[(g.degree(v), fdeg[v], non_f)].append(v)
    forb: dict[int, set[int]] = {}
    for members in groups.values():
        for v in members:
            forb[v] = {u for u in members if sets1[u] != sets1[v]}
    trace.forbidden = forb

    started = time.perf_counter()
    base_f = EdgeColoring(g, k, {e: phi1.colors[e] for e in f_edges})
    psi = path_recolor(forest, base_f, forb, pairs)
    trace.recoloring = psi
    width = recolor_palette(k)
    trace.record("path-recolor", (2 * k + 1, 2 * k + width), len(fdeg), len(f_edges), started)

    final = EdgeColoring(g, 2 * k + width, dict(phi1.colors))
    for e, col in psi.colors.items():
        final.colors[e] = 2 * k + col
    report = verify_vd(g, final)
    if not report.passed:
        raise VerificationFailed(f"general pipeline output rejected: {report.violations[:3]}")
    return PipelineResult(final, trace, k_g, general_bound(k_g))


# --------------------------------------------------------------------------
# long path systems with 3 colors
# --------------------------------------------------------------------------


def _path_colorings(t: int) -> list[tuple[int, ...]]:
    return [c for c in product((1, 2, 3), repeat=t) if all(a != b for a, b in zip(c, c[1:]))]


def long_path_3color(
    g: Graph,
    paths: Sequence[Sequence[int]],
    pairs: Iterable[Pair] = (),
    *,
    seed: int = 0,
    attempts: int = 50,
    node_budget: int = 200_000,
) -> EdgeColoring:
    """Proper 3-coloring of vertex-disjoint paths (each with >= 2 edges) that
    separates the color-sets of every pair.

    Depth-first over paths in smallest-vertex order; on running out of budget
    the search restarts with shuffled candidate orders.
    """
    ordered = sorted((tuple(p) for p in paths), key=min)
    where = {}
    for i, p in enumerate(ordered):
        if len(p) < 3:
            raise PreconditionError("long path systems need paths with >= 3 vertices")
        for v in p:
            where[v] = i
    partner: dict[int, int] = {}
    for u, v in pairs:
        if u in partner or v in partner or u == v:
            raise PreconditionError("pairs must be disjoint 2-element sets")
        if u in where and v in where:
            partner[u], partner[v] = v, u
    options = {len(p) - 1: _path_colorings(len(p) - 1) for p in ordered}
    rng = random.Random(seed)

    for attempt in range(attempts):
        orders = []
        for p in ordered:
            opts = list(options[len(p) - 1])
            if attempt:
                rng.shuffle(opts)
            orders.append(opts)
        sets: dict[int, frozenset[int]] = {}
        chosen: list[tuple[int, ...] | None] = [None] * len(ordered)
        nodes = 0

        def vertex_sets(p, cols):
            t = len(cols)
            return {
                v: frozenset(cols[j] for j in (i - 1, i) if 0 <= j < t)
                for i, v in enumerate(p)
            }

        def ok(p, vs) -> bool:
            for v, s in vs.items():
                w = partner.get(v)
                if w is None:
                    continue
                other = vs.get(w, sets.get(w))
                if other is not None and other == s:
                    return False
            return True

        stack = [0]
        idx = 0
        while 0 <= idx < len(ordered):
            nodes += 1
            if nodes > node_budget:
                break
            p = ordered[idx]
            pos = stack[idx]
            if chosen[idx] is not None:
                for v in p:
                    sets.pop(v, None)
                chosen[idx] = None
            placed = False
            while pos < len(orders[idx]):
                cols = orders[idx][pos]
                pos += 1
                vs = vertex_sets(p, cols)
                if ok(p, vs):
                    sets.update(vs)
                    chosen[idx] = cols
                    placed = True
                    break
            stack[idx] = pos
            if placed:
                idx += 1
                if idx < len(ordered):
                    if len(stack) <= idx:
                        stack.append(0)
                    else:
                        stack[idx] = 0
            else:
                idx -= 1
        if idx == len(ordered):
            out = {}
            for p, cols in zip(ordered, chosen):
                for i, col in enumerate(cols):
                    out[_canon(p[i], p[i + 1])] = col
            return EdgeColoring(g, 3, out)
        if idx < 0:
            break
    raise SearchExhausted("no separating 3-coloring of the path system found")


# --------------------------------------------------------------------------
# regular pipeline
# --------------------------------------------------------------------------


def check_regular_preconditions(g: Graph) -> int:
    """Returns d, or raises PreconditionError naming the violated inequality."""
    if not g.is_regular():
        raise PreconditionError("graph is not regular")
    n, d = g.n, g.max_degree
    if d >= n - 1:
        raise PreconditionError(f"graph is complete (d={d} >= n-1={n - 1})")
    if n < 256:
        raise PreconditionError(f"log2 n >= 8 fails (n={n} < 256)")
    if 2**d < n:
        raise PreconditionError(f"d >= log2 n fails (d={d}, log2 n={math.log2(n):.3f})")
    # d >= sqrt(2n) + 4  <=>  d - 4 >= 0 and (d - 4)^2 >= 2n
    if d >= 4 and (d - 4) ** 2 >= 2 * n:
        raise PreconditionError(f"d >= sqrt(2n)+4 regime (d={d}, n={n}) is not handled here")
    return d


def regular_vdec(
    g: Graph, seed: int = 0, *, restarts: int = 50, forest_restarts: int = 200
) -> PipelineResult:
    d = check_regular_preconditions(g)
    n = g.n
    k_g = k_lower_bound(g)
    trace = PipelineTrace(seeds=_derive_seeds(seed, ["forest", "refine", "paths"]))

    started = time.perf_counter()
    packing = spanning_factor(g, seed=trace.seeds["forest"], restarts=forest_restarts)
    if packing is None:
        raise ForestFailed("no spanning long-path factor found", stage="spanning-factor")
    forest = LinearForest(sorted(packing.paths), ())
    trace.forest = forest
    trace.record("forest", (0, 0), n, len(forest.edges()), started)

    h = g.remove_edges(forest.edges())
    profile = degree_profile(h)
    if 3 * profile.get(d - 1, 0) > 2 * n or 5 * profile.get(d - 2, 0) > 3 * n:
        raise AssertionError("forest leaves too many endpoints or interiors")
    if k_g < h.max_degree + 3:
        raise AssertionError("k(G) < max_degree(H) + 3")

    started = time.perf_counter()
    start = vizing_color(h)
    phi = semi_vd_refine(
        EdgeColoring(h, k_g, start.colors), seed=trace.seeds["refine"], restarts=restarts
    )
    trace.base = phi
    trace.record("semi-vd", (1, k_g), n, h.m, started)

    by_set: dict[frozenset, list[int]] = defaultdict(list)
    for v in range(n):
        by_set[phi.color_set(v)].append(v)
    pairs = sorted(tuple(vs) for vs in by_set.values() if len(vs) == 2)
    trace.pairs = pairs

    started = time.perf_counter()
    psi = long_path_3color(g, forest.paths, pairs, seed=trace.seeds["paths"])
    trace.recoloring = psi
    trace.record("path-3color", (k_g + 1, k_g + 3), n, len(psi.colors), started)

    final = EdgeColoring(g, k_g + 3, dict(phi.colors))
    for e, col in psi.colors.items():
        final.colors[e] = k_g + col
    report = verify_vd(g, final)
    if not report.passed:
        raise VerificationFailed(f"regular pipeline output rejected: {report.violations[:3]}")
    return PipelineResult(final, trace, k_g, k_g + 3)
