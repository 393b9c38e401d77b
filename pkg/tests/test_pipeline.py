from __future__ import annotations

import json
import random
from collections import defaultdict
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vdec.edge_coloring import EdgeColoring
from vdec.errors import NotVdecError, PreconditionError
from vdec.generators import complete, cycle, gnp, path, random_regular, random_tree, star
from vdec.graph import Graph, is_vdec, k_lower_bound
from vdec.path_factor import LinearForest
from vdec.pipeline import (
    general_bound,
    general_vdec,
    long_path_3color,
    path_recolor,
    recolor_palette,
    regular_vdec,
    select_conflict_edges,
)
from vdec.verify import verify_proper, verify_vd


def _sets(c: EdgeColoring, verts) -> dict[int, frozenset]:
    out = {v: set() for v in verts}
    for (a, b), col in c.colors.items():
        if a in out:
            out[a].add(col)
        if b in out:
            out[b].add(col)
    return {v: frozenset(s) for v, s in out.items()}


def random_instance(seed: int, k: int):
    """Linear forest of P3/P4/P5 on a shuffled vertex set, a k-coloring of it,
    maximum-size symmetric forbidden sets and a random disjoint pairing."""
    rng = random.Random(seed)
    n = rng.randint(12, 60)
    order = list(range(n))
    rng.shuffle(order)
    paths, i = [], 0
    while n - i >= 3:
        size = min(rng.choice([3, 4, 5]), n - i)
        paths.append(tuple(order[i : i + size]))
        i += size
    edges = [(min(a, b), max(a, b)) for p in paths for a, b in zip(p, p[1:])]
    g = Graph.from_edges(n, edges)
    forest = LinearForest(paths, tuple(sorted(order[i:])))
    base = EdgeColoring(
        g,
        k,
        {(min(a, b), max(a, b)): 1 + j % 2 for p in paths for j, (a, b) in enumerate(zip(p, p[1:]))},
    )
    fdeg = forest.forest_degree()
    by_deg = defaultdict(list)
    for v, d in sorted(fdeg.items()):
        by_deg[d].append(v)
    # pairs first: each counts against its members' budget
    pairs = []
    partner = {}
    for d, members in by_deg.items():
        pool = members[:]
        rng.shuffle(pool)
        for a, b in zip(pool[::2], pool[1::2]):
            if rng.random() < 0.5:
                pairs.append((a, b))
                partner[a], partner[b] = b, a
    forb = {v: set() for v in fdeg}
    for d, members in by_deg.items():
        limit = 2 * comb(k, d) - 1
        for _ in range(len(members) * limit * 4):
            if len(members) < 2:
                break
            a, b = rng.sample(members, 2)
            if partner.get(a) == b:
                continue
            load_a = len(forb[a]) + (a in partner)
            load_b = len(forb[b]) + (b in partner)
            if b not in forb[a] and load_a < limit and load_b < limit:
                forb[a].add(b)
                forb[b].add(a)
    return g, forest, base, forb, pairs


def check_recolor(g, forest, base, forb, pairs, psi) -> list[str]:
    errors = []
    k = base.palette
    fdeg = forest.forest_degree()
    if set(psi.colors) != set(forest.edges()):
        errors.append("recoloring does not cover exactly the forest edges")
    if any(not 1 <= c <= recolor_palette(k) for c in psi.colors.values()):
        errors.append("color outside the fresh palette")
    sets = _sets(psi, fdeg)
    for p in forest.paths:
        cols = [psi.colors[(min(a, b), max(a, b))] for a, b in zip(p, p[1:])]
        if len(set(cols)) != len(cols):
            errors.append(f"repeated color on path {p}")
    for v, us in forb.items():
        for u in us:
            if sets[u] == sets[v]:
                errors.append(f"forbidden clash {u} {v}")
    for a, b in pairs:
        if a in fdeg and b in fdeg and sets[a] == sets[b]:
            errors.append(f"pair clash {a} {b}")
    return errors


# path_recolor


def test_recolor_single_p3():
    g = path(3)
    forest = LinearForest([(0, 1, 2)], ())
    base = EdgeColoring(g, 2, {(0, 1): 1, (1, 2): 2})
    psi = path_recolor(forest, base, {}, [])
    assert sorted(psi.colors.values()) == [1, 2]
    assert psi.palette == recolor_palette(2) == 8


def test_recolor_single_p3_with_pair():
    g = path(3)
    forest = LinearForest([(0, 1, 2)], ())
    base = EdgeColoring(g, 2, {(0, 1): 1, (1, 2): 2})
    psi = path_recolor(forest, base, {}, [(0, 2)])
    sets = _sets(psi, range(3))
    assert sets[0] != sets[2]


def test_recolor_palette_arithmetic():
    assert [recolor_palette(k) for k in (2, 3, 4, 5)] == [8, 11, 15, 18]


def test_recolor_preconditions():
    g = path(3)
    forest = LinearForest([(0, 1, 2)], ())
    with pytest.raises(PreconditionError):
        path_recolor(forest, EdgeColoring(g, 1, {}), {}, [])
    g = Graph.from_edges(9, [(0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (7, 8)])
    forest = LinearForest([(0, 1, 2), (3, 4, 5), (6, 7, 8)], ())
    base = EdgeColoring(g, 2, {})
    # C(2, 1) = 2, so an endpoint may avoid at most 3 others
    too_many = {0: {2, 3, 5, 6}}
    with pytest.raises(PreconditionError):
        path_recolor(forest, base, too_many, [])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 4]))
def test_recolor_random_max_forbidden(seed, k):
    g, forest, base, forb, pairs = random_instance(seed, k)
    psi = path_recolor(forest, base, forb, pairs)
    assert check_recolor(g, forest, base, forb, pairs, psi) == []
    assert verify_proper(g, psi).passed


# select_conflict_edges


def test_conflict_edges_empty_x():
    g = cycle(5)
    forest = LinearForest([(0, 1, 2, 3, 4)], ())
    base = EdgeColoring(g, 4, {e: i + 1 for i, e in enumerate(g.edges[:4])} | {g.edges[4]: 2})
    pairs, edges, h = select_conflict_edges(g, forest, base)
    assert pairs == [] and edges == [] and h.m == 0


def test_conflict_edges_distinct_sets():
    g = star(3)
    forest = LinearForest([(1, 0, 2)], (3,))
    base = EdgeColoring(g, 3, {(0, 1): 1, (0, 2): 2, (0, 3): 3})
    pairs, edges, _ = select_conflict_edges(g, forest, base)
    assert pairs == [] and edges == []


def test_conflict_edges_case_three():
    # forest 0-1-2; X holds the edges 3-4 and 5-6, both hanging off vertex 1
    g = Graph.from_edges(7, [(0, 1), (1, 2), (1, 4), (1, 6), (3, 4), (5, 6)])
    forest = LinearForest([(0, 1, 2)], (3, 4, 5, 6))
    base = EdgeColoring(
        g, 5, {(0, 1): 2, (1, 2): 3, (1, 4): 4, (1, 6): 5, (3, 4): 1, (5, 6): 1}
    )
    pairs, edges, h = select_conflict_edges(g, forest, base)
    assert pairs == [(3, 5)]
    assert edges == [(3, 4)]
    assert {h.degree(3), h.degree(5)} == {1, 0}


def test_conflict_edges_rejects_non_semi_vd():
    g = cycle(4)
    forest = LinearForest([], (0, 1, 2, 3))
    base = EdgeColoring(g, 2, {(0, 1): 1, (1, 2): 2, (2, 3): 1, (0, 3): 2})
    from vdec.errors import SemiVdViolated

    with pytest.raises(SemiVdViolated):
        select_conflict_edges(g, forest, base)


def _bipartite(h: Graph) -> bool:
    side = {}
    for s in range(h.n):
        if s in side:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            v = stack.pop()
            for w in h.adj[v]:
                if w not in side:
                    side[w] = 1 - side[v]
                    stack.append(w)
                elif side[w] == side[v]:
                    return False
    return True


def _random_proper(g: Graph, palette: int, rng: random.Random) -> EdgeColoring | None:
    at = [set() for _ in range(g.n)]
    colors = {}
    edges = list(g.edges)
    rng.shuffle(edges)
    for u, v in edges:
        free = [c for c in range(1, palette + 1) if c not in at[u] and c not in at[v]]
        if not free:
            return None
        c = rng.choice(free)
        colors[(u, v)] = c
        at[u].add(c)
        at[v].add(c)
    return EdgeColoring(g, palette, colors)


def test_conflict_shift_separates_random_semi_vd_pairs():
    # refined colorings rarely leave pairs inside X, so sample raw proper
    # colorings and keep the semi-vd ones that do
    from vdec.path_factor import find_linear_forest
    from vdec.verify import verify_semi_vd

    instances = 0
    multi = 0
    for seed in range(1500):
        rng = random.Random(seed)
        n = rng.randint(6, 30)
        g = random_tree(n, seed) if seed % 2 else gnp(n, rng.choice([0.15, 0.25, 0.35]), seed)
        if not is_vdec(g) or g.m == 0:
            continue
        forest = find_linear_forest(g)
        if len(forest.uncovered) < 2:
            continue
        for _ in range(60):
            base = _random_proper(g, g.max_degree + 1 + rng.randint(0, 1), rng)
            if base is None or not verify_semi_vd(g, base).passed:
                continue
            pairs, edges, h = select_conflict_edges(g, forest, base)
            if not pairs:
                continue
            instances += 1
            multi += len(pairs) > 1
            k = base.palette
            shifted = base.copy()
            for e in edges:
                shifted.colors[e] += k
            assert _bipartite(h) and h.max_degree <= max(2, g.max_degree - 2)
            for u, v in pairs:
                assert shifted.color_set(u) != shifted.color_set(v)
                assert {h.degree(u), h.degree(v)} in ({1, 0}, {2, 0}, {2, 1})
            before = [base.color_set(v) for v in range(g.n)]
            after = [shifted.color_set(v) for v in range(g.n)]
            for u in range(g.n):
                for v in range(u + 1, g.n):
                    if before[u] != before[v]:
                        assert after[u] != after[v]
            break
    assert instances >= 50 and multi >= 1


# general_vdec


def check_general_run(g: Graph, res) -> list[str]:
    errors = []
    k_g = k_lower_bound(g)
    k = k_g + 1
    t = res.trace
    c = res.coloring
    if not verify_vd(g, c).passed:
        errors.append("final coloring not vd")
    if len(c.colors_used()) > general_bound(k_g):
        errors.append("palette bound exceeded")
    f_edges = set(t.forest.edges())
    shifted = set(t.conflict_edges)
    for e, col in c.colors.items():
        if e in f_edges and not 2 * k < col <= 2 * k + recolor_palette(k):
            errors.append(f"forest edge {e} color {col}")
        elif e in shifted and not k < col <= 2 * k:
            errors.append(f"shifted edge {e} color {col}")
        elif e not in f_edges and e not in shifted and not 1 <= col <= k:
            errors.append(f"base edge {e} color {col}")
    base_sets = {v: t.base.color_set(v) for v in range(g.n)}
    shift_sets = {v: t.shifted.color_set(v) for v in range(g.n)}
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if base_sets[u] != base_sets[v] and shift_sets[u] == shift_sets[v]:
                errors.append(f"shift merged {u} {v}")
    fdeg = t.forest.forest_degree()
    for v, us in t.forbidden.items():
        if len(us) > 2 * (comb(k, fdeg[v]) - 1):
            errors.append(f"forbidden set of {v} too large")
    # conflict-edge subgraph shape
    h = Graph.from_edges(g.n, t.conflict_edges)
    if not _bipartite(h) or h.max_degree > max(2, g.max_degree - 2):
        errors.append("conflict subgraph shape")
    x = set(t.forest.uncovered)
    groups = defaultdict(list)
    for v in sorted(x):
        groups[base_sets[v]].append(v)
    for vs in groups.values():
        if len(vs) == 2:
            degs = {h.degree(vs[0]), h.degree(vs[1])}
            if degs not in ({1, 0}, {2, 0}, {2, 1}):
                errors.append(f"pair {vs} has conflict degrees {degs}")
    return errors


def test_general_examples():
    res = general_vdec(cycle(5))
    assert res.k_g == 4 and res.bound == 28
    assert res.colors_used <= 28 and verify_vd(cycle(5), res.coloring).passed
    res = general_vdec(path(3))
    assert res.bound == 17 and verify_vd(path(3), res.coloring).passed
    with pytest.raises(NotVdecError):
        general_vdec(path(2))


def test_general_bound_arithmetic():
    assert general_bound(4) == 28 and general_bound(2) == 17 and general_bound(3) == 23


def test_general_with_isolated_vertex():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (0, 3)])
    res = general_vdec(g)
    assert verify_vd(g, res.coloring).passed
    assert res.coloring.color_set(4) == frozenset()


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 30), st.sampled_from([0.1, 0.2, 0.3, 0.5]), st.integers(0, 10**6))
def test_general_invariants_gnp(n, p, seed):
    g = gnp(n, p, seed)
    if not is_vdec(g):
        return
    res = general_vdec(g, seed=seed)
    assert check_general_run(g, res) == []


def test_general_invariants_trees_and_cycles():
    graphs = [random_tree(n, s) for n in range(3, 26) for s in range(2)]
    graphs += [cycle(n) for n in range(3, 15)] + [star(n) for n in range(2, 9)]
    for g in graphs:
        assert check_general_run(g, general_vdec(g)) == []


def test_general_deterministic():
    g = gnp(25, 0.3, 11)
    a = general_vdec(g, seed=9)
    b = general_vdec(g, seed=9)
    assert a.coloring.colors == b.coloring.colors
    assert a.trace.seeds == b.trace.seeds


def test_trace_json_shape():
    res = general_vdec(cycle(6), seed=3)
    data = json.loads(res.trace.to_json())
    assert [s["name"] for s in data["stages"]] == ["forest", "semi-vd", "shift", "path-recolor"]
    k = k_lower_bound(cycle(6)) + 1
    palettes = [tuple(s["palette"]) for s in data["stages"][1:]]
    assert palettes == [(1, k), (k + 1, 2 * k), (2 * k + 1, 2 * k + recolor_palette(k))]
    assert data["seeds"]["master"] == 3
    for s in data["stages"]:
        assert {"vertices", "edges", "elapsed_ms"} <= set(s)


# long_path_3color


def test_long_path_single_p3():
    g = path(3)
    c = long_path_3color(g, [(0, 1, 2)])
    assert sorted(c.colors.values()) == [1, 2]


def test_long_path_single_p3_pair():
    g = path(3)
    c = long_path_3color(g, [(0, 1, 2)], [(0, 2)])
    sets = _sets(c, range(3))
    assert sets[0] != sets[2] and len(sets[0]) == 1


def test_long_path_rejects_short_paths():
    with pytest.raises(PreconditionError):
        long_path_3color(path(2), [(0, 1)])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_long_path_random_pairings(seed):
    rng = random.Random(seed)
    n_paths = 30
    paths, nxt = [], 0
    for _ in range(n_paths):
        size = rng.choice([3, 4, 5])
        paths.append(tuple(range(nxt, nxt + size)))
        nxt += size
    g = Graph.from_edges(nxt, [(a, b) for p in paths for a, b in zip(p, p[1:])])
    fdeg = LinearForest(paths, ()).forest_degree()
    pairs = []
    for d in (1, 2):
        pool = [v for v in range(nxt) if fdeg[v] == d]
        rng.shuffle(pool)
        pairs += [(a, b) for a, b in zip(pool[::2], pool[1::2])]
    c = long_path_3color(g, paths, pairs, seed=seed)
    assert verify_proper(g, c).passed and set(c.colors.values()) <= {1, 2, 3}
    sets = _sets(c, range(nxt))
    assert all(sets[a] != sets[b] for a, b in pairs)


# regular_vdec


def test_regular_256():
    g = random_regular(256, 8, 1)
    res = regular_vdec(g, seed=1)
    assert verify_vd(g, res.coloring).passed
    assert res.colors_used <= res.bound == k_lower_bound(g) + 3


def test_regular_preconditions():
    with pytest.raises(PreconditionError, match="log2 n"):
        regular_vdec(random_regular(254, 8, 0))
    with pytest.raises(PreconditionError, match="complete"):
        regular_vdec(complete(9))
    with pytest.raises(PreconditionError, match="not regular"):
        regular_vdec(path(300))
    with pytest.raises(PreconditionError, match="d >= log2 n"):
        regular_vdec(cycle(300))
    with pytest.raises(PreconditionError, match="sqrt"):
        regular_vdec(random_regular(256, 28, 0))


def test_regular_255_odd_product():
    # 8-regular on 255 vertices exists; it fails on n < 256
    g = random_regular(255, 8, 0)
    with pytest.raises(PreconditionError, match="log2 n"):
        regular_vdec(g)


def test_regular_stage_palettes():
    g = random_regular(300, 9, 4)
    res = regular_vdec(g, seed=4)
    k_g = res.k_g
    f_edges = set(res.trace.forest.edges())
    for e, col in res.coloring.colors.items():
        if e in f_edges:
            assert k_g < col <= k_g + 3
        else:
            assert 1 <= col <= k_g
    assert res.trace.forest.uncovered == ()
