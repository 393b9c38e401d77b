from __future__ import annotations

from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vdec.errors import GraphParseError, NotVdecError
from vdec.generators import complete, cycle, path, star
from vdec.graph import (
    Graph,
    components,
    contract_components,
    degree_profile,
    is_vdec,
    k_for_profile,
    k_lower_bound,
    load_graph,
    save_graph,
)


@st.composite
def graphs(draw, max_n: int = 12):
    n = draw(st.integers(0, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, edges)


def _k_by_definition(profile: dict[int, int]) -> int:
    # independent scan that also checks k = 0
    k = 0
    while True:
        if all(comb(k, d) >= c for d, c in profile.items()):
            return k
        k += 1


# load_graph


def test_load_path():
    g = load_graph("0 1\n1 2")
    assert (g.n, g.m) == (3, 2)
    assert list(g.edges) == [(0, 1), (1, 2)]


def test_load_rejects_loop():
    with pytest.raises(GraphParseError, match="line 1"):
        load_graph("0 0")


def test_load_rejects_duplicate_with_line_number():
    with pytest.raises(GraphParseError, match="line 3"):
        load_graph("# c\n0 1\n0 1")


def test_load_rejects_reversed_duplicate():
    with pytest.raises(GraphParseError):
        load_graph("a b\nb a")


def test_load_isolated_vertices_and_labels():
    g = load_graph("x\nfoo bar  # trailing\n\n")
    assert list(g.labels) == ["x", "foo", "bar"]
    assert g.n == 3 and g.m == 1
    assert g.degree(0) == 0


def test_load_header():
    g = load_graph("vertices: 4\n0 1\n2 3")
    assert g.n == 4 and g.m == 2


def test_load_bad_token_count():
    with pytest.raises(GraphParseError, match="line 2"):
        load_graph("0 1\n1 2 3")


def test_from_edges_rejects_loop():
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(1, 1)])


@given(graphs())
def test_save_load_roundtrip(g):
    h = load_graph(save_graph(g))
    assert h.n == g.n and h.edges == g.edges


def test_save_load_roundtrip_custom_labels():
    g = load_graph("b a\nc a\nz")
    h = load_graph(save_graph(g))
    assert h.labels == g.labels and h.edges == g.edges


@given(graphs())
def test_adjacency_invariants(g):
    for v in range(g.n):
        assert g.degree(v) == len(g.adj[v])
        assert list(g.adj[v]) == sorted(g.adj[v])
        for w in g.adj[v]:
            assert v in g.adj[w] and w != v
    assert sum(g.degrees()) == 2 * g.m


# is_vdec


def test_is_vdec_examples():
    assert is_vdec(path(3))
    assert not is_vdec(path(2))
    two_isolated_plus_c3 = Graph.from_edges(5, [(2, 3), (3, 4), (2, 4)])
    assert not is_vdec(two_isolated_plus_c3)
    one_isolated = Graph.from_edges(4, [(1, 2), (2, 3)])
    assert is_vdec(one_isolated)


# k_lower_bound


def test_k_examples():
    assert k_lower_bound(path(3)) == 2
    assert k_lower_bound(cycle(5)) == 4
    with pytest.raises(NotVdecError):
        k_lower_bound(path(2))


def test_k_uses_exact_integers_for_large_classes():
    profile = {30: 10**8}
    k = k_for_profile(profile)
    assert comb(k, 30) >= 10**8 > comb(k - 1, 30)


@given(graphs())
def test_k_matches_definition(g):
    if not is_vdec(g):
        return
    profile = degree_profile(g)
    expected = max(1, _k_by_definition(profile))
    assert k_lower_bound(g) == expected
    assert sum(profile.values()) == g.n
    if g.m:
        assert g.max_degree <= k_lower_bound(g)


@given(st.dictionaries(st.integers(1, 6), st.integers(0, 40), min_size=1), st.integers(1, 6))
def test_k_monotone_in_class_size(profile, d):
    bigger = dict(profile)
    bigger[d] = bigger.get(d, 0) + 1
    assert k_for_profile(bigger) >= k_for_profile(profile)


def test_k_regular_at_most_2d():
    from vdec.generators import random_regular

    for n, d in ((256, 8), (512, 9), (1024, 10)):
        g = random_regular(n, d, 3)
        assert k_lower_bound(g) <= 2 * d


# components


def test_components_examples():
    p3_k2 = Graph.from_edges(5, [(0, 1), (1, 2), (3, 4)])
    assert sorted(len(c) for c in components(p3_k2)) == [2, 3]
    assert components(Graph.from_edges(3, [])) == [[0], [1], [2]]
    assert components(cycle(5)) == [[0, 1, 2, 3, 4]]


@given(graphs())
def test_components_partition(g):
    comps = components(g)
    flat = sorted(v for c in comps for v in c)
    assert flat == list(range(g.n))
    owner = {v: i for i, c in enumerate(comps) for v in c}
    for u, v in g.edges:
        assert owner[u] == owner[v]


# contract_components


def test_contract_star():
    g = star(3)
    comps = [[1], [2], [3]]
    b, where = contract_components(g, {0}, comps)
    assert b.multiplicity == {(0, 1): 1, (0, 2): 1, (0, 3): 1}
    assert where == {0: 1, 1: 2, 2: 3}


def test_contract_c4_opposite():
    g = cycle(4)
    b, _ = contract_components(g, {0, 2}, [[1], [3]])
    assert b.edge_count == 4
    assert sorted(b.multiplicity) == [(0, 2), (0, 3), (1, 2), (1, 3)]


def test_contract_triangle():
    g = complete(3)
    b, _ = contract_components(g, {0}, [[1, 2]])
    assert b.multiplicity == {(0, 1): 2}


def test_contract_rejects_bad_partition():
    g = path(4)
    with pytest.raises(ValueError):
        contract_components(g, {0}, [[1], [2, 3]])
    with pytest.raises(ValueError):
        contract_components(g, {0}, [[1, 2]])


@given(graphs(10), st.data())
def test_contract_is_bipartite_and_counts_cut(g, data):
    s = data.draw(st.sets(st.integers(0, max(g.n - 1, 0)), max_size=g.n)) if g.n else set()
    rest = [v for v in range(g.n) if v not in s]
    sub, old = g.subgraph(rest)
    comps = [[old[v] for v in c] for c in components(sub)]
    b, _ = contract_components(g, s, comps)
    assert b.is_bipartite_on_parts()
    cut = sum(1 for u, v in g.edges if (u in s) != (v in s))
    assert b.edge_count == cut
