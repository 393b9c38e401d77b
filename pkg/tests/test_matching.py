from __future__ import annotations


import pytest
from hypothesis import given
from hypothesis import strategies as st

from vdec.errors import NoPerfectMatchingError
from vdec.generators import complete, cycle, path
from vdec.graph import Graph
from vdec.matching import is_factor_critical, max_matching, near_perfect_matching
from vdec.oracle import brute_matching_size

from test_graph import graphs


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def _is_matching(g: Graph, m) -> bool:
    seen = set()
    for u, v in m:
        if not g.has_edge(u, v) or u in seen or v in seen:
            return False
        seen |= {u, v}
    return True


def _fc_by_definition(g: Graph) -> bool:
    from vdec.graph import components

    if g.n == 0 or len(components(g)) != 1:
        return False
    for x in range(g.n):
        rest = [v for v in range(g.n) if v != x]
        sub, _ = g.subgraph(rest)
        if 2 * brute_matching_size(sub) != len(rest):
            return False
    return True


def test_max_matching_examples():
    assert len(max_matching(cycle(5))) == 2
    assert len(max_matching(complete(4))) == 2
    assert len(max_matching(petersen())) == 5


@given(graphs(12))
def test_max_matching_is_maximum(g):
    m = max_matching(g)
    assert _is_matching(g, m)
    assert len(m) == brute_matching_size(g)


def test_factor_critical_examples():
    assert is_factor_critical(cycle(5))
    assert not is_factor_critical(path(3))
    assert is_factor_critical(Graph.from_edges(1, []))
    assert not is_factor_critical(complete(4))


@given(graphs(9))
def test_factor_critical_matches_definition(g):
    fc = is_factor_critical(g)
    assert fc == _fc_by_definition(g)
    if fc:
        assert g.n % 2 == 1
        assert 2 * len(max_matching(g)) < g.n


def test_near_perfect_matching_examples():
    for x in range(5):
        m = near_perfect_matching(cycle(5), x)
        covered = {v for e in m for v in e}
        assert covered == set(range(5)) - {x}
    assert near_perfect_matching(complete(3), 0) == [(1, 2)]
    assert near_perfect_matching(Graph.from_edges(1, []), 0) == []


def test_near_perfect_matching_error():
    with pytest.raises(NoPerfectMatchingError):
        near_perfect_matching(path(3), 1)


@given(graphs(9), st.data())
def test_near_perfect_matching_covers_rest(g, data):
    if g.n == 0:
        return
    x = data.draw(st.integers(0, g.n - 1))
    rest = [v for v in range(g.n) if v != x]
    sub, _ = g.subgraph(rest)
    has = 2 * brute_matching_size(sub) == len(rest)
    if not has:
        with pytest.raises(NoPerfectMatchingError):
            near_perfect_matching(g, x)
        return
    m = near_perfect_matching(g, x)
    assert _is_matching(g, m)
    assert {v for e in m for v in e} == set(rest)
