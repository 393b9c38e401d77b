"""Simple undirected graphs, edge-list I/O and degree statistics.

Vertices are dense 0-based integers.  Input labels are kept on the graph
(``Graph.labels``) so reports can be written back in the caller's vocabulary.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

from .errors import GraphParseError, NotVdecError


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph.

    ``edges`` holds canonical pairs ``(u, v)`` with ``u < v`` in sorted order
    and ``adj[v]`` is the sorted neighbour tuple of ``v``.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adj: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]
    _edge_set: frozenset = field(repr=False, compare=False, default=frozenset())

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[str] | None = None,
    ) -> "Graph":
        canon: set[tuple[int, int]] = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            e = (u, v) if u < v else (v, u)
            if e in canon:
                raise ValueError(f"duplicate edge {e}")
            canon.add(e)
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in canon:
            nbrs[u].append(v)
            nbrs[v].append(u)
        if labels is None:
            labels = [str(i) for i in range(n)]
        elif len(labels) != n:
            raise ValueError("label count does not match vertex count")
        return cls(
            n=n,
            edges=tuple(sorted(canon)),
            adj=tuple(tuple(sorted(a)) for a in nbrs),
            labels=tuple(labels),
            _edge_set=frozenset(canon),
        )

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    @property
    def min_degree(self) -> int:
        return min((len(a) for a in self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_set

    def is_regular(self) -> bool:
        return self.n > 0 and self.max_degree == self.min_degree

    def subgraph(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``vertices``; returns it with the new->old id map."""
        old = sorted(set(vertices))
        new_of = {v: i for i, v in enumerate(old)}
        edges = [
            (new_of[u], new_of[v])
            for u in old
            for v in self.adj[u]
            if u < v and v in new_of
        ]
        labels = [self.labels[v] for v in old]
        return Graph.from_edges(len(old), edges, labels), old

    def remove_edges(self, removed: Iterable[tuple[int, int]]) -> "Graph":
        """Spanning subgraph without the given edges."""
        drop = {(u, v) if u < v else (v, u) for u, v in removed}
        return Graph.from_edges(
            self.n, [e for e in self.edges if e not in drop], self.labels
        )


@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph keyed by canonical vertex pairs.

    ``parts`` records the bipartition when the multigraph comes from a
    contraction (``parts[0]`` the kept vertices, ``parts[1]`` the contracted
    ones).
    """

    n: int
    multiplicity: dict[tuple[int, int], int]
    parts: tuple[tuple[int, ...], tuple[int, ...]] = ((), ())

    def degree(self, v: int) -> int:
        return sum(c for (a, b), c in self.multiplicity.items() if v in (a, b))

    def neighbors(self, v: int) -> list[int]:
        out = []
        for a, b in self.multiplicity:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return sorted(out)

    @property
    def edge_count(self) -> int:
        return sum(self.multiplicity.values())

    def is_bipartite_on_parts(self) -> bool:
        left = set(self.parts[0])
        return all((a in left) != (b in left) for a, b in self.multiplicity)


# --------------------------------------------------------------------------
# I/O
# --------------------------------------------------------------------------


def load_graph(text: str) -> Graph:
    """Parse an edge-list document.

    One ``u v`` pair per line; ``#`` starts a comment; blank lines are
    ignored.  A single-token line declares an isolated vertex and a header
    ``vertices: N`` declares labels ``0..N-1`` up front.
    """
    index: dict[str, int] = {}
    labels: list[str] = []
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()

    def vid(label: str) -> int:
        if label not in index:
            index[label] = len(labels)
            labels.append(label)
        return index[label]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("vertices:"):
            try:
                count = int(line.split(":", 1)[1])
            except ValueError:
                raise GraphParseError(f"line {lineno}: bad vertex count") from None
            if count < 0:
                raise GraphParseError(f"line {lineno}: negative vertex count")
            for i in range(count):
                vid(str(i))
            continue
        tokens = line.split()
        if len(tokens) == 1:
            vid(tokens[0])
            continue
        if len(tokens) != 2:
            raise GraphParseError(
                f"line {lineno}: expected 'u v', got {len(tokens)} tokens"
            )
        a, b = tokens
        if a == b:
            raise GraphParseError(f"line {lineno}: loop at vertex {a!r}")
        u, v = vid(a), vid(b)
        e = (u, v) if u < v else (v, u)
        if e in seen:
            raise GraphParseError(f"line {lineno}: duplicate edge {a} {b}")
        seen.add(e)
        edges.append(e)
    return Graph.from_edges(len(labels), edges, labels)


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return load_graph(fh.read())


def save_graph(g: Graph) -> str:
    """Edge-list text that :func:`load_graph` reads back to the same graph."""
    if _default_labels(g):
        lines = [f"vertices: {g.n}"]
    else:
        # declare every label first so ids come back in the same order
        lines = list(g.labels)
    lines.extend(f"{g.labels[u]} {g.labels[v]}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def _default_labels(g: Graph) -> bool:
    return all(lab == str(i) for i, lab in enumerate(g.labels))


# --------------------------------------------------------------------------
# structure
# --------------------------------------------------------------------------


def components(g: Graph) -> list[list[int]]:
    """Connected components as sorted vertex lists, ordered by smallest id."""
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            x = stack.pop()
            for y in g.adj[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    stack.append(y)
        out.append(sorted(comp))
    return out


def components_avoiding(
    adj: Sequence[Sequence[int]], vertices: Iterable[int], removed: set[int]
) -> list[list[int]]:
    """Components of the subgraph induced on ``vertices`` minus ``removed``."""
    alive = set(vertices) - removed
    out = []
    for s in sorted(alive):
        if s not in alive:
            continue
        alive.discard(s)
        comp = [s]
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in alive:
                    alive.discard(y)
                    comp.append(y)
                    stack.append(y)
        out.append(sorted(comp))
    return out


def is_vdec(g: Graph) -> bool:
    """At most one isolated vertex and no component that is a single edge."""
    isolated = 0
    for comp in components(g):
        if len(comp) == 1:
            isolated += 1
        elif len(comp) == 2:
            return False
    return isolated <= 1


def degree_profile(g: Graph) -> dict[int, int]:
    """Map degree d -> n_d over [min_degree, max_degree] (zeros included)."""
    counts = Counter(g.degrees())
    if not counts:
        return {}
    return {d: counts.get(d, 0) for d in range(g.min_degree, g.max_degree + 1)}


def k_for_profile(profile: dict[int, int]) -> int:
    """Smallest k >= 1 with C(k, d) >= n_d for every degree class."""
    k = 1
    # C(k, d) is nondecreasing in k, so a linear scan is exact
    while any(comb(k, d) < n_d for d, n_d in profile.items()):
        k += 1
    return k


def k_lower_bound(g: Graph) -> int:
    if not is_vdec(g):
        raise NotVdecError("graph has an isolated edge or several isolated vertices")
    return k_for_profile(degree_profile(g))


def contract_components(
    g: Graph, s: Iterable[int], comps: Sequence[Sequence[int]]
) -> tuple[Multigraph, dict[int, int]]:
    """Contract each component of ``g - s`` to a single vertex.

    Vertices of the result are ``0..|s|-1`` for the sorted members of ``s``,
    followed by one vertex per component (in the given order).  Edges inside
    ``s`` and inside components are dropped.  Returns the multigraph and the
    map ``component index -> contracted vertex``.
    """
    s_sorted = sorted(set(s))
    s_index = {v: i for i, v in enumerate(s_sorted)}
    owner: dict[int, int] = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            if v in owner or v in s_index:
                raise ValueError(f"vertex {v} appears twice in the partition")
            owner[v] = ci
    if len(owner) + len(s_index) != g.n:
        raise ValueError("components and s do not partition the vertex set")
    for u, v in g.edges:
        if u in owner and v in owner and owner[u] != owner[v]:
            raise ValueError(f"edge ({u}, {v}) joins two different components")

    base = len(s_sorted)
    comp_vertex = {ci: base + ci for ci in range(len(comps))}
    mult: dict[tuple[int, int], int] = {}
    for x in s_sorted:
        for y in g.adj[x]:
            if y in owner:
                key = (s_index[x], comp_vertex[owner[y]])
                mult[key] = mult.get(key, 0) + 1
    mg = Multigraph(
        n=base + len(comps),
        multiplicity=mult,
        parts=(tuple(range(base)), tuple(range(base, base + len(comps)))),
    )
    return mg, comp_vertex
