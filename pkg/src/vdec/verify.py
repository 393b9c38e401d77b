"""Postcondition checkers.

Every checker is a pure function of (graph, artifact) and reports witnesses
instead of raising, so acceptance code can print what went wrong.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .edge_coloring import EdgeColoring
from .graph import Graph


@dataclass
class VerificationReport:
    violations: list[tuple[str, tuple]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def add(self, check: str, witness: Iterable) -> None:
        self.violations.append((check, tuple(witness)))

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        self.violations.extend(other.violations)
        return self

    def to_json(self, g: Graph | None = None) -> str:
        def label(x):
            if g is not None and isinstance(x, int):
                return g.labels[x]
            if isinstance(x, tuple) and g is not None:
                return [label(y) for y in x]
            return x

        items = sorted(self.violations, key=lambda cw: (cw[0], repr(cw[1])))
        payload = {
            "passed": self.passed,
            "violations": [
                {"check": name, "witness": [label(w) for w in wit]}
                for name, wit in items
            ],
        }
        return json.dumps(payload, indent=2) + "\n"


def _sets(g: Graph, c: EdgeColoring, report: VerificationReport):
    out = []
    for v in range(g.n):
        cols = []
        for w in g.adj[v]:
            col = c.colors.get((v, w) if v < w else (w, v))
            if col is None:
                report.add("uncolored", (v, w))
            else:
                cols.append(col)
        out.append(cols)
    return out


def verify_proper(g: Graph, c: EdgeColoring) -> VerificationReport:
    report = VerificationReport()
    for v, cols in enumerate(_sets(g, c, report)):
        if len(cols) != len(set(cols)):
            report.add("improper", (v,))
        bad = [col for col in cols if not 1 <= col <= c.palette]
        if bad:
            report.add("palette", (v, *sorted(set(bad))))
    for e in c.colors:
        if not g.has_edge(*e):
            report.add("foreign-edge", e)
    return report


def _groups(g: Graph, c: EdgeColoring, report: VerificationReport):
    groups = defaultdict(list)
    for v, cols in enumerate(_sets(g, c, report)):
        groups[frozenset(cols)].append(v)
    return groups


def verify_vd(g: Graph, c: EdgeColoring) -> VerificationReport:
    """Flags every pair of distinct vertices with equal color-sets."""
    report = verify_proper(g, c)
    groups = _groups(g, c, report)
    for members in groups.values():
        for u, v in combinations(members, 2):
            report.add("not-distinguished", (u, v))
    return report


def verify_semi_vd(g: Graph, c: EdgeColoring) -> VerificationReport:
    """Flags any color-set carried by three or more vertices."""
    report = verify_proper(g, c)
    for members in _groups(g, c, report).values():
        if len(members) >= 3:
            report.add("set-on-3+", tuple(members))
    return report


def verify_packing(
    g: Graph, paths: Sequence[Sequence[int]], lengths: Iterable[int] = (2, 3, 4)
) -> VerificationReport:
    report = VerificationReport()
    allowed = set(lengths)
    seen: dict[int, int] = {}
    for i, p in enumerate(paths):
        if len(p) - 1 not in allowed:
            report.add("path-length", tuple(p))
        for v in p:
            if v in seen:
                report.add("overlap", (v,))
            seen[v] = i
        for a, b in zip(p, p[1:]):
            if not g.has_edge(a, b):
                report.add("non-edge", (a, b))
    return report


def verify_forest(g: Graph, forest) -> VerificationReport:
    """Checks the three linear-forest properties literally.

    (1) paths of 2-4 edges; (2) the uncovered vertices induce only isolated
    vertices and edges, each of host degree at most (max_degree + 1) / 2;
    (3) every covered neighbour of an uncovered vertex is a path interior.
    """
    report = verify_packing(g, forest.paths)
    if report.violations:
        report.violations = [("property-1:" + n, w) for n, w in report.violations]
    fdeg: dict[int, int] = {}
    for p in forest.paths:
        for i, v in enumerate(p):
            fdeg[v] = 1 if i in (0, len(p) - 1) else 2
    uncovered = set(range(g.n)) - set(fdeg)
    if set(forest.uncovered) != uncovered:
        report.add("uncovered-mismatch", sorted(uncovered ^ set(forest.uncovered)))
    delta = g.max_degree
    for v in sorted(uncovered):
        inside = [w for w in g.adj[v] if w in uncovered]
        if len(inside) > 1:
            report.add("property-2:component", (v, *inside))
        elif inside and any(x != v and x in uncovered for x in g.adj[inside[0]]):
            report.add("property-2:component", (v, *g.adj[inside[0]]))
        if 2 * g.degree(v) > delta + 1:
            report.add("property-2:degree", (v,))
        for w in g.adj[v]:
            if w in fdeg and fdeg[w] != 2:
                report.add("property-3", (v, w))
    return report
