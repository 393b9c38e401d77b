"""Deterministic graph generators keyed by (kind, params, seed)."""

from __future__ import annotations

import random

from .errors import PreconditionError
from .graph import Graph


def cycle(n: int) -> Graph:
    if n < 3:
        raise PreconditionError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    if n < 1:
        raise PreconditionError("a path needs at least 1 vertex")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def gnp(n: int, p: float, seed: int = 0) -> Graph:
    if not 0.0 <= p <= 1.0:
        raise PreconditionError("p must lie in [0, 1]")
    rng = random.Random(seed)
    return Graph.from_edges(
        n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    )


def random_tree(n: int, seed: int = 0) -> Graph:
    """Uniform labelled tree via a random Pruefer sequence."""
    if n < 1:
        raise PreconditionError("a tree needs at least 1 vertex")
    if n <= 2:
        return path(n)
    rng = random.Random(seed)
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(v for v in range(n) if degree[v] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [w for w in range(n) if degree[w] == 1]
    edges.append((u, v))
    return Graph.from_edges(n, edges)


def random_regular(n: int, d: int, seed: int = 0, attempts: int = 1000) -> Graph:
    """Random simple d-regular graph from the pairing (configuration) model.

    Stubs are paired at random; a pairing that would create a loop or a
    repeated edge is rejected and its stubs go back into the pool.  A pool
    with no acceptable pair left restarts the attempt.
    """
    if (n * d) % 2:
        raise PreconditionError("n * d must be even")
    if not 0 <= d < n:
        raise PreconditionError("need 0 <= d < n")
    rng = random.Random(seed)
    for _ in range(attempts):
        edges = _try_pairing(n, d, rng)
        if edges is not None:
            return Graph.from_edges(n, edges)
    raise PreconditionError(f"pairing model failed {attempts} times for n={n}, d={d}")


def _try_pairing(n: int, d: int, rng: random.Random):
    edges: set[tuple[int, int]] = set()
    stubs = [v for v in range(n) for _ in range(d)]
    while stubs:
        rng.shuffle(stubs)
        left = []
        for a, b in zip(stubs[::2], stubs[1::2]):
            e = (a, b) if a < b else (b, a)
            if a != b and e not in edges:
                edges.add(e)
            else:
                left += [a, b]
        if len(left) == len(stubs):
            return None
        stubs = left
    return sorted(edges)


GENERATORS = {
    "cycle": lambda p, seed: cycle(int(p["n"])),
    "path": lambda p, seed: path(int(p["n"])),
    "star": lambda p, seed: star(int(p.get("leaves", int(p.get("n", 2)) - 1))),
    "tree": lambda p, seed: random_tree(int(p["n"]), seed),
    "gnp": lambda p, seed: gnp(int(p["n"]), float(p["p"]), seed),
    "regular": lambda p, seed: random_regular(int(p["n"]), int(p["d"]), seed),
}


def generate(kind: str, params: dict, seed: int = 0) -> Graph:
    if kind not in GENERATORS:
        raise PreconditionError(f"unknown generator {kind!r}")
    try:
        return GENERATORS[kind](params, seed)
    except KeyError as exc:
        raise PreconditionError(f"{kind} needs parameter {exc.args[0]!r}") from None
