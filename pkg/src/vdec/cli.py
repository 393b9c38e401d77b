"""Command-line front end: ``vdec {kbound,color,verify,gen,bench}``."""

from __future__ import annotations

import argparse
import os
import re
import sys
import time
from pathlib import Path

from .edge_coloring import coloring_from_json, coloring_to_json
from .errors import PreconditionError, VdecError
from .generators import generate
from .graph import Graph, degree_profile, k_lower_bound, read_graph, save_graph
from .oracle import exact_vd_coloring
from .path_factor import DEFAULT_EXACT_LIMIT
from .pipeline import PipelineResult, check_regular_preconditions, general_vdec, regular_vdec
from .verify import verify_vd

CSV_HEADER = "name,n,m,k,method,colors_used,bound,verified,ms,error"


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("VDEC_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise PreconditionError(f"VDEC_SEED is not an integer: {env!r}") from None


def _exact(g: Graph, k_max: int | None = None) -> tuple:
    lo = k_lower_bound(g)
    hi = lo + 3 if k_max is None else k_max
    for k in range(lo, hi + 1):
        c = exact_vd_coloring(g, k)
        if c is not None:
            return c, lo, k
    raise PreconditionError(f"no vd coloring with at most {hi} colors")


def run_method(g: Graph, method: str, seed: int, exact_limit: int, restarts: int):
    """Returns (coloring, k(G), bound, trace or None)."""
    if method == "exact":
        c, k_g, best = _exact(g)
        return c, k_g, best, None
    fn = general_vdec if method == "general" else regular_vdec
    kwargs = {"restarts": restarts}
    if method == "general":
        kwargs["exact_limit"] = exact_limit
    res: PipelineResult = fn(g, seed, **kwargs)
    return res.coloring, res.k_g, res.bound, res.trace


def cmd_kbound(args) -> int:
    g = read_graph(args.graph)
    k = k_lower_bound(g)
    print(k)
    profile = " ".join(f"{d}:{c}" for d, c in degree_profile(g).items())
    print(f"degree profile {profile}")
    return 0


def cmd_color(args) -> int:
    g = read_graph(args.graph)
    c, k_g, bound, trace = run_method(g, args.method, _seed(args), args.exact_limit, args.restarts)
    report = verify_vd(g, c)
    if not report.passed:
        from .errors import VerificationFailed

        raise VerificationFailed("coloring failed verification")
    text = coloring_to_json(c)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.trace and trace is not None:
        Path(args.trace).write_text(trace.to_json())
    print(f"{len(c.colors_used())} / {bound}", file=sys.stderr if not args.out else sys.stdout)
    return 0


def cmd_verify(args) -> int:
    g = read_graph(args.graph)
    c = coloring_from_json(Path(args.coloring).read_text(), g)
    report = verify_vd(g, c)
    sys.stdout.write(report.to_json(g))
    return 0 if report.passed else 5


def _params(items: list[str]) -> dict:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise PreconditionError(f"parameter {item!r} is not key=value")
        out[key] = value
    return out


def cmd_gen(args) -> int:
    g = generate(args.kind, _params(args.params), args.seed if args.seed is not None else 0)
    text = save_graph(g)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _error_slug(exc: Exception) -> str:
    name = type(exc).__name__
    for suffix in ("Error", "Failed"):
        if name.endswith(suffix) and name != suffix:
            name = name[: -len(suffix)] + ("" if suffix == "Error" else "Failed")
    return re.sub(r"(?<!^)(?=[A-Z])", "-", name).lower()


def _applicable(g: Graph, method: str) -> bool:
    if method != "regular":
        return True
    try:
        check_regular_preconditions(g)
    except PreconditionError:
        return False
    return True


def bench_rows(paths: list[Path], methods: list[str], seed: int, exact_limit: int, restarts: int):
    yield CSV_HEADER
    for path in sorted(paths, key=lambda p: p.name):
        name = re.sub(r"[^A-Za-z0-9_.-]", "_", path.stem)
        try:
            g = read_graph(path)
        except VdecError as exc:
            yield f"{name},,,,,,,false,,{_error_slug(exc)}"
            continue
        for method in methods:
            if not _applicable(g, method):
                continue
            started = time.perf_counter()
            k_g = bound = used = ""
            verified = "false"
            error = ""
            try:
                c, k_g, bound, _ = run_method(g, method, seed, exact_limit, restarts)
                used = len(c.colors_used())
                verified = "true" if verify_vd(g, c).passed else "false"
            except VdecError as exc:
                error = _error_slug(exc)
                try:
                    k_g = k_lower_bound(g)
                except VdecError:
                    pass
            ms = round((time.perf_counter() - started) * 1000, 3)
            yield f"{name},{g.n},{g.m},{k_g},{method},{used},{bound},{verified},{ms},{error}"


def cmd_bench(args) -> int:
    corpus = Path(args.corpus)
    if not corpus.is_dir():
        raise PreconditionError(f"{corpus} is not a directory")
    methods = args.methods.split(",") if args.methods else ["general", "regular"]
    if args.with_exact and "exact" not in methods:
        methods.append("exact")
    files = [p for p in corpus.iterdir() if p.is_file() and not p.name.startswith(".")]
    lines = "\n".join(
        bench_rows(files, methods, _seed(args), args.exact_limit, args.restarts)
    ) + "\n"
    if args.out:
        Path(args.out).write_text(lines)
    else:
        sys.stdout.write(lines)
    return 0


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vdec", description="Vertex-distinguishing edge colorings.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kbound", help="print k(G) and the degree profile")
    p.add_argument("graph")
    p.set_defaults(func=cmd_kbound)

    def common(p):
        p.add_argument("--seed", type=int, default=None, help="master seed (default $VDEC_SEED or 0)")
        p.add_argument("--exact-limit", type=_positive, default=DEFAULT_EXACT_LIMIT)
        p.add_argument("--restarts", type=_positive, default=50)
        p.add_argument("--out")

    p = sub.add_parser("color", help="compute and verify a vd coloring")
    p.add_argument("graph")
    p.add_argument("--method", choices=["general", "regular", "exact"], default="general")
    p.add_argument("--trace", help="write the stage trace JSON here")
    common(p)
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("verify", help="check a coloring JSON against a graph")
    p.add_argument("graph")
    p.add_argument("coloring")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate a graph file")
    p.add_argument("kind", choices=["gnp", "regular", "cycle", "path", "star", "tree"])
    p.add_argument("params", nargs="*", help="key=value, e.g. n=10 p=0.3")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run methods over a corpus directory, emit CSV")
    p.add_argument("corpus")
    p.add_argument("--methods", help="comma list (default general,regular)")
    p.add_argument("--with-exact", action="store_true", help="also run the exact oracle")
    common(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except VdecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
