"""Command-line front end: ``bbatlas <command> [options]``.

Exit status 0 on success, 1 on domain errors (a JSON error object is printed),
2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from bbatlas import cohomology, flow, gathmann, io, oracles, poset, selftest
from bbatlas.enumeration import DEFAULT_CEILING, ResourceLimitError, enumerate_graphs
from bbatlas.graph import InconsistencyError, canonical_key, codimension, validate


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int | None = None
    r: int | None = None
    d: int | None = None
    format: str = "json"
    cache_dir: str | None = None
    ceiling: int = DEFAULT_CEILING
    jobs: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.ceiling < 1:
            raise ValueError("ceiling must be at least 1")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")


DOMAIN_ERRORS = (
    ValueError,
    InconsistencyError,
    ResourceLimitError,
    cohomology.EquivariantDataRequired,
    cohomology.CacheCorruption,
    poset.UnreachableGraphError,
    flow.WitnessNotFound,
    oracles.InterpolationMismatch,
)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _alpha(text: str) -> tuple[int, ...]:
    try:
        out = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if any(a < 0 for a in out):
        raise argparse.ArgumentTypeError("tangency orders must be nonnegative")
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=_positive, default=1)
    common.add_argument("--cache-dir", default=None,
                        help=f"cache directory (default ${cohomology.CACHE_ENV} or {cohomology.DEFAULT_CACHE})")
    common.add_argument("--ceiling", type=_positive, default=DEFAULT_CEILING)

    parser = argparse.ArgumentParser(prog="bbatlas", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def nrd(p, n_default=None):
        p.add_argument("--n", type=int, required=n_default is None, default=n_default)
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--r", type=_positive, required=True)

    p = sub.add_parser("enumerate", parents=[common], help="list fixed-locus graphs")
    nrd(p)
    p.add_argument("--format", choices=["json", "dot", "summary"], default="json")

    p = sub.add_parser("poset", parents=[common], help="one-step move order and levels")
    nrd(p)
    p.add_argument("--check-filterable", action="store_true")
    p.add_argument("--hasse", metavar="OUT.dot")
    p.add_argument("--levels", choices=["longest", "shortest"], default="longest")

    p = sub.add_parser("poincare", parents=[common], help="Poincare polynomial of the moduli space")
    nrd(p)
    p.add_argument("--per-graph", action="store_true")
    p.add_argument("--no-cache", action="store_true")

    p = sub.add_parser("limit", parents=[common], help="limit graph of the flow")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", metavar="CFG.json")
    src.add_argument("--poly", metavar="MAP.json")
    p.add_argument("--r", type=_positive)
    p.add_argument("--format", choices=["json", "dot"], default="json")

    p = sub.add_parser("boundary", parents=[common], help="limit of a tangency boundary map with a witness")
    p.add_argument("--config", required=True, metavar="B.json")
    p.add_argument("--gamma", metavar="G.json")
    p.add_argument("--r", type=_positive, required=True)

    p = sub.add_parser("gathmann", parents=[common], help="boundary terms of the tangency recursion")
    p.add_argument("--alpha", type=_alpha, required=True)
    p.add_argument("--j", type=_positive, required=True)
    p.add_argument("--d", type=_positive, required=True)
    p.add_argument("--r", type=_positive, required=True)
    p.add_argument("--ordered", action="store_true")

    p = sub.add_parser("oracle", parents=[common], help="point-count oracles")
    p.add_argument("what", choices=["mbar"])
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("selftest", parents=[common], help="run the invariant suite")
    p.add_argument("--max-d", type=_positive, default=2)
    p.add_argument("--max-n", type=int, default=1)
    p.add_argument("--max-r", type=_positive, default=2)
    p.add_argument("--samples", type=_positive, default=200)
    p.add_argument("--format", choices=["table", "json"], default="table")
    return parser


def summary_line(data: dict) -> str:
    """Human summary of the ``enumerate`` JSON output."""
    hist = Counter(g["codimension"] for g in data["graphs"])
    parts = " ".join(f"{c}:{hist[c]}" for c in sorted(hist))
    return f"{len(data['graphs'])} graphs; codim histogram {parts}"


def _read_json(path: str):
    return json.loads(Path(path).read_text())


def cmd_enumerate(args, out):
    graphs = enumerate_graphs(args.n, args.r, args.d, args.ceiling)
    data = {"n": args.n, "r": args.r, "d": args.d,
            "graphs": [dict(io.graph_to_dict(g), codimension=codimension(g)) for g in graphs]}
    if args.format == "summary":
        out.write(summary_line(data) + "\n")
    elif args.format == "dot":
        for i, g in enumerate(graphs):
            out.write(io.to_dot(g, f"G{i}"))
    else:
        out.write(io.dumps(data) + "\n")


def cmd_poset(args, out):
    graphs = enumerate_graphs(args.n, args.r, args.d, args.ceiling)
    data = poset.one_step_order(graphs, args.r)
    result = {"n": args.n, "r": args.r, "d": args.d}
    levels = None
    if args.check_filterable or args.hasse:
        levels = poset.level_function(graphs, args.r, args.levels)
    index = {k: i for i, k in enumerate(data.keys)}
    hasse = poset.hasse_edges(data)
    result["graphs"] = [dict(io.graph_to_dict(g), index=i, length=poset.length(g),
                             **({"level": levels[k]} if levels else {}))
                        for i, (g, k) in enumerate(zip(data.graphs, data.keys))]
    result["hasse"] = [[index[a], index[b]] for a, b in hasse]
    if args.check_filterable:
        result["filterable"] = True
    if args.hasse:
        Path(args.hasse).write_text(io.hasse_dot(dict(zip(data.keys, data.graphs)), hasse, levels))
    out.write(io.dumps(result) + "\n")


def cmd_poincare(args, out):
    if args.cache_dir:
        os.environ[cohomology.CACHE_ENV] = args.cache_dir
    if args.no_cache or args.jobs > 1:
        poly = cohomology.poincare_moduli_parallel(args.r, args.d, args.n, args.jobs)
    else:
        poly, _ = cohomology.cached_poincare_moduli(args.r, args.d, args.n)
    result = io.poly_to_dict(poly)
    if args.per_graph:
        result["graphs"] = [dict(io.graph_to_dict(g), codimension=c, fixed_locus=p.to_list())
                            for g, c, p in cohomology.per_graph_contributions(args.r, args.d, args.n)]
    out.write(io.dumps(result) + "\n")


def cmd_limit(args, out):
    if args.config:
        cfg = io.config_from_dict(_read_json(args.config))
        g = flow.limit_graph(cfg, args.r)
        extra = {}
    else:
        pm = io.param_map_from_dict(_read_json(args.poly))
        g, data = flow.limit_from_polynomials(pm)
        extra = {"in_hyperplane": data.in_hyperplane,
                 "zeros": [{"factor": z.factor, "degree": z.degree, "multiplicity": z.multiplicity,
                            "point": [str(x) for x in z.point] if z.point else None,
                            "image": [str(x) for x in z.image] if z.image else None,
                            "image_mod_factor": list(z.image_mod_factor),
                            "markings": list(z.markings)} for z in data.zeros]}
    if args.r is not None:
        report = validate(g, args.r)
        if not report.ok:
            raise ValueError(f"limit graph is invalid for r={args.r}: {report.violations}")
    if args.format == "dot":
        out.write(io.to_dot(g))
    else:
        out.write(io.dumps(dict(graph=io.graph_to_dict(g), dot=io.to_dot(g), **extra)) + "\n")


def cmd_boundary(args, out):
    cfg = io.boundary_from_dict(_read_json(args.config))
    gamma = io.graph_from_dict(_read_json(args.gamma)) if args.gamma else None
    result, path = flow.boundary_flow(cfg, args.r, gamma)
    out.write(io.dumps({"graph": io.graph_to_dict(result),
                        "witness": io.moves_to_dict([s for s, _ in path])["moves"]}) + "\n")


def cmd_gathmann(args, out):
    terms = gathmann.enumerate_boundary_terms(args.alpha, args.j, args.d, args.r, ordered=args.ordered)
    record = gathmann.recursion_expression(args.alpha, args.j, args.d, args.r)
    record["corrections"] = [dict(t.to_dict(args.alpha), codimension=gathmann.gathmann_codim(args.alpha) + 1)
                             for t in terms]
    record["ordered"] = args.ordered
    out.write(io.dumps(record) + "\n")


def cmd_oracle(args, out):
    poly = oracles.betti_from_counts(args.m)
    counts = oracles.per_prime_counts(args.m)
    out.write(io.dumps({"m": args.m, "poly": poly.to_list(),
                        "counts": {str(p): c for p, c in counts.items()}}) + "\n")


def cmd_selftest(args, out):
    cfg = selftest.SelftestConfig(args.max_n, args.max_d, args.max_r, args.seed, args.samples)
    report = selftest.run(cfg)
    if args.format == "json":
        out.write(io.dumps(report.to_dict()) + "\n")
    else:
        out.write(report.table() + "\n")
    return 0 if report.ok else 1


COMMANDS = {
    "enumerate": cmd_enumerate,
    "poset": cmd_poset,
    "poincare": cmd_poincare,
    "limit": cmd_limit,
    "boundary": cmd_boundary,
    "gathmann": cmd_gathmann,
    "oracle": cmd_oracle,
    "selftest": cmd_selftest,
}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        RunConfig(args.command, getattr(args, "n", None), getattr(args, "r", None),
                  getattr(args, "d", None), getattr(args, "format", "json"),
                  args.cache_dir, args.ceiling, args.jobs, args.seed)
        status = COMMANDS[args.command](args, out)
    except DOMAIN_ERRORS as exc:
        out.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        out.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1
    return status or 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
