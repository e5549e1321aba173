"""Runs every structural invariant over a small parameter box and tabulates the outcome."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

import sympy

from bbatlas import cohomology, flow, gathmann, io, oracles, poset
from bbatlas.enumeration import enumerate_graphs, maximal_graph
from bbatlas.graph import canonical_key, codimension, negative_weight_count
from bbatlas.poly import PoincarePoly


@dataclass
class SelftestConfig:
    max_n: int = 1
    max_d: int = 2
    max_r: int = 2
    seed: int = 0
    random_samples: int = 200


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0


@dataclass
class Report:
    results: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def table(self) -> str:
        width = max(len(r.name) for r in self.results)
        rows = [f"{'PASS' if r.ok else 'FAIL'}  {r.name:<{width}}  {r.seconds:6.2f}s  {r.detail}"
                for r in self.results]
        return "\n".join(rows)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": [
            {"name": r.name, "ok": r.ok, "detail": r.detail} for r in self.results]}


def _box(cfg: SelftestConfig):
    return itertools.product(range(cfg.max_n + 1), range(1, cfg.max_d + 1), range(1, cfg.max_r + 1))


def check_codimension(cfg):
    bad = [(n, d, r, g) for n, d, r in _box(cfg) for g in enumerate_graphs(n, r, d)
           if negative_weight_count(g) != codimension(g)]
    return not bad, f"{len(bad)} disagreements"


def check_open_cell(cfg):
    bad = []
    for n, d, r in _box(cfg):
        zero = [g for g in enumerate_graphs(n, r, d) if codimension(g) == 0]
        if len(zero) != 1 or canonical_key(zero[0]) != canonical_key(maximal_graph(n, d)):
            bad.append((n, d, r))
    return not bad, f"failing boxes {bad}" if bad else "unique"


def _all_moves(cfg):
    for n, d, r in _box(cfg):
        for g in enumerate_graphs(n, r, d):
            for step, s in poset.successors(g, r):
                yield n, d, r, g, step, s


def check_increments(cfg):
    bad = [(g, s) for *_, g, step, s in _all_moves(cfg)
           if poset.length(s) - poset.length(g) != poset.length_increment(step)]
    return not bad, f"{len(bad)} moves off the increment formula"


def check_strict_length(cfg):
    bad = [(g, step) for *_, g, step, s in _all_moves(cfg) if poset.length(s) <= poset.length(g)]
    detail = f"{len(bad)} moves keep the length"
    if bad:
        detail += f", e.g. {bad[0][1].kind} on {bad[0][0]!r}"
    return not bad, detail


def check_closure(cfg):
    bad = 0
    for n, d, r in _box(cfg):
        keys = {canonical_key(g) for g in enumerate_graphs(n, r, d)}
        for g in enumerate_graphs(n, r, d):
            bad += sum(canonical_key(s) not in keys for _, s in poset.successors(g, r))
    return not bad, f"{bad} successors outside the enumeration"


def check_levels(cfg):
    worst = 0
    for n, d, r in _box(cfg):
        graphs = enumerate_graphs(n, r, d)
        try:
            levels = poset.level_function(graphs, r)
        except poset.UnreachableGraphError as exc:
            return False, str(exc)
        worst = max(worst, max(levels.values()))
        for g in graphs:
            for _, s in poset.successors(g, r):
                if levels[canonical_key(s)] <= levels[canonical_key(g)]:
                    return False, f"level does not drop along a move from {g!r}"
    return True, f"max level {worst}"


def check_antisymmetry(cfg):
    for n, d, r in _box(cfg):
        graphs = enumerate_graphs(n, r, d)
        data = poset.one_step_order(graphs, r)
        down = data.down_sets()
        for a, b in itertools.combinations(data.keys, 2):
            if a in down[b] and b in down[a]:
                return False, "two distinct graphs below each other"
    return True, "no 2-cycles in the reachability relation"


def check_palindromic(cfg):
    unsupported, bad = [], []
    for n, d, r in _box(cfg):
        try:
            p = cohomology.poincare_moduli(r, d, n)
        except cohomology.EquivariantDataRequired:
            unsupported.append((r, d, n))
            continue
        dim = cohomology.moduli_dimension(r, d, n)
        if p.coeffs[0] != 1 or not p.is_palindromic(2 * dim):
            bad.append((r, d, n, p.to_list()))
    return not bad, f"bad {bad}; unsupported {unsupported}"


def check_grassmannian(cfg):
    bad = []
    for r in range(1, cfg.max_r + 1):
        if cohomology.poincare_moduli(r, 1, 0) != gaussian_binomial(r + 1, 2):
            bad.append(r)
    return not bad, f"failing r {bad}" if bad else "matches Gaussian binomials"


def gaussian_binomial(n: int, k: int) -> PoincarePoly:
    """Poincare polynomial of the Grassmannian of k-planes in C^n."""
    q = sympy.Symbol("q")
    num, den = sympy.Integer(1), sympy.Integer(1)
    for i in range(k):
        num *= 1 - q ** (n - i)
        den *= 1 - q ** (i + 1)
    poly = sympy.Poly(sympy.cancel(num / den), q)
    return PoincarePoly(tuple(int(c) for c in poly.all_coeffs()[::-1]))


def check_fixed_locus_sum(cfg):
    for n, d, r in _box(cfg):
        try:
            total = cohomology.poincare_moduli(r, d, n).at_one()
        except cohomology.EquivariantDataRequired:
            continue
        parts = sum(cohomology.poincare_fixed_locus(g, r).at_one() for g in enumerate_graphs(n, r, d))
        if parts != total:
            return False, f"(r={r}, d={d}, n={n}): {parts} != {total}"
    return True, "Euler characteristics agree"


def check_oracles(cfg):
    for m in (4, 5, 6):
        if oracles.betti_from_counts(m, extra=1) != cohomology.poincare_mbar(m):
            return False, f"m={m} disagrees"
    return True, "m = 4, 5, 6"


def check_flow_membership(cfg):
    rng = random.Random(cfg.seed)
    count = 0
    for n, d, r in _box(cfg):
        keys = {canonical_key(g) for g in enumerate_graphs(n, r, d)}
        for _ in range(cfg.random_samples):
            g = flow.limit_graph(flow.random_config(rng, n, r, d), r)
            count += 1
            if canonical_key(g) not in keys:
                return False, f"limit {g!r} is not enumerated"
    return True, f"{count} random configurations"


def check_flow_routes(cfg):
    rng = random.Random(cfg.seed + 1)
    count = 0
    for n, d, r in _box(cfg):
        for _ in range(max(1, cfg.random_samples // 20)):
            pm = flow.random_param_map(rng, n, r, d)
            a, _ = flow.limit_from_polynomials(pm)
            b = flow.limit_graph(flow.config_from_polynomials(pm), r)
            count += 1
            if canonical_key(a) != canonical_key(b):
                return False, f"routes disagree on {pm}"
    return True, f"{count} random maps"


def check_boundary(cfg):
    count = 0
    for d in range(1, cfg.max_d + 1):
        for r in range(1, cfg.max_r + 1):
            for parts in range(1, d + 1):
                for alpha in itertools.product(range(1, d + 1), repeat=parts):
                    if sum(alpha) != d:
                        continue
                    for c in flow.boundary_configs(alpha, r):
                        try:
                            flow.boundary_flow(c, r)
                        except flow.WitnessNotFound as exc:
                            return False, str(exc)
                        count += 1
    return True, f"{count} configurations"


def check_gathmann(cfg):
    count = 0
    for d in range(1, cfg.max_d + 1):
        for n in range(1, cfg.max_n + 2):
            for alpha in itertools.product(range(d + 1), repeat=n):
                if sum(alpha) > d:
                    continue
                for r in range(1, cfg.max_r + 1):
                    for j in range(1, n + 1):
                        for t in gathmann.enumerate_boundary_terms(alpha, j, d, r):
                            count += 1
                            bad = gathmann.check_term(t, alpha, j, d, r)
                            if bad:
                                return False, f"{alpha}, j={j}: {bad}"
    return True, f"{count} terms"


def check_roundtrip(cfg):
    for n, d, r in _box(cfg):
        for g in enumerate_graphs(n, r, d):
            back = io.graph_from_dict(io.dumps(io.graph_to_dict(g)))
            if canonical_key(back) != canonical_key(g):
                return False, f"graph {g!r} does not round-trip"
    return True, "graphs round-trip"


CHECKS = [
    ("codimension equals negative weights", check_codimension),
    ("unique open cell", check_open_cell),
    ("move length increments", check_increments),
    ("moves strictly raise length", check_strict_length),
    ("successors stay enumerated", check_closure),
    ("finite decreasing levels", check_levels),
    ("order antisymmetry", check_antisymmetry),
    ("palindromic Poincare polynomials", check_palindromic),
    ("degree-1 Grassmannian law", check_grassmannian),
    ("fixed-locus Euler sum", check_fixed_locus_sum),
    ("point-count oracle concordance", check_oracles),
    ("flow limits are enumerated", check_flow_membership),
    ("polynomial flow routes agree", check_flow_routes),
    ("boundary witnesses exist", check_boundary),
    ("Gathmann term invariants", check_gathmann),
    ("graph JSON round-trip", check_roundtrip),
]


def run(cfg: SelftestConfig) -> Report:
    report = Report()
    for name, fn in CHECKS:
        start = time.perf_counter()
        try:
            ok, detail = fn(cfg)
        except Exception as exc:  # a crash is a failed row, not an aborted run
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        report.results.append(CheckResult(name, ok, detail, time.perf_counter() - start))
    return report
