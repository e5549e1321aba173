"""Poincare polynomials of Mbar_{0,m}, of the fixed loci, and of Mbar_{0,n}(P^r, d).

The total space is assembled from the fixed loci, each shifted by twice the
codimension of its plus cell.  A fixed locus is a finite quotient of a product of
factors (points, Mbar_{0,m}, Mbar_{0,m}(H, d_w), copies of H = P^{r-1}), so its
Betti numbers are the graded dimension of the invariants, computed by averaging
graded traces over the automorphism group of the graph.
"""

from __future__ import annotations

import hashlib
import json
import os
from functools import lru_cache
from importlib import resources
from pathlib import Path

from bbatlas.enumeration import (
    CURVE,
    MAP,
    POINT,
    TARGET,
    Factor,
    enumerate_graphs,
    fixed_locus_spec,
    flag_permutation,
)
from bbatlas.graph import DecoratedGraph, automorphism_elements, codimension
from bbatlas.poly import PoincarePoly

CACHE_ENV = "BBATLAS_CACHE"
DEFAULT_CACHE = ".bbatlas-cache"


class CacheCorruption(RuntimeError):
    pass


class EquivariantDataRequired(RuntimeError):
    """A graph whose invariant count needs a nontrivial permutation trace we cannot compute."""

    def __init__(self, message, graphs=()):
        super().__init__(message)
        self.graphs = list(graphs)


# -- Mbar_{0,m} -------------------------------------------------------------------

@lru_cache(maxsize=1)
def _mbar_table() -> dict[int, PoincarePoly]:
    raw = json.loads(resources.files("bbatlas").joinpath("data/mbar_table.json").read_text())
    table = {}
    for m, entry in raw["table"].items():
        poly = PoincarePoly(tuple(entry["poly"]))
        if poly.coeffs[0] != 1 or not poly.is_palindromic(2 * (int(m) - 3)):
            raise CacheCorruption(f"stored polynomial for m={m} is not a valid Betti vector")
        table[int(m)] = poly
    return table


@lru_cache(maxsize=None)
def poincare_mbar(m: int) -> PoincarePoly:
    if m < 3:
        return PoincarePoly.one()
    table = _mbar_table()
    if m in table:
        return table[m]
    from bbatlas.oracles import betti_from_counts

    return betti_from_counts(m)


# -- traces --------------------------------------------------------------------------

def _is_trivial(action: dict | None) -> bool:
    return not action or all(k == v for k, v in action.items())


def orbit_trace(factor: Factor, k: int, return_action: dict | None, r: int) -> PoincarePoly:
    """Graded trace of a k-cycle of copies of ``factor`` whose k-th power acts by ``return_action``."""
    trivial = _is_trivial(return_action)
    if factor.kind == POINT:
        return PoincarePoly.one()
    if factor.kind == TARGET:
        return PoincarePoly.projective(r - 1).at_power(k)
    if factor.kind == CURVE:
        # algebraic automorphisms act trivially on H^*(Mbar_{0,4}) = H^*(P^1)
        if trivial or factor.m <= 4:
            return poincare_mbar(factor.m).at_power(k)
        raise EquivariantDataRequired(
            f"nontrivial marking permutation on Mbar_0,{factor.m}")
    if factor.kind == MAP:
        if factor.d_w == 0:
            # Mbar_{0,m}(H, 0) = Mbar_{0,m} x H; the permutation only touches the first factor
            if trivial or factor.m <= 4:
                return (poincare_mbar(factor.m) * PoincarePoly.projective(r - 1)).at_power(k)
        elif trivial:
            return poincare_moduli(r - 1, factor.d_w, factor.m).at_power(k)
        raise EquivariantDataRequired(
            f"nontrivial marking permutation on Mbar_0,{factor.m}(P^{r - 1}, {factor.d_w})")
    raise ValueError(f"unknown factor kind {factor.kind!r}")


def _cycles(perm: dict[int, int]) -> list[list[int]]:
    seen, out = set(), []
    for start in sorted(perm):
        if start in seen:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = perm[x]
        out.append(cyc)
    return out


def _power(perm: dict[int, int], k: int) -> dict[int, int]:
    out = dict(perm)
    for _ in range(k - 1):
        out = {i: perm[j] for i, j in out.items()}
    return out


def element_trace(g: DecoratedGraph, spec, perm: dict[int, int]) -> PoincarePoly:
    by_vertex = {f.vertex: f for f in spec.factors}
    total = PoincarePoly.one()
    for cyc in _cycles(perm):
        v, k = cyc[0], len(cyc)
        back = flag_permutation(g, _power(perm, k), v)
        total = total * orbit_trace(by_vertex[v], k, back, spec.r)
    return total


def poincare_fixed_locus(g: DecoratedGraph, r: int) -> PoincarePoly:
    """Graded dimension of the Aut-invariant part of the cohomology of the factor product.

    The cyclic groups Z/d_e of the edge covers act trivially on cohomology, so only the
    graph automorphisms enter the average.
    """
    spec = fixed_locus_spec(g, r)
    elements = automorphism_elements(g)
    total = PoincarePoly.zero()
    for perm in elements:
        try:
            total = total + element_trace(g, spec, perm)
        except EquivariantDataRequired as exc:
            raise EquivariantDataRequired(
                f"{exc} (graph {g!r}, automorphism {perm})", graphs=[g]) from None
    return total.exact_div(len(elements))


# -- the whole moduli space ----------------------------------------------------------

def moduli_dimension(r: int, d: int, n: int) -> int:
    return (r + 1) * d + r + n - 3


@lru_cache(maxsize=None)
def poincare_moduli(r: int, d: int, n: int) -> PoincarePoly:
    """Sum over fixed-locus graphs of t^{2 codim} times the fixed-locus polynomial."""
    if r < 1 or d < 0 or n < 0 or (d == 0 and n < 3):
        raise ValueError(f"Mbar_0,{n}(P^{r}, {d}) is empty or unstable")
    if d == 0:
        return poincare_mbar(n) * PoincarePoly.projective(r)
    total = PoincarePoly.zero()
    bad = []
    for g in enumerate_graphs(n, r, d):
        try:
            total = total + poincare_fixed_locus(g, r).shift(codimension(g))
        except EquivariantDataRequired as exc:
            bad.extend(exc.graphs or [g])
    if bad:
        raise EquivariantDataRequired(
            f"(r={r}, d={d}, n={n}): {len(bad)} graph(s) need equivariant trace data: "
            + "; ".join(repr(g) for g in bad), graphs=bad)
    return total


def per_graph_contributions(r: int, d: int, n: int) -> list[tuple[DecoratedGraph, int, PoincarePoly]]:
    return [(g, codimension(g), poincare_fixed_locus(g, r)) for g in enumerate_graphs(n, r, d)]


def betti(r: int, d: int, n: int, m: int) -> int:
    return poincare_moduli(r, d, n).betti(m)


def is_supported(r: int, d: int, n: int) -> bool:
    try:
        poincare_moduli(r, d, n)
    except EquivariantDataRequired:
        return False
    return True


# -- on-disk cache ----------------------------------------------------------------------

def code_version() -> str:
    h = hashlib.sha256()
    pkg = Path(__file__).resolve().parent
    for name in ("graph.py", "enumeration.py", "cohomology.py", "poly.py", "data/mbar_table.json"):
        h.update((pkg / name).read_bytes())
    return h.hexdigest()[:16]


def cache_dir(path: str | os.PathLike | None = None) -> Path:
    return Path(path or os.environ.get(CACHE_ENV, DEFAULT_CACHE))


def cached_poincare_moduli(r: int, d: int, n: int, directory=None) -> tuple[PoincarePoly, int]:
    """Poincare polynomial and graph count, read from or written to the cache directory."""
    root = cache_dir(directory)
    path = root / f"Q_r{r}_d{d}_n{n}.json"
    version = code_version()
    if path.exists():
        try:
            data = json.loads(path.read_text())
            if data.get("version") == version:
                return PoincarePoly(tuple(data["poly"])), data["graphs"]
        except (ValueError, KeyError) as exc:
            raise CacheCorruption(f"unreadable cache file {path}: {exc}") from exc
    poly = poincare_moduli(r, d, n)
    count = len(enumerate_graphs(n, r, d)) if d > 0 else 0
    root.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps({"r": r, "d": d, "n": n, "poly": poly.to_list(),
                               "graphs": count, "version": version}))
    tmp.replace(path)
    return poly, count


def _contribution(args):
    g, r = args
    return poincare_fixed_locus(g, r).shift(codimension(g))


def poincare_moduli_parallel(r: int, d: int, n: int, jobs: int = 1) -> PoincarePoly:
    """Same as poincare_moduli, spreading graphs over ``jobs`` worker processes.

    Contributions are summed in enumeration order, so the result does not depend on jobs.
    """
    if jobs <= 1 or d == 0:
        return poincare_moduli(r, d, n)
    from concurrent.futures import ProcessPoolExecutor

    graphs = enumerate_graphs(n, r, d)
    total, bad = PoincarePoly.zero(), []
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_contribution, (g, r)) for g in graphs]
        for g, fut in zip(graphs, futures):
            try:
                total = total + fut.result()
            except EquivariantDataRequired as exc:
                bad.extend(exc.graphs or [g])
    if bad:
        raise EquivariantDataRequired(
            f"(r={r}, d={d}, n={n}): {len(bad)} graph(s) need equivariant trace data", graphs=bad)
    return total
