"""Exhaustive enumeration of fixed-locus graphs and the factor description of each locus."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from bbatlas.graph import (
    H,
    P,
    STABLE,
    DecoratedGraph,
    Edge,
    Vertex,
    automorphism_elements,
    canonical_form,
    classify,
)

DEFAULT_CEILING = 10**6


class ResourceLimitError(RuntimeError):
    pass


def _subsets(items):
    for k in range(len(items) + 1):
        yield from itertools.combinations(items, k)


@lru_cache(maxsize=None)
def _subtrees(label: str, markings: tuple, degree: int, flat_target: bool) -> frozenset:
    """Rooted codes (tag, legs, children) hanging below a vertex of ``label``.

    ``degree`` counts everything strictly below the parent edge: the vertex's own
    H-degree, the degrees of its child edges, and their subtrees.
    """
    out = set()
    if label == H:
        own = [0] if flat_target else range(degree + 1)
    else:
        own = [None]
    other = P if label == H else H
    for a in own:
        budget = degree - (a or 0)
        tag = P if label == P else f"H{a}"
        for legs in _subsets(markings):
            rest = tuple(m for m in markings if m not in legs)
            for kids in _children(other, rest, budget, flat_target):
                out.add((tag, legs, kids))
    return frozenset(out)


@lru_cache(maxsize=None)
def _children(label: str, markings: tuple, budget: int, flat_target: bool) -> frozenset:
    """Unordered families of (edge degree, child code) using exactly the given data."""
    if budget == 0:
        return frozenset({()}) if not markings else frozenset()
    out = set()
    if markings:
        first, others = markings[0], markings[1:]
        blocks = [(first,) + extra for extra in _subsets(others)]
    else:
        blocks = [()]
    for block in blocks:
        rest = tuple(m for m in markings if m not in block)
        for e in range(1, budget + 1):
            for below in range(0, budget - e + 1):
                for code in _subtrees(label, block, below, flat_target):
                    for tail in _children(label, rest, budget - e - below, flat_target):
                        out.add(tuple(sorted(((e, code),) + tail)))
    return frozenset(out)


def graph_from_code(n: int, d: int, code: tuple) -> DecoratedGraph:
    verts, edges, legs = [], [], []
    counter = itertools.count()

    def build(c):
        vid = next(counter)
        tag, ls, kids = c
        if tag == P:
            verts.append(Vertex(vid, P))
        else:
            verts.append(Vertex(vid, H, int(tag[1:])))
        legs.extend((m, vid) for m in ls)
        for deg, kid in kids:
            w = build(kid)
            if tag == P:
                edges.append(Edge(vid, w, deg))
            else:
                edges.append(Edge(w, vid, deg))
        return vid

    build(code)
    return DecoratedGraph(n, d, tuple(verts), tuple(edges), tuple(legs))


def enumerate_graphs(n: int, r: int, d: int, ceiling: int = DEFAULT_CEILING) -> list[DecoratedGraph]:
    """One canonical representative per isomorphism class of fixed-locus graphs.

    Graphs are returned in canonically relabeled form, sorted by (codimension, key).
    """
    if d < 1 or r < 1 or n < 0:
        raise ValueError(f"need d >= 1, r >= 1, n >= 0 (got n={n}, r={r}, d={d})")
    return list(_enumerate_cached(n, r, d, ceiling))


@lru_cache(maxsize=64)
def _enumerate_cached(n, r, d, ceiling):
    from bbatlas.graph import codimension

    markings = tuple(range(1, n + 1))
    seen: dict[bytes, DecoratedGraph] = {}
    for label in (P, H):
        for code in _subtrees(label, markings, d, r == 1):
            if label == P and not code[2]:
                continue
            key, canon = canonical_form(graph_from_code(n, d, code))
            if key not in seen:
                seen[key] = canon
                if len(seen) > ceiling:
                    raise ResourceLimitError(
                        f"more than {ceiling} graphs for (n={n}, r={r}, d={d})")
    ordered = sorted(seen.items(), key=lambda kv: (codimension(kv[1]), kv[0]))
    return tuple(g for _, g in ordered)


def maximal_graph(n: int, d: int) -> DecoratedGraph:
    """The open-cell graph: one P-vertex with all legs and d simple edges."""
    if d < 1:
        raise ValueError("d must be positive")
    verts = (Vertex(0, P),) + tuple(Vertex(i, H, 0) for i in range(1, d + 1))
    edges = tuple(Edge(0, i, 1) for i in range(1, d + 1))
    return DecoratedGraph(n, d, verts, edges, tuple((m, 0) for m in range(1, n + 1)))


# -- fixed locus factors ------------------------------------------------------------

POINT = "point"
CURVE = "curve"      # Mbar_{0,m}
MAP = "map"          # Mbar_{0,m}(H, d_w)
TARGET = "target"    # H itself


@dataclass(frozen=True)
class Factor:
    kind: str
    vertex: int
    m: int = 0
    d_w: int = 0

    @property
    def params(self):
        return (self.kind, self.m, self.d_w)


@dataclass(frozen=True)
class FixedLocusSpec:
    graph: DecoratedGraph
    r: int
    factors: tuple[Factor, ...]
    # per generator: (factor permutation, {fixed factor index: flag permutation})
    generator_actions: tuple

    def factor_of(self, vid: int) -> int:
        return next(i for i, f in enumerate(self.factors) if f.vertex == vid)


def vertex_factor(g: DecoratedGraph, vid: int, status: dict) -> Factor:
    v = g.vertex(vid)
    nv = g.valency(vid)
    if v.label == P:
        return Factor(CURVE, vid, nv) if nv >= 4 else Factor(POINT, vid, nv)
    if status[vid] == STABLE:
        return Factor(MAP, vid, nv, v.h_degree)
    return Factor(TARGET, vid, nv)


def flags(g: DecoratedGraph, vid: int) -> list[tuple[str, int]]:
    return sorted([("leg", m) for m in g.legs_at(vid)] +
                  [("edge", w) for w, _ in g.neighbors(vid)])


def flag_permutation(g: DecoratedGraph, perm: dict[int, int], vid: int) -> dict:
    """Action on the flags of a vertex fixed by ``perm``."""
    out = {}
    for kind, x in flags(g, vid):
        out[(kind, x)] = (kind, x) if kind == "leg" else (kind, perm[x])
    return out


def fixed_locus_spec(g: DecoratedGraph, r: int) -> FixedLocusSpec:
    status = classify(g).status
    factors = tuple(vertex_factor(g, v.id, status) for v in g.vertices)
    index = {f.vertex: i for i, f in enumerate(factors)}
    from bbatlas.graph import automorphisms

    actions = []
    for vperm, _ in automorphisms(g).generators:
        fperm = {index[a]: index[b] for a, b in vperm.items()}
        fixed = {index[v]: flag_permutation(g, vperm, v) for v, w in vperm.items() if v == w}
        actions.append((fperm, fixed))
    return FixedLocusSpec(g, r, factors, tuple(actions))


def all_automorphisms(g: DecoratedGraph) -> list[dict[int, int]]:
    return automorphism_elements(g)
