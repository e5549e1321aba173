"""Decorated graphs indexing the torus-fixed loci of M_{0,n}(P^r, d).

The torus acts by t.[z0:z1:...:zr] = [z0:t z1:...:t zr], fixing the point p and the
hyperplane H = {z0 = 0}.  A fixed stable map is recorded as a bipartite tree: P-vertices
are connected pieces of f^{-1}(p), H-vertices are connected pieces of f^{-1}(H) (with
the degree of the map on them), and edges are the multiple covers of lines joining p
to a point of H.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterator

P = "P"
H = "H"

STABLE = "stable"
UNSTABLE_LEG = "unstable_leg"
UNSTABLE_NODE = "unstable_node"
VERY_UNSTABLE = "very_unstable"


class InconsistencyError(RuntimeError):
    """A quantity that is nonnegative on valid graphs came out negative."""


@dataclass(frozen=True, order=True)
class Vertex:
    id: int
    label: str
    h_degree: int | None = None


@dataclass(frozen=True, order=True)
class Edge:
    p: int
    h: int
    degree: int

    def other(self, v: int) -> int:
        return self.h if v == self.p else self.p


@dataclass(frozen=True)
class DecoratedGraph:
    """Immutable decorated tree.  ``legs`` holds sorted (marking, vertex id) pairs."""

    n: int
    d: int
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    legs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))
        object.__setattr__(self, "legs", tuple(sorted(tuple(x) for x in self.legs)))

    @classmethod
    def make(cls, n, d, p=(), h=None, edges=(), legs=None):
        """Shorthand: ``p`` lists P-vertex ids, ``h`` maps H-vertex id -> degree,
        ``edges`` are (p, h, degree) triples and ``legs`` maps marking -> vertex."""
        verts = [Vertex(i, P) for i in p] + [Vertex(i, H, a) for i, a in (h or {}).items()]
        return cls(n, d, tuple(verts), tuple(Edge(*e) for e in edges),
                   tuple((m, v) for m, v in (legs or {}).items()))

    # -- lookups ---------------------------------------------------------------
    def vertex(self, vid: int) -> Vertex:
        return self._vmap[vid]

    @property
    def _vmap(self) -> dict[int, Vertex]:
        cached = self.__dict__.get("_vmap_cache")
        if cached is None:
            cached = {v.id: v for v in self.vertices}
            object.__setattr__(self, "_vmap_cache", cached)
        return cached

    def vertex_ids(self, label: str | None = None) -> list[int]:
        return [v.id for v in self.vertices if label is None or v.label == label]

    def incident(self, vid: int) -> list[Edge]:
        return [e for e in self.edges if e.p == vid or e.h == vid]

    def legs_at(self, vid: int) -> list[int]:
        return [m for m, v in self.legs if v == vid]

    def leg_map(self) -> dict[int, int]:
        return dict(self.legs)

    def valency(self, vid: int) -> int:
        """Total number of flags (half-edges and legs) at a vertex."""
        return len(self.incident(vid)) + len(self.legs_at(vid))

    def neighbors(self, vid: int) -> list[tuple[int, int]]:
        """(neighbor id, edge degree) pairs."""
        return [(e.other(vid), e.degree) for e in self.incident(vid)]

    def total_h_degree(self) -> int:
        return sum(v.h_degree or 0 for v in self.vertices if v.label == H)

    def next_id(self) -> int:
        return max((v.id for v in self.vertices), default=-1) + 1

    def replace(self, **kw) -> "DecoratedGraph":
        args = dict(n=self.n, d=self.d, vertices=self.vertices, edges=self.edges, legs=self.legs)
        args.update(kw)
        return DecoratedGraph(**args)

    def __repr__(self):
        vs = " ".join(f"{v.id}:{v.label}" + (f"{v.h_degree}" if v.label == H else "")
                      for v in self.vertices)
        es = " ".join(f"{e.p}-{e.h}({e.degree})" for e in self.edges)
        ls = " ".join(f"{m}@{v}" for m, v in self.legs)
        return f"<Graph n={self.n} d={self.d} [{vs}] [{es}] [{ls}]>"


# -- validation -----------------------------------------------------------------

@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate(g: DecoratedGraph, r: int) -> ValidationReport:
    """Check every structural constraint on a candidate graph; never raises."""
    rep = ValidationReport()
    bad = rep.violations.append
    ids = [v.id for v in g.vertices]
    vmap = {}
    for v in g.vertices:
        if v.id in vmap:
            bad(f"duplicate vertex id {v.id}")
        vmap[v.id] = v
        if v.label not in (P, H):
            bad(f"vertex {v.id} has unknown label {v.label!r}")
        elif v.label == P and v.h_degree is not None:
            bad(f"P-vertex {v.id} carries a degree")
        elif v.label == H:
            if v.h_degree is None or v.h_degree < 0:
                bad(f"H-vertex {v.id} needs a nonnegative degree")
            elif v.h_degree > 0 and r == 1:
                bad(f"h_degree > 0 with r = 1 (vertex {v.id})")
    if g.d < 1:
        bad("total degree must be positive")
    if r < 1:
        bad("r must be at least 1")
    if not g.vertices:
        bad("graph has no vertices")
        return rep

    pairs = set()
    for e in g.edges:
        if e.p not in vmap or e.h not in vmap:
            bad(f"edge {e.p}-{e.h} references a missing vertex")
            continue
        lp, lh = vmap[e.p].label, vmap[e.h].label
        if lp == lh:
            bad(f"edge joins {lp} to {lh} ({e.p}-{e.h})")
        elif lp != P:
            bad(f"edge {e.p}-{e.h} has its endpoints swapped")
        if e.degree < 1:
            bad(f"edge {e.p}-{e.h} has nonpositive degree")
        key = frozenset((e.p, e.h))
        if key in pairs:
            bad(f"duplicate edge between {e.p} and {e.h}")
        pairs.add(key)

    if len(g.edges) != len(ids) - 1:
        bad(f"|edges| = {len(g.edges)} but |vertices| - 1 = {len(ids) - 1}")
    if not _connected(ids, g.edges):
        bad("graph is not connected")

    total = sum(e.degree for e in g.edges) + sum(
        (v.h_degree or 0) for v in g.vertices if v.label == H)
    if total != g.d:
        bad(f"degrees sum to {total}, expected d = {g.d}")

    if len(ids) == 1:
        v = g.vertices[0]
        if v.label != H or v.h_degree != g.d:
            bad("a single-vertex graph must be an H-vertex carrying the whole degree")

    markings = [m for m, _ in g.legs]
    counts = Counter(markings)
    for m in range(1, g.n + 1):
        if counts[m] != 1:
            bad(f"marking {m} appears {counts[m]} times")
    for m, v in g.legs:
        if not 1 <= m <= g.n:
            bad(f"marking {m} out of range 1..{g.n}")
        if v not in vmap:
            bad(f"marking {m} on missing vertex {v}")
    return rep


def _connected(ids, edges) -> bool:
    if not ids:
        return True
    adj = defaultdict(set)
    for e in edges:
        adj[e.p].add(e.h)
        adj[e.h].add(e.p)
    seen, stack = {ids[0]}, [ids[0]]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen >= set(ids)


# -- stability taxonomy and codimension --------------------------------------------

@dataclass(frozen=True)
class VertexStatus:
    status: dict  # H-vertex id -> status string
    s: int
    u: int
    n2: int
    f: int


def h_status(g: DecoratedGraph, vid: int) -> str:
    v = g.vertex(vid)
    nw = g.valency(vid)
    if v.h_degree > 0 or nw >= 3 or len(g.vertices) == 1:
        return STABLE
    if nw == 1:
        return VERY_UNSTABLE
    return UNSTABLE_NODE if len(g.incident(vid)) == 2 else UNSTABLE_LEG


def classify(g: DecoratedGraph) -> VertexStatus:
    status = {vid: h_status(g, vid) for vid in g.vertex_ids(H)}
    c = Counter(status.values())
    f = sum(1 for e in g.edges if status[e.h] == STABLE) + c[UNSTABLE_NODE]
    return VertexStatus(status, c[STABLE], c[VERY_UNSTABLE], c[UNSTABLE_NODE], f)


def codimension(g: DecoratedGraph) -> int:
    """Codimension d + s - u of the plus cell flowing into the fixed locus of ``g``."""
    st = classify(g)
    c = g.d + st.s - st.u
    if c < 0:
        raise InconsistencyError(f"negative codimension {c} for {g!r}")
    return c


def weight_terms(g: DecoratedGraph) -> dict[str, int]:
    """Negative-weight counts of the three deformation terms at a generic fixed map."""
    st = classify(g)
    h0 = sum(g.vertex(w).h_degree + 1 for w, s in st.status.items() if s == STABLE)
    h0 += sum(e.degree for e in g.edges) - st.f
    return {"H0": h0, "Ext1": st.f, "Ext0": st.u}


def negative_weight_count(g: DecoratedGraph) -> int:
    t = weight_terms(g)
    return t["H0"] + t["Ext1"] - t["Ext0"]


# -- canonical forms ---------------------------------------------------------------

def _adjacency(g: DecoratedGraph) -> dict[int, list[tuple[int, int]]]:
    adj = {v.id: [] for v in g.vertices}
    for e in g.edges:
        adj[e.p].append((e.h, e.degree))
        adj[e.h].append((e.p, e.degree))
    return adj


def tree_centers(g: DecoratedGraph) -> list[int]:
    adj = _adjacency(g)
    deg = {v: len(a) for v, a in adj.items()}
    remaining = set(adj)
    leaves = [v for v in remaining if deg[v] <= 1]
    while len(remaining) > 2:
        nxt = []
        for u in leaves:
            remaining.discard(u)
            for w, _ in adj[u]:
                if w in remaining:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        leaves = nxt
    return sorted(remaining)


def _root(g: DecoratedGraph) -> int:
    centers = tree_centers(g)
    if len(centers) == 2:
        # adjacent centers carry different labels, so the P one is intrinsic
        return next(c for c in centers if g.vertex(c).label == P)
    return centers[0]


def _tag(v: Vertex) -> str:
    return P if v.label == P else f"H{v.h_degree}"


def rooted_codes(g: DecoratedGraph, root: int) -> dict[int, tuple]:
    """AHU-style codes of every subtree when the tree hangs from ``root``."""
    adj = _adjacency(g)
    legs = defaultdict(list)
    for m, v in g.legs:
        legs[v].append(m)
    codes: dict[int, tuple] = {}

    def visit(u, parent):
        kids = []
        for w, deg in adj[u]:
            if w != parent:
                visit(w, u)
                kids.append((deg, codes[w]))
        codes[u] = (_tag(g.vertex(u)), tuple(sorted(legs[u])), tuple(sorted(kids)))

    visit(root, None)
    return codes


def canonical_key(g: DecoratedGraph) -> bytes:
    root = _root(g)
    return repr((g.n, g.d, rooted_codes(g, root)[root])).encode()


def canonical_form(g: DecoratedGraph) -> tuple[bytes, DecoratedGraph]:
    """Canonical key plus the graph relabeled with ids in canonical BFS order."""
    root = _root(g)
    codes = rooted_codes(g, root)
    adj = _adjacency(g)
    order, parent = [root], {root: None}
    i = 0
    while i < len(order):
        u = order[i]
        i += 1
        kids = sorted(((deg, codes[w], w) for w, deg in adj[u] if w != parent[u]),
                      key=lambda t: t[:2])
        for _, _, w in kids:
            parent[w] = u
            order.append(w)
    new = {old: k for k, old in enumerate(order)}
    verts = tuple(Vertex(new[v.id], v.label, v.h_degree) for v in g.vertices)
    edges = tuple(Edge(new[e.p], new[e.h], e.degree) for e in g.edges)
    legs = tuple((m, new[v]) for m, v in g.legs)
    key = repr((g.n, g.d, codes[root])).encode()
    return key, DecoratedGraph(g.n, g.d, verts, edges, legs)


def is_isomorphic(a: DecoratedGraph, b: DecoratedGraph) -> bool:
    return canonical_key(a) == canonical_key(b)


# -- automorphisms -----------------------------------------------------------------

@dataclass(frozen=True)
class AutDescription:
    generators: tuple  # (vertex permutation dict, edge permutation dict) pairs
    order: int
    a_gamma_order: int


def automorphism_elements(g: DecoratedGraph) -> list[dict[int, int]]:
    """Every automorphism of the decorated tree, as a vertex permutation.

    Legs pin their vertices, labels and degrees are preserved, and the root (a center)
    is fixed by every automorphism, so the group is generated by swapping identical
    child subtrees.
    """
    root = _root(g)
    codes = rooted_codes(g, root)
    adj = _adjacency(g)
    children = {}

    def collect(u, parent):
        children[u] = [(w, deg) for w, deg in adj[u] if w != parent]
        for w, _ in children[u]:
            collect(w, u)

    collect(root, None)

    def isos(u, u2) -> Iterator[dict[int, int]]:
        groups = defaultdict(list)
        for w, deg in children[u]:
            groups[(deg, codes[w])].append(w)
        groups2 = defaultdict(list)
        for w, deg in children[u2]:
            groups2[(deg, codes[w])].append(w)
        per_group = []
        for key, ws in sorted(groups.items()):
            targets = groups2[key]
            options = []
            for perm in itertools.permutations(targets):
                options.append(list(zip(ws, perm)))
            per_group.append(options)
        for choice in itertools.product(*per_group):
            pairs = [pr for grp in choice for pr in grp]
            yield from _combine(pairs, {u: u2})

    def _combine(pairs, acc):
        if not pairs:
            yield dict(acc)
            return
        (w, w2), rest = pairs[0], pairs[1:]
        for sub in isos(w, w2):
            merged = dict(acc)
            merged.update(sub)
            yield from _combine(rest, merged)

    return list(isos(root, root))


def aut_order(g: DecoratedGraph) -> int:
    root = _root(g)
    codes = rooted_codes(g, root)
    order = 1
    for code in codes.values():
        for mult in Counter(code[2]).values():
            order *= math.factorial(mult)
    return order


def edge_permutation(g: DecoratedGraph, vperm: dict[int, int]) -> dict[int, int]:
    index = {frozenset((e.p, e.h)): i for i, e in enumerate(g.edges)}
    return {i: index[frozenset((vperm[e.p], vperm[e.h]))] for i, e in enumerate(g.edges)}


def apply_automorphism(g: DecoratedGraph, vperm: dict[int, int]) -> DecoratedGraph:
    verts = tuple(Vertex(vperm[v.id], v.label, v.h_degree) for v in g.vertices)
    edges = tuple(Edge(vperm[e.p], vperm[e.h], e.degree) for e in g.edges)
    legs = tuple((m, vperm[v]) for m, v in g.legs)
    return DecoratedGraph(g.n, g.d, verts, edges, legs)


def automorphisms(g: DecoratedGraph) -> AutDescription:
    elements = automorphism_elements(g)
    ids = sorted(v.id for v in g.vertices)

    def as_tuple(perm):
        return tuple(perm[i] for i in ids)

    def compose(a, b):
        return {i: a[b[i]] for i in ids}

    identity = {i: i for i in ids}
    group = {as_tuple(identity): identity}
    gens = []
    for el in elements:
        if as_tuple(el) in group:
            continue
        gens.append(el)
        frontier = list(group.values())
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = compose(s, x)
                    if as_tuple(y) not in group:
                        group[as_tuple(y)] = y
                        nxt.append(y)
            frontier = nxt
    order = len(elements)
    prod_de = math.prod(e.degree for e in g.edges)
    return AutDescription(
        generators=tuple((el, edge_permutation(g, el)) for el in gens),
        order=order,
        a_gamma_order=order * prod_de,
    )
