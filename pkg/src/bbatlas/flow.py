"""Limits of the C*-flow t -> t.f as decorated graphs.

Three routes:

* ``limit_graph`` reads the limit off a combinatorial description of a map
  (components, their contacts with H, and the nodes between them);
* ``limit_from_polynomials`` computes it exactly from the coordinate forms of an
  irreducible map by factoring the first form;
* ``boundary_flow`` handles maps with a component inside H (boundary points of a
  tangency space) and certifies the result by a move sequence from the generic graph.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from bbatlas.graph import H, P, DecoratedGraph, Edge, Vertex, canonical_form, validate
from bbatlas.poset import witness

IN_H = "in_h"
TRANSVERSAL = "transversal"


class ConfigError(ValueError):
    pass


class WitnessNotFound(RuntimeError):
    pass


@dataclass(frozen=True)
class Contact:
    """A point of a transversal component mapping to H, with its contact order."""

    mult: int
    marking: int | None = None


@dataclass(frozen=True)
class Component:
    kind: str
    degree: int
    markings: tuple[int, ...] = ()      # markings away from H (or anywhere, for IN_H)
    contacts: tuple[Contact, ...] = ()  # only for TRANSVERSAL


@dataclass(frozen=True)
class Node:
    """Two glued points, each (component index, contact index or None).

    A contact index means the node lies on H at that contact; for an IN_H component
    the index is always None.  A node between two transversal components with no
    contact indices maps away from H.
    """

    a: tuple[int, int | None]
    b: tuple[int, int | None]


@dataclass(frozen=True)
class TransversalConfig:
    n: int
    d: int
    components: tuple[Component, ...]
    nodes: tuple[Node, ...] = ()

    def check(self, r: int | None = None) -> None:
        comps = self.components
        if not comps:
            raise ConfigError("configuration has no components")
        if sum(c.degree for c in comps) != self.d:
            raise ConfigError(f"component degrees sum to {sum(c.degree for c in comps)}, not d = {self.d}")
        seen = []
        for i, c in enumerate(comps):
            if c.degree < 0:
                raise ConfigError(f"component {i} has negative degree")
            if c.kind == IN_H:
                if c.contacts:
                    raise ConfigError(f"component {i} lies in H and cannot have contacts")
                if r == 1 and c.degree > 0:
                    raise ConfigError(f"component {i}: H is a point when r = 1")
            elif c.kind == TRANSVERSAL:
                if sum(x.mult for x in c.contacts) != c.degree:
                    raise ConfigError(f"contacts of component {i} do not add up to its degree")
                if any(x.mult < 1 for x in c.contacts):
                    raise ConfigError(f"component {i} has a contact of order < 1")
                seen += [x.marking for x in c.contacts if x.marking is not None]
            else:
                raise ConfigError(f"component {i} has unknown kind {c.kind!r}")
            seen += list(c.markings)
        if sorted(seen) != list(range(1, self.n + 1)):
            raise ConfigError(f"markings {sorted(seen)} are not 1..{self.n}, each once")

        used = set()
        special = [len(c.markings) + sum(x.marking is not None for x in c.contacts) for c in comps]
        for node in self.nodes:
            sides = (node.a, node.b)
            if node.a[0] == node.b[0]:
                raise ConfigError("a node must join two different components")
            on_h = []
            for ci, xi in sides:
                if not 0 <= ci < len(comps):
                    raise ConfigError(f"node references missing component {ci}")
                c = comps[ci]
                special[ci] += 1
                if c.kind == IN_H:
                    if xi is not None:
                        raise ConfigError("nodes on an H-component carry no contact index")
                    on_h.append(True)
                else:
                    if xi is None:
                        on_h.append(False)
                        continue
                    if not 0 <= xi < len(c.contacts) or c.contacts[xi].marking is not None:
                        raise ConfigError(f"node uses an invalid or marked contact {ci}:{xi}")
                    if (ci, xi) in used:
                        raise ConfigError(f"contact {ci}:{xi} used by two nodes")
                    used.add((ci, xi))
                    on_h.append(True)
            if on_h[0] != on_h[1]:
                raise ConfigError(f"node {node} maps to H on one side only")
        if len(self.nodes) != len(comps) - 1 or not _tree(len(comps), self.nodes):
            raise ConfigError("components and nodes must form a tree")
        for i, c in enumerate(comps):
            if c.degree == 0 and special[i] < 3:
                raise ConfigError(f"contracted component {i} has only {special[i]} special points")


def _tree(count, nodes) -> bool:
    parent = list(range(count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for node in nodes:
        a, b = find(node.a[0]), find(node.b[0])
        if a == b:
            return False
        parent[a] = b
    return len({find(i) for i in range(count)}) == 1


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


def limit_graph(cfg: TransversalConfig, r: int | None = None) -> DecoratedGraph:
    """Dual graph of lim_{t -> 0} t.f for the map described by ``cfg``.

    Each transversal component flows to its backbone over p (a P-vertex carrying its
    off-H markings) with one ramified edge per contact; components in H stay put.
    Nodes away from H glue backbones, nodes on H glue the H-endpoints.
    """
    cfg.check(r)
    uf = _UnionFind()
    h_degree = {}
    legs = {}
    edges = []
    kind = {}
    for i, c in enumerate(cfg.components):
        if c.kind == IN_H:
            key = ("h", i, None)
            uf.add(key)
            kind[key] = H
            h_degree[key] = c.degree
            legs.update({m: key for m in c.markings})
            continue
        core = ("p", i, None)
        uf.add(core)
        kind[core] = P
        legs.update({m: core for m in c.markings})
        for j, x in enumerate(c.contacts):
            end = ("h", i, j)
            uf.add(end)
            kind[end] = H
            h_degree[end] = 0
            edges.append((core, end, x.mult))
            if x.marking is not None:
                legs[x.marking] = end
    for node in cfg.nodes:
        ends = []
        for ci, xi in (node.a, node.b):
            c = cfg.components[ci]
            if c.kind == IN_H:
                ends.append(("h", ci, None))
            elif xi is None:
                ends.append(("p", ci, None))
            else:
                ends.append(("h", ci, xi))
        uf.union(*ends)

    ids = {}
    for key in sorted(uf.parent, key=repr):
        root = uf.find(key)
        if root not in ids:
            ids[root] = len(ids)
    degree_sum = {}
    for key, a in h_degree.items():
        root = uf.find(key)
        degree_sum[root] = degree_sum.get(root, 0) + a
    verts = []
    for root, vid in ids.items():
        verts.append(Vertex(vid, H, degree_sum[root]) if kind[root] == H else Vertex(vid, P))
    gedges = [Edge(ids[uf.find(a)], ids[uf.find(b)], m) for a, b, m in edges]
    glegs = tuple((m, ids[uf.find(k)]) for m, k in legs.items())
    g = DecoratedGraph(cfg.n, cfg.d, tuple(verts), tuple(gedges), glegs)
    if r is not None:
        report = validate(g, r)
        if not report.ok:
            raise ConfigError(f"limit graph is invalid: {report.violations}")
    return canonical_form(g)[1]


# -- polynomial route ---------------------------------------------------------------------

Z, W = sympy.symbols("z w")


@dataclass(frozen=True)
class ParamMap:
    """A map [f^0 : ... : f^r] from P^1, given by binary forms in (z, w) of degree d."""

    forms: tuple
    marked: tuple[tuple[Fraction, Fraction], ...] = ()

    @property
    def r(self) -> int:
        return len(self.forms) - 1

    @property
    def d(self) -> int:
        return max(sympy.Poly(f, Z, W).total_degree() for f in self.forms if f != 0)

    @property
    def n(self) -> int:
        return len(self.marked)

    def polys(self):
        return [sympy.Poly(f, Z, W) for f in self.forms]


@dataclass
class ZeroRecord:
    """A zero (or Galois orbit of zeros) of f^0 and the H-points it maps to."""

    factor: str            # irreducible factor of f^0, as a string
    degree: int            # number of geometric zeros it accounts for
    multiplicity: int      # contact order of each of them
    point: tuple | None    # (z, w) if rational
    image: tuple | None    # [0 : f^1 : ... : f^r] at the zero, if rational
    image_mod_factor: tuple = ()  # f^1..f^r reduced modulo the factor otherwise
    markings: tuple[int, ...] = ()


@dataclass
class LimitMapData:
    zeros: list[ZeroRecord] = field(default_factory=list)
    in_hyperplane: bool = False


def _check_param_map(pm: ParamMap):
    polys = pm.polys()
    degs = {p.total_degree() for p in polys if not p.is_zero}
    if len(degs) != 1 or any(not p.is_zero and not p.is_homogeneous for p in polys):
        raise ConfigError("forms must be homogeneous of one common degree")
    d = degs.pop()
    if d < 1:
        raise ConfigError("the map must have positive degree")
    common = polys[0]
    for p in polys[1:]:
        common = sympy.gcd(common, p)
    if common.total_degree() > 0:
        raise ConfigError(f"forms share the common factor {common.as_expr()}")
    pts = [_normalize_point(pt) for pt in pm.marked]
    if len(set(pts)) != len(pts):
        raise ConfigError("marked points must be distinct")
    return polys, d, pts


def _normalize_point(pt):
    a, b = (sympy.Rational(x) for x in pt)
    if b != 0:
        return (a / b, sympy.Integer(1))
    if a == 0:
        raise ConfigError("(0, 0) is not a point of P^1")
    return (sympy.Integer(1), sympy.Integer(0))


def _eval(poly, pt):
    return poly.as_expr().subs({Z: pt[0], W: pt[1]})


def _projective(vals):
    vals = [sympy.nsimplify(v) for v in vals]
    lead = next((v for v in vals if v != 0), None)
    if lead is None:
        return None
    return tuple(v / lead for v in vals)


def limit_from_polynomials(pm: ParamMap) -> tuple[DecoratedGraph, LimitMapData]:
    """Star graph of the limit: one P-vertex, one edge of degree n_i per zero of f^0."""
    polys, d, pts = _check_param_map(pm)
    n = len(pts)
    f0 = polys[0]
    if f0.is_zero:
        if pm.r == 1:
            raise ConfigError("with r = 1 a map into H is constant")
        g = DecoratedGraph(n, d, (Vertex(0, H, d),), (), tuple((m, 0) for m in range(1, n + 1)))
        return g, LimitMapData(in_hyperplane=True)

    data = LimitMapData()
    verts, edges, legs = [Vertex(0, P)], [], {}
    placed = set()
    _, factors = sympy.factor_list(f0.as_expr(), Z, W)
    for fac, mult in sorted(factors, key=lambda fm: (sympy.Poly(fm[0], Z, W).total_degree(), str(fm[0]))):
        mult = int(mult)
        fp = sympy.Poly(fac, Z, W)
        e = fp.total_degree()
        if e == 0:
            continue
        rec = ZeroRecord(str(fac), e, mult, None, None)
        if e == 1:
            a, b = fp.coeff_monomial(Z), fp.coeff_monomial(W)
            rec.point = _normalize_point((-b, a))
            rec.image = _projective([0] + [_eval(p, rec.point) for p in polys[1:]])
            rec.markings = tuple(m for m, pt in enumerate(pts, 1) if pt == rec.point)
        else:
            rec.image_mod_factor = tuple(str(sympy.rem(p.as_expr(), fac, Z)) for p in polys[1:])
        data.zeros.append(rec)
        for _ in range(e):
            hid = len(verts)
            verts.append(Vertex(hid, H, 0))
            edges.append(Edge(0, hid, mult))
            for m in rec.markings:
                legs[m] = hid
                placed.add(m)
    for m in range(1, n + 1):
        legs.setdefault(m, 0)
    g = DecoratedGraph(n, d, tuple(verts), tuple(edges), tuple(legs.items()))
    return canonical_form(g)[1], data


def _vanishing_order(poly, pt) -> int:
    """Order of vanishing of a binary form at a point of P^1, by repeated division."""
    a, b = pt
    lin = sympy.Poly(b * Z - a * W, Z, W)
    order, cur = 0, poly
    while not cur.is_zero:
        q, rem = sympy.div(cur, lin)
        if not rem.is_zero:
            break
        order, cur = order + 1, q
    return order


def config_from_polynomials(pm: ParamMap) -> TransversalConfig:
    """Second route: contacts from the roots of f^0 and vanishing orders at marked points.

    Only valid when every zero of f^0 is rational.
    """
    polys, d, pts = _check_param_map(pm)
    f0 = polys[0]
    if f0.is_zero:
        raise ConfigError("map lies in H")
    dehom = sympy.Poly(f0.as_expr().subs(W, 1), Z)
    roots = sympy.roots(dehom, filter="Q")
    points = [(sympy.Rational(x), sympy.Integer(1)) for x in roots]
    if dehom.degree() < d:
        points.append((sympy.Integer(1), sympy.Integer(0)))
    contacts = []
    total = 0
    markings = set(range(1, len(pts) + 1))
    for pt in points:
        order = _vanishing_order(f0, pt)
        total += order
        hit = [m for m, q in enumerate(pts, 1) if q == pt]
        contacts.append(Contact(order, hit[0] if hit else None))
        markings -= set(hit)
    if total != d:
        raise ConfigError("f^0 has zeros that are not rational")
    comp = Component(TRANSVERSAL, d, tuple(sorted(markings)), tuple(contacts))
    return TransversalConfig(len(pts), d, (comp,))


# -- boundary of tangency spaces ---------------------------------------------------------

@dataclass(frozen=True)
class Group:
    """A transversal component attached to the internal component at a node of order node_mult.

    Its tangency markings (alpha > 0) are contacts of the prescribed order; any degree
    left over becomes unmarked simple contacts.  Free markings sit away from H.
    """

    degree: int
    node_mult: int
    markings: tuple[int, ...] = ()


@dataclass(frozen=True)
class BoundaryConfig:
    """A map in a tangency space with a component C0 of degree d0 inside H.

    ``alpha[i-1]`` is the tangency order at marking i (0 for a free marking).
    ``internal`` lists the markings on C0.  With ``has_internal`` false the map is
    a single transversal component and ``groups`` must be empty.
    """

    alpha: tuple[int, ...]
    d0: int
    internal: tuple[int, ...]
    groups: tuple[Group, ...]
    has_internal: bool = True

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def d(self) -> int:
        if not self.has_internal:
            return sum(self.alpha)
        return self.d0 + sum(g.degree for g in self.groups)

    def check(self, r: int) -> None:
        if any(a < 0 for a in self.alpha):
            raise ConfigError("tangency orders must be nonnegative")
        if not self.has_internal:
            if self.groups or self.internal or self.d0:
                raise ConfigError("a configuration without internal component has no groups")
            return
        tangency_in = sum(self.alpha[i - 1] for i in self.internal)
        if self.d0 + sum(g.node_mult for g in self.groups) != tangency_in:
            raise ConfigError(
                f"conservation fails: d0 + sum m_i = {self.d0 + sum(g.node_mult for g in self.groups)}"
                f" but the tangency orders on C0 add up to {tangency_in}")
        placed = list(self.internal) + [m for g in self.groups for m in g.markings]
        if sorted(placed) != list(range(1, self.n + 1)):
            raise ConfigError("markings must be distributed over C0 and the groups exactly once")
        if self.d0 > 0 and r == 1:
            raise ConfigError("H is a point when r = 1, so d0 must vanish")
        if self.d0 == 0 and len(self.internal) + len(self.groups) < 3:
            raise ConfigError("contracted internal component is unstable")
        for g in self.groups:
            need = g.node_mult + sum(self.alpha[m - 1] for m in g.markings)
            if g.node_mult < 1 or g.degree < need:
                raise ConfigError(f"group {g} cannot carry its contacts")

    def transversal_config(self, r: int) -> TransversalConfig:
        self.check(r)
        if not self.has_internal:
            return generic_config(self.alpha)
        comps = [Component(IN_H, self.d0, tuple(sorted(self.internal)))]
        nodes = []
        for g in self.groups:
            tang = [m for m in g.markings if self.alpha[m - 1] > 0]
            free = tuple(m for m in g.markings if self.alpha[m - 1] == 0)
            contacts = [Contact(g.node_mult)] + [Contact(self.alpha[m - 1], m) for m in tang]
            spare = g.degree - sum(x.mult for x in contacts)
            contacts += [Contact(1)] * spare
            comps.append(Component(TRANSVERSAL, g.degree, free, tuple(contacts)))
            nodes.append(Node((0, None), (len(comps) - 1, 0)))
        return TransversalConfig(self.n, self.d, tuple(comps), tuple(nodes))


def generic_config(alpha: tuple[int, ...]) -> TransversalConfig:
    """A general map of the tangency space: one component meeting H exactly at the tangency markings."""
    d = sum(alpha)
    contacts = tuple(Contact(a, i) for i, a in enumerate(alpha, 1) if a > 0)
    free = tuple(i for i, a in enumerate(alpha, 1) if a == 0)
    return TransversalConfig(len(alpha), d, (Component(TRANSVERSAL, d, free, contacts),))


def generic_graph(alpha: tuple[int, ...], r: int) -> DecoratedGraph:
    return limit_graph(generic_config(alpha), r)


def boundary_flow(cfg: BoundaryConfig, r: int, gamma: DecoratedGraph | None = None):
    """Limit graph of a boundary map and a move sequence reaching it from ``gamma``."""
    if sum(cfg.alpha) != cfg.d:
        raise ConfigError(f"|alpha| = {sum(cfg.alpha)} must equal d = {cfg.d}")
    gamma = gamma if gamma is not None else generic_graph(cfg.alpha, r)
    result = limit_graph(cfg.transversal_config(r), r)
    path = witness(result, gamma, r)
    if path is None:
        raise WitnessNotFound(f"no move sequence from {gamma!r} to {result!r}")
    return result, path


def boundary_configs(alpha: tuple[int, ...], r: int, max_groups: int = 2):
    """Every boundary configuration over alpha with at most ``max_groups`` groups."""
    n, d = len(alpha), sum(alpha)
    marks = tuple(range(1, n + 1))
    out = []
    for k in range(0, max_groups + 1):
        for owner in itertools.product(range(k + 1), repeat=n):
            internal = tuple(m for m, o in zip(marks, owner) if o == 0)
            parts = [tuple(m for m, o in zip(marks, owner) if o == i) for i in range(1, k + 1)]
            for degs in itertools.product(range(1, d + 1), repeat=k):
                d0 = d - sum(degs)
                if d0 < 0:
                    continue
                for mults in itertools.product(range(1, d + 1), repeat=k):
                    groups = tuple(Group(dg, m, p) for dg, m, p in zip(degs, mults, parts))
                    if list(groups) != sorted(groups, key=_group_key):
                        continue
                    cfg = BoundaryConfig(tuple(alpha), d0, internal, groups)
                    try:
                        cfg.check(r)
                    except ConfigError:
                        continue
                    out.append(cfg)
    return out


def _group_key(g: Group):
    return (g.degree, g.node_mult, g.markings)


# -- random generators --------------------------------------------------------------------

def random_config(rng: random.Random, n: int, r: int, d: int, max_components: int = 4,
                  attempts: int = 10_000) -> TransversalConfig:
    """A random stable configuration of total degree d with n markings (rejection sampling)."""
    for _ in range(attempts):
        cfg = _random_attempt(rng, n, r, d, max_components)
        if cfg is None:
            continue
        try:
            cfg.check(r)
        except ConfigError:
            continue
        return cfg
    raise RuntimeError(f"no random configuration found for (n={n}, r={r}, d={d})")


def _random_attempt(rng, n, r, d, max_components):
    count = rng.randint(1, max_components)
    kinds = [IN_H if rng.random() < 0.3 else TRANSVERSAL for _ in range(count)]
    node_contacts = [[] for _ in range(count)]   # contact orders reserved for nodes
    nodes = []
    for i in range(1, count):
        j = rng.randrange(i)
        on_h = IN_H in (kinds[i], kinds[j]) or rng.random() < 0.5
        ends = []
        for c in (j, i):
            if kinds[c] == IN_H:
                ends.append((c, None))
            elif on_h:
                node_contacts[c].append(rng.randint(1, d))
                ends.append((c, len(node_contacts[c]) - 1))
            else:
                ends.append((c, None))
        nodes.append(Node(ends[0], ends[1]))
    in_h_deg = [rng.randint(0, d) if k == IN_H and r >= 2 else 0 for k in kinds]
    used = sum(sum(nc) for nc in node_contacts) + sum(in_h_deg)
    if used > d:
        return None
    free_contacts = [[] for _ in range(count)]
    trans = [i for i in range(count) if kinds[i] == TRANSVERSAL]
    spare = d - used
    if spare and not trans:
        return None
    while spare:
        c = rng.choice(trans)
        m = rng.randint(1, spare)
        free_contacts[c].append(m)
        spare -= m
    marks_on = [[] for _ in range(count)]
    marked_contact = [{} for _ in range(count)]
    for m in range(1, n + 1):
        c = rng.randrange(count)
        free_idx = [k for k in range(len(free_contacts[c])) if k not in marked_contact[c]]
        if kinds[c] == TRANSVERSAL and free_idx and rng.random() < 0.5:
            marked_contact[c][rng.choice(free_idx)] = m
        else:
            marks_on[c].append(m)
    comps = []
    for c in range(count):
        if kinds[c] == IN_H:
            comps.append(Component(IN_H, in_h_deg[c], tuple(marks_on[c])))
            continue
        contacts = [Contact(x) for x in node_contacts[c]]
        contacts += [Contact(x, marked_contact[c].get(k)) for k, x in enumerate(free_contacts[c])]
        deg = sum(x.mult for x in contacts)
        comps.append(Component(TRANSVERSAL, deg, tuple(marks_on[c]), tuple(contacts)))
    return TransversalConfig(n, d, tuple(comps), tuple(nodes))


def random_param_map(rng: random.Random, n: int, r: int, d: int, rational: bool = True,
                     attempts: int = 1000) -> ParamMap:
    """A random map whose first form splits into rational linear factors (when ``rational``).

    Some marked points are placed on zeros of f^0.
    """
    for _ in range(attempts):
        f0 = sympy.Integer(1)
        zeros = []
        deg = 0
        while deg < d:
            if not rational and d - deg >= 2 and rng.random() < 0.3:
                f0 *= Z**2 + rng.randint(1, 3) * W**2
                deg += 2
                continue
            pt = rng.choice([(1, 0)] + [(rng.randint(-3, 3), 1) for _ in range(3)])
            mult = rng.randint(1, d - deg)
            f0 *= (pt[1] * Z - pt[0] * W) ** mult
            zeros.append(pt)
            deg += mult
        others = [sum(rng.randint(-3, 3) * Z**i * W**(d - i) for i in range(d + 1)) for _ in range(r)]
        forms = (sympy.expand(f0),) + tuple(sympy.expand(f) for f in others)
        pts = []
        for _m in range(n):
            if zeros and rng.random() < 0.5:
                pt = rng.choice(zeros)
            else:
                pt = (rng.randint(-5, 5), rng.choice([1, 1, 2]))
            pts.append((Fraction(pt[0]), Fraction(pt[1])))
        pm = ParamMap(forms, tuple(pts))
        try:
            _check_param_map(pm)
        except ConfigError:
            continue
        return pm
    raise RuntimeError("no random map found")
