"""Split, join and transfer surgeries, the length function and the induced order on graphs.

``g' <= g`` when g' is obtained from g by a sequence of moves; the plus cell of g'
then lies in the closure of the plus cell of g.  The maximal graph (the open cell)
sits on top.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from bbatlas.graph import (
    H,
    P,
    DecoratedGraph,
    Edge,
    Vertex,
    canonical_form,
    canonical_key,
    validate,
)

SPLIT = "split"
JOIN = "join"
TRANSFER = "transfer"


class InvalidMove(ValueError):
    pass


class UnreachableGraphError(RuntimeError):
    def __init__(self, message, graphs=()):
        super().__init__(message)
        self.graphs = list(graphs)


@dataclass(frozen=True)
class MoveStep:
    """One surgery, addressed by vertex ids of the graph it is applied to.

    split:    edge=(p, h), degrees=(m_1..m_k), d0, blocks=one tuple of flags per new
              P-vertex, a flag being ("leg", marking) or ("edge", H-vertex id).
              k = 0 (no degrees) absorbs the whole edge into the H-vertex.
    join:     edge=(p, h1), other=(p, h2).
    transfer: edge=(p, h), leg=marking.
    """

    kind: str
    edge: tuple[int, int]
    degrees: tuple[int, ...] = ()
    d0: int = 0
    blocks: tuple = ()
    other: tuple[int, int] | None = None
    leg: int | None = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "edge": list(self.edge)}
        if self.kind == SPLIT:
            out.update(degrees=list(self.degrees), d0=self.d0,
                       blocks=[[list(f) for f in b] for b in self.blocks])
        elif self.kind == JOIN:
            out["other"] = list(self.other)
        else:
            out["leg"] = self.leg
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "MoveStep":
        kind = data["kind"]
        if kind == SPLIT:
            return cls(SPLIT, tuple(data["edge"]), tuple(data["degrees"]), data["d0"],
                       tuple(tuple(tuple(f) for f in b) for b in data["blocks"]))
        if kind == JOIN:
            return cls(JOIN, tuple(data["edge"]), other=tuple(data["other"]))
        if kind == TRANSFER:
            return cls(TRANSFER, tuple(data["edge"]), leg=data["leg"])
        raise InvalidMove(f"unknown move kind {kind!r}")


def length(g: DecoratedGraph) -> int:
    """sum_H (h_degree - 1) + #P-vertices + #legs on H-vertices."""
    total = 0
    for v in g.vertices:
        total += (v.h_degree - 1) if v.label == H else 1
    total += sum(1 for _, vid in g.legs if g.vertex(vid).label == H)
    return total


def potential(g: DecoratedGraph) -> tuple[int, int]:
    """Length refined by the total H-degree; strictly increases along every move."""
    return length(g), g.total_h_degree()


def _find_edge(g: DecoratedGraph, pair) -> Edge:
    p, h = pair
    for e in g.edges:
        if e.p == p and e.h == h:
            return e
    raise InvalidMove(f"no edge {p}-{h}")


def apply_move(g: DecoratedGraph, step: MoveStep, r: int) -> DecoratedGraph:
    if step.kind == TRANSFER:
        out = _transfer(g, step)
    elif step.kind == JOIN:
        out = _join(g, step)
    elif step.kind == SPLIT:
        out = _split(g, step)
    else:
        raise InvalidMove(f"unknown move kind {step.kind!r}")
    report = validate(out, r)
    if not report.ok:
        raise InvalidMove(f"{step.kind} produces an invalid graph: {report.violations}")
    return out


def _transfer(g, step):
    e = _find_edge(g, step.edge)
    legs = g.leg_map()
    if legs.get(step.leg) != e.p:
        raise InvalidMove(f"marking {step.leg} is not on P-vertex {e.p}")
    legs[step.leg] = e.h
    return g.replace(legs=tuple(legs.items()))


def _join(g, step):
    e1 = _find_edge(g, step.edge)
    e2 = _find_edge(g, step.other)
    if e1 == e2 or e1.p != e2.p:
        raise InvalidMove("join needs two distinct edges at one P-vertex")
    keep, gone = e1.h, e2.h
    a = g.vertex(keep).h_degree + g.vertex(gone).h_degree
    verts = [Vertex(keep, H, a) if v.id == keep else v for v in g.vertices if v.id != gone]
    edges = []
    for e in g.edges:
        if e in (e1, e2):
            continue
        edges.append(Edge(e.p, keep, e.degree) if e.h == gone else e)
    edges.append(Edge(e1.p, keep, e1.degree + e2.degree))
    legs = [(m, keep if v == gone else v) for m, v in g.legs]
    return g.replace(vertices=tuple(verts), edges=tuple(edges), legs=tuple(legs))


def _flags_at_p(g, e):
    out = [("leg", m) for m in g.legs_at(e.p)]
    out += [("edge", x.h) for x in g.incident(e.p) if x != e]
    return sorted(out)


def _split(g, step):
    e = _find_edge(g, step.edge)
    k = len(step.degrees)
    if any(m < 1 for m in step.degrees) or step.d0 < 0:
        raise InvalidMove("split degrees must be positive and d0 nonnegative")
    if e.degree != step.d0 + sum(step.degrees):
        raise InvalidMove(f"split must conserve degree: {e.degree} != {step.d0} + {sum(step.degrees)}")
    if k == 1 and step.d0 == 0:
        raise InvalidMove("a split into one edge must move positive degree into H")
    if len(step.blocks) != k:
        raise InvalidMove("one flag block is needed per new edge")
    flags = _flags_at_p(g, e)
    given = sorted(f for b in step.blocks for f in b)
    if given != flags:
        raise InvalidMove(f"blocks {step.blocks} do not partition the flags {flags}")

    nxt = g.next_id()
    new_ids = list(range(nxt, nxt + k))
    verts = [v for v in g.vertices if v.id != e.p]
    verts = [Vertex(v.id, H, v.h_degree + step.d0) if v.id == e.h else v for v in verts]
    verts += [Vertex(i, P) for i in new_ids]
    owner = {f: new_ids[i] for i, b in enumerate(step.blocks) for f in b}
    edges = [x for x in g.edges if x.p != e.p]
    for x in g.incident(e.p):
        if x != e:
            edges.append(Edge(owner[("edge", x.h)], x.h, x.degree))
    edges += [Edge(i, e.h, m) for i, m in zip(new_ids, step.degrees)]
    legs = [(m, owner[("leg", m)] if v == e.p else v) for m, v in g.legs]
    return g.replace(vertices=tuple(verts), edges=tuple(edges), legs=tuple(legs))


# -- move enumeration --------------------------------------------------------------------

def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def candidate_moves(g: DecoratedGraph, r: int):
    flat = r == 1
    for e in g.edges:
        for m in g.legs_at(e.p):
            yield MoveStep(TRANSFER, (e.p, e.h), leg=m)
    for p in g.vertex_ids(P):
        inc = g.incident(p)
        for e1, e2 in itertools.combinations(inc, 2):
            yield MoveStep(JOIN, (e1.p, e1.h), other=(e2.p, e2.h))
    for e in g.edges:
        flags = _flags_at_p(g, e)
        for k in range(0, e.degree + 1):
            for d0 in range(0, e.degree - k + 1):
                if (k == 1 and d0 == 0) or (flat and d0 > 0):
                    continue
                if k == 0 and flags:
                    continue
                for degs in _compositions(e.degree - d0, k):
                    if k == 0:
                        yield MoveStep(SPLIT, (e.p, e.h), (), d0, ())
                        continue
                    for assign in itertools.product(range(k), repeat=len(flags)):
                        blocks = tuple(tuple(f for f, a in zip(flags, assign) if a == i)
                                       for i in range(k))
                        yield MoveStep(SPLIT, (e.p, e.h), degs, d0, blocks)


def successors(g: DecoratedGraph, r: int) -> list[tuple[MoveStep, DecoratedGraph]]:
    """All one-move results, one (move, canonical graph) per isomorphism class."""
    return list(_successors_cached(canonical_form(g)[1], r))


@lru_cache(maxsize=200_000)
def _successors_cached(g: DecoratedGraph, r: int):
    seen = {}
    for step in candidate_moves(g, r):
        out = apply_move(g, step, r)
        key, canon = canonical_form(out)
        if key not in seen:
            seen[key] = (step, canon)
    return tuple(seen[k] for k in sorted(seen))


def length_increment(step: MoveStep) -> int:
    if step.kind == SPLIT:
        return len(step.degrees) - 1 + step.d0
    return 1


# -- order ---------------------------------------------------------------------------

def witness(g_low: DecoratedGraph, g_high: DecoratedGraph, r: int) -> list | None:
    """Shortest list of (move, graph) steps turning g_high into g_low, or None."""
    target = canonical_key(g_low)
    bound = potential(g_low)
    start = canonical_form(g_high)[1]
    if canonical_key(start) == target:
        return []
    if potential(start) >= bound:
        return None
    parent = {canonical_key(start): None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        ck = canonical_key(cur)
        for step, nxt in successors(cur, r):
            nk = canonical_key(nxt)
            if nk in parent or potential(nxt) > bound:
                continue
            parent[nk] = (ck, step, cur, nxt)
            if nk == target:
                path, k = [], nk
                while parent[k] is not None:
                    pk, st, before, after = parent[k]
                    path.append((st, before, after))
                    k = pk
                return [(st, after) for st, _, after in reversed(path)]
            if potential(nxt) < bound:
                queue.append(nxt)
    return None


def leq(g_low: DecoratedGraph, g_high: DecoratedGraph, r: int, with_witness: bool = False):
    """True iff g_low is reachable from g_high by moves (g_low <= g_high)."""
    path = witness(g_low, g_high, r)
    ok = path is not None
    return (ok, path) if with_witness else ok


@dataclass
class OrderData:
    graphs: list[DecoratedGraph]
    keys: list[bytes]
    covers: dict[bytes, list[bytes]] = field(default_factory=dict)  # one-step successors

    def down_sets(self) -> dict[bytes, frozenset]:
        memo: dict[bytes, frozenset] = {}
        for k in sorted(self.keys, key=lambda k: self._pot[k], reverse=True):
            acc = {k}
            for s in self.covers[k]:
                acc |= memo[s]
            memo[k] = frozenset(acc)
        return memo

    def __post_init__(self):
        self._pot = {k: potential(g) for k, g in zip(self.keys, self.graphs)}


def one_step_order(graphs: list[DecoratedGraph], r: int) -> OrderData:
    keys = [canonical_key(g) for g in graphs]
    data = OrderData(list(graphs), keys)
    for g, k in zip(graphs, keys):
        data.covers[k] = [canonical_key(s) for _, s in successors(g, r)]
    return data


def level_function(graphs: list[DecoratedGraph], r: int, mode: str = "longest") -> dict[bytes, int]:
    """Level of each graph below the maximal one, keyed by canonical key.

    ``longest`` (default) uses the longest descending move path, which makes
    i < j imply L(i) > L(j); ``shortest`` uses the shortest one.
    """
    from bbatlas.enumeration import maximal_graph

    if not graphs:
        return {}
    n, d = graphs[0].n, graphs[0].d
    top = canonical_key(maximal_graph(n, d))
    data = one_step_order(graphs, r)
    if top not in data.covers:
        raise UnreachableGraphError("maximal graph missing from the input")
    order = sorted(data.keys, key=lambda k: data._pot[k])
    level = {top: 0}
    if mode == "shortest":
        queue = deque([top])
        while queue:
            k = queue.popleft()
            for s in data.covers[k]:
                if s not in level:
                    level[s] = level[k] + 1
                    queue.append(s)
    elif mode == "longest":
        for k in order:  # moves strictly raise the potential, so this is topological
            if k not in level:
                continue
            for s in data.covers[k]:
                if s in data.covers:
                    level[s] = max(level.get(s, -1), level[k] + 1)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    missing = [g for g, k in zip(data.graphs, data.keys) if k not in level]
    if missing:
        raise UnreachableGraphError(
            f"{len(missing)} graph(s) not reachable from the maximal graph", missing)
    return level


def hasse_edges(data: OrderData) -> list[tuple[bytes, bytes]]:
    """Covering pairs (high, low) of the transitive closure of the one-step relation."""
    down = data.down_sets()
    out = []
    for k in data.keys:
        below = down[k] - {k}
        for s in below:
            if not any(s in down[t] and t != s for t in below):
                out.append((k, s))
    return sorted(out)
