"""Boundary correction terms of Gathmann's recursion for tangency spaces.

Raising the tangency order at marking j by one replaces [M_alpha] with
(alpha_j psi_j + ev_j^* H)[M_alpha] minus a sum over splittings: a component C0 of
degree d0 inside H carrying marking j, and k groups attached to it at nodes of
contact orders m_1..m_k.  Chow classes stay symbolic here; only the indexing data
and its bookkeeping are computed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class TangencyVector:
    alpha: tuple[int, ...]
    r: int
    d: int

    def __post_init__(self):
        if any(a < 0 for a in self.alpha):
            raise ValueError("tangency orders must be nonnegative")
        if sum(self.alpha) > self.d:
            raise ValueError(f"|alpha| = {sum(self.alpha)} exceeds d = {self.d}")

    @property
    def size(self) -> int:
        return sum(self.alpha)

    @property
    def nonzero(self) -> int:
        return sum(1 for a in self.alpha if a)


@dataclass(frozen=True)
class TermGroup:
    degree: int
    node_mult: int
    indices: tuple[int, ...]  # 1-based marking indices carried by the group


@dataclass(frozen=True)
class BoundaryTerm:
    d0: int
    internal: tuple[int, ...]  # marking indices on C0
    groups: tuple[TermGroup, ...]
    coefficient: Fraction

    @property
    def k(self) -> int:
        return len(self.groups)

    def to_dict(self, alpha) -> dict:
        return {
            "d0": self.d0,
            "alpha0": [alpha[i - 1] for i in self.internal],
            "internal": list(self.internal),
            "groups": [{"degree": g.degree, "node_mult": g.node_mult, "indices": list(g.indices),
                        "alpha": [alpha[i - 1] for i in g.indices]} for g in self.groups],
            "coefficient": str(self.coefficient),
        }


def gathmann_codim(alpha) -> int:
    return sum(alpha)


def _moduli_dim(r: int, d: int, n: int) -> int:
    return (r + 1) * d + r + n - 3


def term_dimension(term: BoundaryTerm, alpha, r: int) -> int:
    """Dimension of the fibered product indexing a term, assembled factor by factor.

    C0 lives in Mbar_{0, n0 + k}(H, d0) with H = P^{r-1}; group i in the tangency
    space of P^r with its own orders plus the node order m_i; the k nodes impose
    k(r - 1) matching conditions in H.
    """
    k = term.k
    total = _moduli_dim(r - 1, term.d0, len(term.internal) + k)
    for g in term.groups:
        tangency = sum(alpha[i - 1] for i in g.indices) + g.node_mult
        total += _moduli_dim(r, g.degree, len(g.indices) + 1) - tangency
    return total - k * (r - 1)


def expected_dimension(alpha, d: int, r: int) -> int:
    return _moduli_dim(r, d, len(alpha)) - sum(alpha) - 1


def _coefficient(groups) -> Fraction:
    return Fraction(math.prod(g.node_mult for g in groups), math.factorial(len(groups)))


def enumerate_boundary_terms(alpha, j: int, d: int, r: int, ordered: bool = False) -> list[BoundaryTerm]:
    """All correction terms for raising alpha_j, up to reordering of groups unless ``ordered``.

    Constraints: k >= 1; marking j on C0; d0 + sum d_i = d; d0 + sum m_i = |alpha on C0|;
    each group fits its contacts (|alpha^i| + m_i <= d_i); C0 is stable when contracted;
    C0 of positive degree needs r >= 2.
    """
    alpha = tuple(alpha)
    TangencyVector(alpha, r, d)
    n = len(alpha)
    if not 1 <= j <= n:
        raise ValueError(f"j = {j} is not a marking index")
    others = [i for i in range(1, n + 1) if i != j]
    out = {}
    for k in range(1, d + 1):
        for owner in itertools.product(range(k + 1), repeat=len(others)):
            internal = (j,) + tuple(i for i, o in zip(others, owner) if o == 0)
            internal = tuple(sorted(internal))
            blocks = [tuple(i for i, o in zip(others, owner) if o == b) for b in range(1, k + 1)]
            a0 = sum(alpha[i - 1] for i in internal)
            for degs in itertools.product(range(1, d + 1), repeat=k):
                d0 = d - sum(degs)
                if d0 < 0 or (d0 > 0 and r < 2):
                    continue
                if d0 == 0 and len(internal) + k < 3:
                    continue
                for mults in itertools.product(range(1, a0 + 1), repeat=k):
                    if d0 + sum(mults) != a0:
                        continue
                    groups = tuple(TermGroup(dg, m, b) for dg, m, b in zip(degs, mults, blocks))
                    if any(sum(alpha[i - 1] for i in g.indices) + g.node_mult > g.degree for g in groups):
                        continue
                    key_groups = groups if ordered else tuple(sorted(groups, key=_gkey))
                    term = BoundaryTerm(d0, internal, key_groups, _coefficient(groups))
                    out[(d0, internal, key_groups)] = term
    return [out[k] for k in sorted(out, key=repr)]


def _gkey(g: TermGroup):
    return (g.degree, g.node_mult, g.indices)


def check_term(term: BoundaryTerm, alpha, j: int, d: int, r: int) -> list[str]:
    """Violated invariants of a term (empty when all hold)."""
    bad = []
    placed = sorted(list(term.internal) + [i for g in term.groups for i in g.indices])
    if placed != list(range(1, len(alpha) + 1)):
        bad.append("indices do not partition alpha")
    if j not in term.internal:
        bad.append("marking j is not on C0")
    if term.d0 + sum(g.degree for g in term.groups) != d:
        bad.append("degrees do not add up to d")
    if term.d0 + sum(g.node_mult for g in term.groups) != sum(alpha[i - 1] for i in term.internal):
        bad.append("contact orders on C0 are not conserved")
    if term.coefficient != _coefficient(term.groups) or term.coefficient <= 0:
        bad.append("coefficient is not prod m_i / k!")
    if math.factorial(term.k) % term.coefficient.denominator:
        bad.append("coefficient denominator does not divide k!")
    if term_dimension(term, alpha, r) != expected_dimension(alpha, d, r):
        bad.append("term dimension differs from dim Mbar - |alpha| - 1")
    return bad


def recursion_expression(alpha, j: int, d: int, r: int) -> dict:
    """Symbolic record of one recursion step; classes are named, never evaluated."""
    alpha = tuple(alpha)
    terms = enumerate_boundary_terms(alpha, j, d, r)
    codim = gathmann_codim(alpha) + 1
    return {
        "alpha": list(alpha),
        "j": j,
        "d": d,
        "r": r,
        "lead": {"psi_coefficient": -alpha[j - 1], "ev_H_coefficient": -1,
                 "on": "[M_alpha]", "codimension": codim},
        "corrections": [dict(t.to_dict(alpha), codimension=codim) for t in terms],
    }


def ordered_count(term: BoundaryTerm) -> int:
    """Number of group orderings that an unordered term stands for."""
    counts = {}
    for g in term.groups:
        counts[g] = counts.get(g, 0) + 1
    out = math.factorial(term.k)
    for c in counts.values():
        out //= math.factorial(c)
    return out
