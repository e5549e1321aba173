"""Finite-field point counts of M_{0,m} and Mbar_{0,m}, interpolated to Betti numbers.

Both spaces have polynomial point counts whose coefficients are the even Betti
numbers, so counting over a handful of primes pins down the Poincare polynomial.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import sympy

from bbatlas.poly import PoincarePoly


class InterpolationMismatch(RuntimeError):
    pass


def count_open(q: int, m: int) -> int:
    """|M_{0,m}(F_q)| = (q-2)(q-3)...(q-m+2)."""
    if m < 3:
        raise ValueError("M_{0,m} needs m >= 3")
    return math.prod(q - i for i in range(2, m - 1))


def count_closed(q: int, m: int) -> int:
    """|Mbar_{0,m}(F_q)| as a sum over labeled stable trees of products of open counts.

    The vertex carrying marking 1 is the root; the other markings are grouped into
    blocks, singletons sitting on the root as legs and larger blocks hanging off as
    subtrees (whose attaching node acts as one extra marking).
    """
    if m < 3:
        raise ValueError("Mbar_{0,m} needs m >= 3")
    return _closed(q, m)


@lru_cache(maxsize=None)
def _closed(q: int, m: int) -> int:
    total = 0
    for blocks in _block_size_patterns(m - 1):
        valency = 1 + len(blocks)
        if valency < 3:
            continue
        weight = count_open(q, valency)
        for size in blocks:
            if size >= 2:
                weight *= _closed(q, size + 1)
        total += weight * _labelings(blocks)
    return total


def _block_size_patterns(k: int):
    """Integer partitions of k (block sizes of a set partition of a k-set)."""
    return [tuple(s for s, mult in sorted(p.items()) for _ in range(mult))
            for p in sympy.utilities.iterables.partitions(k)]


def _labelings(sizes: tuple) -> int:
    """Number of set partitions of a (sum sizes)-set with the given block sizes."""
    k = sum(sizes)
    count = math.factorial(k)
    for s in sizes:
        count //= math.factorial(s)
    for mult in _multiplicities(sizes):
        count //= math.factorial(mult)
    return count


def _multiplicities(sizes):
    out = {}
    for s in sizes:
        out[s] = out.get(s, 0) + 1
    return out.values()


# -- slow independent route ------------------------------------------------------

def projective_line(q: int) -> list[tuple[int, int]]:
    return [(x, 1) for x in range(q)] + [(1, 0)]


@lru_cache(maxsize=None)
def count_open_bruteforce(q: int, m: int) -> int:
    """Orbits of PGL_2(F_q) on injective m-tuples in P^1(F_q), by exhaustive listing.

    Each tuple is normalized by the cross-ratios of its later points against the first
    three, which determine the orbit.
    """
    pts = projective_line(q)

    def wedge(u, v):
        return (u[0] * v[1] - u[1] * v[0]) % q

    def normalize(x, y):
        if y % q:
            return (x * pow(y, -1, q) % q, 1)
        return (1, 0)

    orbits = set()
    for tup in itertools.permutations(pts, m):
        a, b, c = tup[:3]
        orbits.add(tuple(
            normalize(wedge(a, c) * wedge(b, x), wedge(a, x) * wedge(b, c)) for x in tup[3:]))
    return len(orbits)


def _compatible(a: frozenset, b: frozenset) -> bool:
    return a <= b or b <= a or not (a & b)


def count_closed_bruteforce(q: int, m: int) -> int:
    """Sum over sets of pairwise compatible splits (boundary strata) of vertex counts."""
    labels = range(1, m + 1)
    splits = [frozenset(s) for k in range(2, m - 1)
              for s in itertools.combinations(range(2, m + 1), k)]
    # each split is normalized to the side avoiding marking 1
    total = 0
    for size in range(len(splits) + 1):
        for family in itertools.combinations(splits, size):
            if all(_compatible(a, b) for a, b in itertools.combinations(family, 2)):
                weight = 1
                for val in _valencies(family, labels):
                    weight *= count_open_bruteforce(q, val)
                total += weight
    return total


def _valencies(family, labels) -> list[int]:
    whole = frozenset(labels)
    nodes = [whole] + list(family)
    vals = []
    for s in nodes:
        kids = [t for t in family if t < s and not any(t < u < s for u in family)]
        covered = set().union(*kids) if kids else set()
        vals.append((0 if s == whole else 1) + len(kids) + len(s - covered))
    return vals


# -- interpolation ----------------------------------------------------------------

def sample_primes(count: int, at_least: int) -> list[int]:
    out, p = [], max(5, at_least)
    while len(out) < count:
        if sympy.isprime(p):
            out.append(p)
        p += 1
    return out


def betti_from_counts(m: int, extra: int = 1) -> PoincarePoly:
    """Interpolate q -> |Mbar_{0,m}(F_q)| and read the coefficients as b_0, b_2, ..."""
    if m < 3:
        return PoincarePoly.one()
    deg = m - 3
    primes = sample_primes(deg + 1 + extra, m)
    q = sympy.Symbol("q")
    pts = [(p, count_closed(p, m)) for p in primes[: deg + 1]]
    poly = sympy.Poly(sympy.interpolate(pts, q), q)
    for p in primes[deg + 1:]:
        if poly.eval(p) != count_closed(p, m):
            raise InterpolationMismatch(f"m={m}: interpolant disagrees at q={p}")
    coeffs = poly.all_coeffs()[::-1]
    if any(not c.is_integer or c < 0 for c in coeffs):
        raise InterpolationMismatch(f"m={m}: non-integral or negative coefficients {coeffs}")
    return PoincarePoly(tuple(int(c) for c in coeffs))


def per_prime_counts(m: int, extra: int = 1) -> dict[int, int]:
    deg = max(m - 3, 0)
    return {p: count_closed(p, m) for p in sample_primes(deg + 1 + extra, m)}
