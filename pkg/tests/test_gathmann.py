import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bbatlas.gathmann import (
    TangencyVector,
    TermGroup,
    check_term,
    enumerate_boundary_terms,
    expected_dimension,
    gathmann_codim,
    ordered_count,
    recursion_expression,
    term_dimension,
)


def test_codim():
    assert gathmann_codim((0, 0, 0)) == 0
    assert gathmann_codim((3,)) == 3
    assert gathmann_codim((1, 1)) == 2


def test_tangency_vector_bound():
    with pytest.raises(ValueError):
        TangencyVector((2, 1), 2, 2)


def test_degree_one_has_no_terms():
    assert enumerate_boundary_terms((1,), 1, 1, 2) == []


def test_degree_two_snapshot():
    terms = enumerate_boundary_terms((2,), 1, 2, 2)
    assert [(t.d0, t.internal, t.groups, t.coefficient) for t in terms] == [
        (0, (1,), (TermGroup(1, 1, ()), TermGroup(1, 1, ())), Fraction(1, 2)),
        (1, (1,), (TermGroup(1, 1, ()),), Fraction(1)),
    ]


def test_flat_target_has_no_internal_degree():
    assert all(t.d0 == 0 for t in enumerate_boundary_terms((2,), 1, 2, 1))


def test_recursion_record():
    rec = recursion_expression((0,), 1, 1, 2)
    assert rec["lead"]["psi_coefficient"] == 0
    assert rec["corrections"] == [t.to_dict((0,)) | {"codimension": 1}
                                  for t in enumerate_boundary_terms((0,), 1, 1, 2)]
    rec = recursion_expression((1, 1), 1, 3, 2)
    assert all(c["codimension"] == 3 for c in rec["corrections"])


CASES = [(alpha, j, d, r)
         for d in range(1, 4) for n in range(1, 4)
         for alpha in itertools.product(range(d + 1), repeat=n) if sum(alpha) <= d
         for r in (1, 2, 3) for j in range(1, n + 1)]


@given(st.sampled_from(CASES))
def test_term_invariants(case):
    alpha, j, d, r = case
    for t in enumerate_boundary_terms(alpha, j, d, r):
        assert check_term(t, alpha, j, d, r) == []
        assert term_dimension(t, alpha, r) == expected_dimension(alpha, d, r)


@given(st.sampled_from(CASES))
def test_ordered_mode_counts(case):
    terms = enumerate_boundary_terms(*case)
    ordered = enumerate_boundary_terms(*case, ordered=True)
    assert len(ordered) == sum(ordered_count(t) for t in terms)
