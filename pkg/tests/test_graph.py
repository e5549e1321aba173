import random

import pytest
from hypothesis import given, strategies as st

from bbatlas.enumeration import enumerate_graphs
from bbatlas.graph import (
    DecoratedGraph,
    InconsistencyError,
    apply_automorphism,
    automorphisms,
    canonical_form,
    canonical_key,
    classify,
    codimension,
    negative_weight_count,
    validate,
    weight_terms,
)
from conftest import path_php, relabel, single, star


def test_star_taxonomy():
    st_ = classify(star(0, 3))
    assert (st_.s, st_.u, st_.n2, st_.f) == (0, 3, 0, 0)


def test_single_vertex_is_stable():
    st_ = classify(single(2))
    assert (st_.s, st_.u) == (1, 0)


def test_path_taxonomy():
    st_ = classify(path_php())
    assert (st_.s, st_.u, st_.n2, st_.f) == (0, 0, 1, 1)


@pytest.mark.parametrize("g, expected", [
    (star(0, 2), 0),
    (star(3, 4), 0),
    (single(3, 2), 4),
    (DecoratedGraph.make(0, 2, p=[0], h={1: 0}, edges=[(0, 1, 2)]), 1),
    (path_php(), 2),
])
def test_codimension_examples(g, expected):
    assert codimension(g) == expected
    assert negative_weight_count(g) == expected


def test_weight_terms_on_path():
    assert weight_terms(path_php()) == {"H0": 1, "Ext1": 1, "Ext0": 0}


def test_single_vertex_weight_terms():
    assert weight_terms(single(3)) == {"H0": 4, "Ext1": 0, "Ext0": 0}


def test_negative_codimension_is_an_error():
    # not a valid graph: more very-unstable vertices than the degree allows
    g = DecoratedGraph(0, 1, star(0, 3).vertices, star(0, 3).edges)
    with pytest.raises(InconsistencyError):
        codimension(g)


def test_validate_rejects_p_to_p():
    from bbatlas.graph import Edge, Vertex

    g = DecoratedGraph(0, 1, (Vertex(0, "P"), Vertex(1, "P")), (Edge(0, 1, 1),))
    rep = validate(g, 2)
    assert not rep.ok
    assert any("P to P" in v for v in rep.violations)


def test_validate_flat_target():
    assert not validate(single(1), 1).ok
    assert validate(single(1), 2).ok


def test_validate_degree_sum():
    g = DecoratedGraph.make(0, 3, p=[0], h={1: 0}, edges=[(0, 1, 2)])
    assert any("expected d = 3" in v for v in validate(g, 2).violations)


def test_edge_order_does_not_matter():
    a = DecoratedGraph.make(0, 3, p=[0], h={1: 0, 2: 0}, edges=[(0, 1, 1), (0, 2, 2)])
    b = DecoratedGraph.make(0, 3, p=[0], h={1: 0, 2: 0}, edges=[(0, 2, 1), (0, 1, 2)])
    assert canonical_key(a) == canonical_key(b)


def test_star_and_path_differ():
    assert canonical_key(star(0, 2)) != canonical_key(path_php())


def test_automorphism_orders():
    assert automorphisms(star(0, 2)).order == 2
    assert automorphisms(star(0, 2)).a_gamma_order == 2
    assert automorphisms(single(2)).order == 1
    edge3 = DecoratedGraph.make(0, 3, p=[0], h={1: 0}, edges=[(0, 1, 3)])
    aut = automorphisms(edge3)
    assert (aut.order, aut.a_gamma_order) == (1, 3)
    assert automorphisms(star(0, 3)).order == 6
    assert automorphisms(path_php()).order == 2


ALL = [g for n in range(3) for d in range(1, 4) for g in enumerate_graphs(n, 3, d)]


@given(st.sampled_from(ALL), st.integers(0, 10**6))
def test_canonical_key_invariant_under_relabeling(g, seed):
    h = relabel(g, random.Random(seed))
    assert canonical_key(h) == canonical_key(g)
    assert canonical_form(h)[1] == canonical_form(g)[1]


@given(st.sampled_from(ALL))
def test_generators_are_symmetries(g):
    aut = automorphisms(g)
    for vperm, _ in aut.generators:
        assert canonical_key(apply_automorphism(g, vperm)) == canonical_key(g)
        assert apply_automorphism(g, vperm) == g


@given(st.sampled_from(ALL))
def test_codimension_bounds(g):
    st_ = classify(g)
    assert 0 <= codimension(g) <= g.d + st_.s


@given(st.sampled_from(ALL))
def test_aut_order_divides_local_symmetric_bound(g):
    import math

    bound = math.prod(math.factorial(len(g.incident(v.id))) for v in g.vertices)
    assert bound % automorphisms(g).order == 0
