import random

import pytest

from bbatlas.enumeration import (
    CURVE,
    MAP,
    POINT,
    TARGET,
    ResourceLimitError,
    enumerate_graphs,
    fixed_locus_spec,
    graph_from_code,
    maximal_graph,
)
from bbatlas.graph import canonical_key, codimension, validate
from conftest import single, star

# graph counts, frozen from the exhaustive generator
FROZEN_COUNTS = {
    (0, 2, 1): 2, (0, 2, 2): 5, (0, 1, 2): 3, (1, 1, 1): 2, (1, 2, 2): 9,
    (0, 3, 3): 11, (2, 3, 3): 71, (2, 1, 3): 48, (1, 3, 3): 26, (0, 1, 3): 6,
}


@pytest.mark.parametrize("nrd, count", sorted(FROZEN_COUNTS.items()))
def test_counts(nrd, count):
    n, r, d = nrd
    assert len(enumerate_graphs(n, r, d)) == count


def test_degree_one_graphs():
    keys = {canonical_key(g) for g in enumerate_graphs(0, 2, 1)}
    assert keys == {canonical_key(single(1)), canonical_key(star(0, 1))}


def test_degree_two_codimensions():
    assert sorted(codimension(g) for g in enumerate_graphs(0, 2, 2)) == [0, 1, 2, 3, 3]
    assert sorted(codimension(g) for g in enumerate_graphs(0, 1, 2)) == [0, 1, 2]


def test_all_valid_and_distinct():
    for n in range(3):
        for d in range(1, 4):
            for r in (1, 2, 3):
                graphs = enumerate_graphs(n, r, d)
                assert all(validate(g, r).ok for g in graphs)
                assert len({canonical_key(g) for g in graphs}) == len(graphs)


def test_counts_monotone_in_n():
    for d in (1, 2, 3):
        counts = [len(enumerate_graphs(n, 2, d)) for n in range(3)]
        assert counts == sorted(counts)


def test_maximal_graph():
    g = maximal_graph(2, 3)
    assert g.legs_at(0) == [1, 2]
    assert [e.degree for e in g.edges] == [1, 1, 1]
    for n in range(6):
        for d in range(1, 6):
            assert codimension(maximal_graph(n, d)) == 0


def test_unique_open_cell():
    for n in range(3):
        for d in range(1, 4):
            zero = [g for g in enumerate_graphs(n, 2, d) if codimension(g) == 0]
            assert [canonical_key(g) for g in zero] == [canonical_key(maximal_graph(n, d))]


def test_ceiling():
    with pytest.raises(ResourceLimitError):
        enumerate_graphs(2, 3, 3, ceiling=10)


def test_shuffled_codes_give_same_keys():
    from bbatlas.enumeration import _subtrees

    codes = list(_subtrees("H", (1,), 2, False)) + [c for c in _subtrees("P", (1,), 2, False) if c[2]]
    random.Random(5).shuffle(codes)
    keys = {canonical_key(graph_from_code(1, 2, c)) for c in codes}
    assert keys == {canonical_key(g) for g in enumerate_graphs(1, 2, 2)}


def test_fixed_locus_factors():
    spec = fixed_locus_spec(star(0, 1), 2)
    assert [f.kind for f in spec.factors] == [POINT, TARGET]
    spec = fixed_locus_spec(single(2, 3), 3)
    assert [(f.kind, f.m, f.d_w) for f in spec.factors] == [(MAP, 3, 2)]
    spec = fixed_locus_spec(star(0, 2), 2)
    assert [f.kind for f in spec.factors] == [POINT, TARGET, TARGET]
    (fperm, _), = spec.generator_actions
    assert fperm == {0: 0, 1: 2, 2: 1}
    spec = fixed_locus_spec(star(1, 3), 2)
    assert spec.factors[0].kind == CURVE and spec.factors[0].m == 4


def test_aut_only_permutes_like_factors():
    for g in enumerate_graphs(2, 3, 3):
        spec = fixed_locus_spec(g, 3)
        for fperm, _ in spec.generator_actions:
            for a, b in fperm.items():
                assert spec.factors[a].params == spec.factors[b].params
