import pytest
from hypothesis import given, strategies as st

from bbatlas.enumeration import enumerate_graphs, maximal_graph
from bbatlas.graph import DecoratedGraph, canonical_key
from bbatlas.poset import (
    JOIN,
    SPLIT,
    TRANSFER,
    InvalidMove,
    MoveStep,
    UnreachableGraphError,
    apply_move,
    hasse_edges,
    length,
    length_increment,
    leq,
    level_function,
    one_step_order,
    potential,
    successors,
)
from conftest import path_php, single, star

BOX = [(n, d, r) for n in range(3) for d in range(1, 4) for r in (1, 2, 3)]
GRAPHS = [(g, r) for n, d, r in BOX for g in enumerate_graphs(n, r, d)]


def key(g):
    return canonical_key(g)


def test_transfer():
    g = maximal_graph(1, 1)
    out = apply_move(g, MoveStep(TRANSFER, (0, 1), leg=1), 1)
    assert out.legs == ((1, 1),)
    assert {key(x) for x in enumerate_graphs(1, 1, 1)} == {key(g), key(out)}


def test_join_merges_edges():
    out = apply_move(star(0, 2), MoveStep(JOIN, (0, 1), other=(0, 2)), 2)
    assert key(out) == key(DecoratedGraph.make(0, 2, p=[0], h={1: 0}, edges=[(0, 1, 2)]))


def test_split_of_double_edge_gives_path():
    edge2 = DecoratedGraph.make(0, 2, p=[0], h={1: 0}, edges=[(0, 1, 2)])
    out = apply_move(edge2, MoveStep(SPLIT, (0, 1), (1, 1), 0, ((), ())), 2)
    assert key(out) == key(path_php())


def test_split_into_h_and_absorb():
    edge2 = DecoratedGraph.make(0, 2, p=[0], h={1: 0}, edges=[(0, 1, 2)])
    out = apply_move(edge2, MoveStep(SPLIT, (0, 1), (1,), 1, ((),)), 2)
    assert key(out) == key(DecoratedGraph.make(0, 2, p=[0], h={1: 1}, edges=[(0, 1, 1)]))
    out = apply_move(edge2, MoveStep(SPLIT, (0, 1), (), 2, ()), 2)
    assert key(out) == key(single(2))


@pytest.mark.parametrize("step", [
    MoveStep(SPLIT, (0, 1), (1, 1), 1, ((), ())),          # degree not conserved
    MoveStep(SPLIT, (0, 1), (2,), 0, ((),)),               # no-op split
    MoveStep(JOIN, (0, 1), other=(0, 1)),                  # same edge twice
    MoveStep(TRANSFER, (0, 1), leg=7),                     # missing leg
    MoveStep(SPLIT, (5, 1), (1, 1), 0, ((), ())),          # missing edge
])
def test_invalid_moves(step):
    edge2 = DecoratedGraph.make(0, 2, p=[0], h={1: 0}, edges=[(0, 1, 2)])
    with pytest.raises(InvalidMove):
        apply_move(edge2, step, 2)


def test_flat_target_forbids_degree_into_h():
    edge2 = DecoratedGraph.make(0, 2, p=[0], h={1: 0}, edges=[(0, 1, 2)])
    with pytest.raises(InvalidMove):
        apply_move(edge2, MoveStep(SPLIT, (0, 1), (1,), 1, ((),)), 1)


def test_length_examples():
    for n in range(4):
        for d in range(1, 5):
            assert length(maximal_graph(n, d)) == 1 - d
            assert length(single(d, n)) == d - 1 + n


def test_no_successors_of_single_vertex():
    assert successors(single(2), 2) == []


def test_successors_of_maximal_do_not_shrink():
    for _, s in successors(maximal_graph(0, 2), 2):
        assert length(s) >= length(maximal_graph(0, 2))


def test_double_edge_successors():
    edge2 = DecoratedGraph.make(0, 2, p=[0], h={1: 0}, edges=[(0, 1, 2)])
    got = {key(s) for _, s in successors(edge2, 2)}
    assert got == {key(path_php()), key(single(2)),
                   key(DecoratedGraph.make(0, 2, p=[0], h={1: 1}, edges=[(0, 1, 1)]))}


def test_leq_examples():
    top = maximal_graph(0, 2)
    assert leq(top, top, 2)
    ok, path = leq(single(2), top, 2, with_witness=True)
    assert ok and path
    g = top
    for step, after in path:
        g = apply_move(g, step, 2)
        assert key(g) == key(after)
    assert key(g) == key(single(2))
    for g in enumerate_graphs(0, 2, 2):
        if key(g) != key(top):
            assert not leq(top, g, 2)


def test_levels_degree_one():
    graphs = enumerate_graphs(1, 1, 1)
    levels = level_function(graphs, 1)
    assert levels[key(maximal_graph(1, 1))] == 0
    assert sorted(levels.values()) == [0, 1]


def test_levels_shortest_mode():
    graphs = enumerate_graphs(0, 2, 2)
    levels = level_function(graphs, 2, "shortest")
    assert levels[key(maximal_graph(0, 2))] == 0
    assert levels[key(single(2))] == 2


def test_unreachable_is_reported():
    # the double edge that links the two is missing from the list
    with pytest.raises(UnreachableGraphError) as exc:
        level_function([maximal_graph(0, 2), single(2)], 2)
    assert [key(g) for g in exc.value.graphs] == [key(single(2))]


def test_hasse_is_transitive_reduction():
    data = one_step_order(enumerate_graphs(0, 2, 2), 2)
    edges = hasse_edges(data)
    down = data.down_sets()
    closure = {(a, b) for a in data.keys for b in down[a] if a != b}
    rebuilt = set(edges)
    changed = True
    while changed:
        changed = False
        for a, b in list(rebuilt):
            for c, e in list(rebuilt):
                if b == c and (a, e) not in rebuilt:
                    rebuilt.add((a, e))
                    changed = True
    assert rebuilt == closure


@pytest.mark.parametrize("n, d, r", BOX)
def test_everything_below_the_maximum(n, d, r):
    graphs = enumerate_graphs(n, r, d)
    levels = level_function(graphs, r)
    assert len(levels) == len(graphs)
    keys = set(levels)
    for g in graphs:
        for _, s in successors(g, r):
            assert key(s) in keys
            assert levels[key(s)] > levels[key(g)]


@given(st.sampled_from(GRAPHS))
def test_increment_formula(gr):
    g, r = gr
    for step, s in successors(g, r):
        assert length(s) - length(g) == length_increment(step)
        assert potential(s) > potential(g)


@given(st.sampled_from(GRAPHS))
def test_length_strictly_increases(gr):
    g, r = gr
    for _, s in successors(g, r):
        assert length(s) > length(g)


@given(st.sampled_from(GRAPHS), st.data())
def test_antisymmetry(gr, data):
    g, r = gr
    others = enumerate_graphs(g.n, r, g.d)
    h = data.draw(st.sampled_from(others))
    if leq(g, h, r) and leq(h, g, r):
        assert key(g) == key(h)


def test_move_dict_roundtrip():
    steps = [MoveStep(SPLIT, (0, 1), (1, 1), 0, ((("leg", 1),), (("edge", 3),))),
             MoveStep(JOIN, (0, 1), other=(0, 2)),
             MoveStep(TRANSFER, (0, 1), leg=2)]
    for s in steps:
        assert MoveStep.from_dict(s.to_dict()) == s
