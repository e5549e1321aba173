import random

import pytest
from hypothesis import settings

from bbatlas.graph import DecoratedGraph

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def star(n=0, d=2):
    return DecoratedGraph.make(n, d, p=[0], h={i: 0 for i in range(1, d + 1)},
                               edges=[(0, i, 1) for i in range(1, d + 1)],
                               legs={m: 0 for m in range(1, n + 1)})


def single(d, n=0):
    return DecoratedGraph.make(n, d, h={0: d}, legs={m: 0 for m in range(1, n + 1)})


def path_php(n=0):
    return DecoratedGraph.make(n, 2, p=[0, 2], h={1: 0}, edges=[(0, 1, 1), (2, 1, 1)])


def relabel(g, rng):
    """Same graph with shuffled vertex ids."""
    ids = [v.id for v in g.vertices]
    new = ids[:]
    rng.shuffle(new)
    new = [x + 10 for x in new]
    m = dict(zip(ids, new))
    verts = tuple(type(v)(m[v.id], v.label, v.h_degree) for v in g.vertices)
    edges = tuple(type(e)(m[e.p], m[e.h], e.degree) for e in g.edges)
    return DecoratedGraph(g.n, g.d, verts, edges, tuple((k, m[v]) for k, v in g.legs))


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
