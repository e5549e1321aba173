import json

import pytest
from hypothesis import given, strategies as st

from bbatlas.cohomology import (
    EquivariantDataRequired,
    betti,
    cached_poincare_moduli,
    is_supported,
    moduli_dimension,
    orbit_trace,
    poincare_fixed_locus,
    poincare_moduli,
    poincare_moduli_parallel,
)
from bbatlas.enumeration import CURVE, MAP, POINT, TARGET, Factor, enumerate_graphs
from bbatlas.graph import DecoratedGraph
from bbatlas.poly import PoincarePoly
from bbatlas.selftest import gaussian_binomial
from conftest import single, star

SUPPORTED = [(r, d, n) for r in (1, 2, 3) for d in (1, 2) for n in (0, 1)]


def test_orbit_traces():
    assert orbit_trace(Factor(TARGET, 0), 2, None, 2).to_list() == [1, 0, 1]
    assert orbit_trace(Factor(POINT, 0, 3), 3, None, 2).to_list() == [1]
    swap = {("edge", 1): ("edge", 2), ("edge", 2): ("edge", 1), ("leg", 1): ("leg", 1), ("leg", 2): ("leg", 2)}
    assert orbit_trace(Factor(CURVE, 0, 4), 1, swap, 2).to_list() == [1, 1]


def test_nontrivial_traces_are_refused():
    swap = {("edge", 1): ("edge", 2), ("edge", 2): ("edge", 1)}
    with pytest.raises(EquivariantDataRequired):
        orbit_trace(Factor(CURVE, 0, 5), 1, swap, 2)
    with pytest.raises(EquivariantDataRequired):
        orbit_trace(Factor(MAP, 0, 2, 1), 1, swap, 2)


def test_fixed_loci():
    assert poincare_fixed_locus(star(0, 2), 2).to_list() == [1, 1, 1]
    assert poincare_fixed_locus(star(0, 1), 4).to_list() == [1, 1, 1, 1]
    assert poincare_fixed_locus(single(1), 2).to_list() == [1]


@pytest.mark.parametrize("rdn, poly", [
    ((2, 1, 0), [1, 1, 1]),
    ((1, 2, 0), [1, 1, 1]),
    ((1, 1, 1), [1, 1]),
    ((2, 2, 0), [1, 2, 3, 3, 2, 1]),
    ((3, 1, 0), [1, 1, 2, 1, 1]),
    ((4, 1, 0), [1, 1, 2, 2, 2, 1, 1]),
    # point-in-line incidence variety in P^2 x dual P^2
    ((2, 1, 1), [1, 2, 2, 1]),
])
def test_known_spaces(rdn, poly):
    assert poincare_moduli(*rdn).to_list() == poly


def test_betti():
    assert betti(2, 1, 0, 2) == 1
    assert betti(2, 2, 0, 4) == 3
    assert betti(2, 2, 0, 3) == 0


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_grassmannian_law(r):
    assert poincare_moduli(r, 1, 0) == gaussian_binomial(r + 1, 2)


@pytest.mark.parametrize("rdn", SUPPORTED)
def test_palindromic_and_connected(rdn):
    p = poincare_moduli(*rdn)
    assert p.coeffs[0] == 1
    assert p.is_palindromic(2 * moduli_dimension(*rdn))


@pytest.mark.parametrize("rdn", SUPPORTED)
def test_euler_sum(rdn):
    r, d, n = rdn
    parts = sum(poincare_fixed_locus(g, r).at_one() for g in enumerate_graphs(n, r, d))
    assert parts == poincare_moduli(*rdn).at_one()


def test_degree_zero():
    assert poincare_moduli(2, 0, 4).to_list() == [1, 2, 2, 1]
    with pytest.raises(ValueError):
        poincare_moduli(2, 0, 2)


def test_unsupported_lists_every_graph():
    with pytest.raises(EquivariantDataRequired) as exc:
        poincare_moduli(3, 3, 0)
    assert len(exc.value.graphs) == 2
    assert not is_supported(2, 3, 0)
    assert is_supported(2, 2, 1)


def test_cache_roundtrip(tmp_path):
    cold, count = cached_poincare_moduli(2, 2, 1, tmp_path)
    files = list(tmp_path.glob("Q_r2_d2_n1.json"))
    assert len(files) == 1 and count == 9
    data = json.loads(files[0].read_text())
    assert data["poly"] == cold.to_list()
    warm, _ = cached_poincare_moduli(2, 2, 1, tmp_path)
    assert warm == cold


def test_stale_cache_is_recomputed(tmp_path):
    path = tmp_path / "Q_r2_d1_n0.json"
    path.write_text(json.dumps({"poly": [9, 9], "graphs": 1, "version": "old"}))
    poly, _ = cached_poincare_moduli(2, 1, 0, tmp_path)
    assert poly.to_list() == [1, 1, 1]


def test_parallel_matches_serial():
    assert poincare_moduli_parallel(3, 2, 1, jobs=2) == poincare_moduli(3, 2, 1)


@given(st.sampled_from(SUPPORTED), st.integers(0, 20))
def test_betti_coefficient(rdn, m):
    p = poincare_moduli(*rdn)
    assert betti(*rdn, 2 * m) == p.betti(2 * m)
    assert betti(*rdn, 2 * m + 1) == 0
