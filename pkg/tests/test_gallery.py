import time

import pytest

from dvt.cohomology import gate_boundary_connectedness
from dvt.errors import BadParameter, UnknownExample
from dvt.gallery import CATALOGUE, DEFAULT_NAMES, build_example, ex_stripes
from dvt.maps import FAILS
from dvt.viability import (INF, check_theorem_bounds, max_orbit_bruteforce, verify_propositions,
                           viability_sequence)

EXPECTED = {
    "ex_4_1": 2, "ex_4_2": 3, "ex_circle_d(5)": 4, "ex_circle_d(7)": 6, "ex_stripes": 5,
    "ex_stargate_bis": 5, "ex_stargate": 6, "ex_ndim_torus(5,7)": 34, "ex_trivial_corr": 2,
    "ex_corr_main": 4,
}


@pytest.fixture(scope="module")
def runs():
    out = {}
    for name in DEFAULT_NAMES:
        g = build_example(name)
        out[name] = (g, viability_sequence(g.space, g.C, g.f))
    return out


@pytest.mark.parametrize("name", DEFAULT_NAMES)
def test_iter_matches_model_value_and_oracle(runs, name):
    g, rep = runs[name]
    assert rep.iter == g.expected_iter == EXPECTED[name]
    assert max_orbit_bruteforce(g.space, g.C, g.f) == rep.iter


@pytest.mark.parametrize("name", DEFAULT_NAMES)
def test_hypotheses_match(runs, name):
    g, rep = runs[name]
    assert rep.hypotheses.applicable() == g.expected_hypotheses
    assert rep.c_closed


@pytest.mark.parametrize("name", DEFAULT_NAMES)
def test_statements_and_bounds_hold(runs, name):
    g, rep = runs[name]
    assert not [r for r in verify_propositions(g.space, g.C, g.f, rep) if r.status == FAILS]
    assert not check_theorem_bounds(g.space, g.C, g.f, rep).violations


@pytest.mark.parametrize("name", [n for n in DEFAULT_NAMES if build_example(n).expected_levels])
def test_expected_levels(runs, name):
    g, rep = runs[name]
    for n, cells in g.expected_levels.items():
        assert sorted(rep.level(n).ids()) == sorted(cells), n


def test_ex_4_2_levels_by_real_points(runs):
    _, rep = runs["ex_4_2"]
    assert rep.level(2).ids() == ["x0", "x2", "x4"]
    assert rep.level(3).ids() == ["x2", "x4"]


def test_circle_orbit(runs):
    _, rep = runs["ex_circle_d(5)"]
    assert rep.witness.prefix == ("v2", "v4", "v1", "v3", "v0")


def test_circle_gate_fails():
    g = build_example("ex_circle_d(5)")
    rep = gate_boundary_connectedness(g.space)
    assert not rep.holds and rep.counterexample.ids() == ["e0"]


def _layer_index(rep):
    out = {}
    for n, L in enumerate(rep.filtration):
        for c in L.ids():
            out[c] = n
    return out


def test_stripes_window_does_not_change_inner_layers():
    """Widening the window leaves the layers of cells with 5 <= x < 10 unchanged."""
    small, wide = ex_stripes(3), ex_stripes(5)
    a = _layer_index(viability_sequence(small.space, small.C, small.f))
    b = _layer_index(viability_sequence(wide.space, wide.C, wide.f))
    inner = [c for c in a if c in b and
             all(5 <= float(t) < 10 for t in c[1:-1].split(",")[0].split(".."))
             and c in small.C]
    assert len(inner) >= 9
    assert all(a[c] == b[c] for c in inner)
    assert viability_sequence(wide.space, wide.C, wide.f).iter == 5


def test_stargate_deepest_level_is_two_vertices(runs):
    g, rep = runs["ex_stargate"]
    deepest = rep.level(6)
    assert len(deepest) == 2
    assert all(g.space.height()[i] == 0 for i in deepest)
    assert len(g.space.connected_components(deepest)) == 2


def test_torus_model_value_differs_from_catalogue_value():
    g = build_example("ex_ndim_torus(5,7)")
    assert g.derived and g.expected_iter == 34 and g.catalogue_iter == 35


def test_full_gallery_is_fast():
    t0 = time.perf_counter()
    for name in DEFAULT_NAMES:
        g = build_example(name)
        viability_sequence(g.space, g.C, g.f)
    assert time.perf_counter() - t0 < 10


def test_build_example_names():
    assert build_example(" ex_circle_d( 7 ) ".replace(" ", "")).name == "ex_circle_d(7)"
    assert build_example("ex_ndim_torus(5,7)").name == "ex_ndim_torus(5,7)"
    with pytest.raises(UnknownExample):
        build_example("ex_missing")
    with pytest.raises(UnknownExample):
        build_example("ex_4_1;rm")
    with pytest.raises(BadParameter):
        build_example("ex_circle_d(6)")
    with pytest.raises(BadParameter):
        build_example("ex_ndim_torus(5,15)")
    assert set(CATALOGUE) >= {n.split("(")[0] for n in DEFAULT_NAMES}


def test_infinite_when_whole_circle_is_kept():
    g = build_example("ex_circle_d(5)")
    full = g.space.whole()
    from dvt.maps import CellMap
    f = CellMap.from_ids(g.space, full, {c: c for c in g.space.cells})
    assert viability_sequence(g.space, full, f).iter == INF
