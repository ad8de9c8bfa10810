import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dvt.errors import DomainMismatch, EmptyImage, NotInDomain, PartialMap, UnknownCell
from dvt.maps import (FAILS, HOLDS, NA, CellMap, SetValuedMap, check_boundary_conditions,
                      check_conn, check_continuous, check_hypotheses, check_usc, image,
                      usc_by_open_sets)
from dvt.random_instances import random_any_setvalued, random_closed, random_space, random_usc
from dvt.topology import circle_model, iter_open_sets, path_model

from strategies import any_instances, monotone_instances, spaces, usc_instances


@pytest.fixture
def circle():
    return circle_model(5)


def test_rotation_is_continuous(circle):
    X = circle
    rot = {f"v{i}": f"v{(i + 2) % 5}" for i in range(5)}
    rot.update({f"e{i}": f"e{(i + 2) % 5}" for i in range(5)})
    f = CellMap.from_ids(X, X.whole(), rot)
    assert check_continuous(f).holds
    assert f("v4") == "v1"


def test_discontinuity_witness(circle):
    X = circle
    table = {c: c for c in X.cells}
    table["e0"] = "v3"
    f = CellMap.from_ids(X, X.whole(), table)
    chk = check_continuous(f)
    assert chk.fails and chk.witness == ("v0", "e0")


def test_usc_and_conn_failures():
    X = path_model(2)
    C = X.whole()
    ok = SetValuedMap.from_ids(X, C, {c: ["e0", "v1", "e1"] for c in X.cells})
    assert check_usc(ok).holds and check_conn(ok).holds
    split = SetValuedMap.from_ids(X, C, {c: ["v0", "v2"] for c in X.cells})
    assert check_conn(split).fails
    # the edge's image escapes every neighbourhood of the vertex's image
    bad = SetValuedMap.from_ids(X, C, {"v0": ["v0"], "e0": ["v2"], "v1": ["v1"],
                                      "e1": ["e1"], "v2": ["v2"]})
    chk = check_usc(bad)
    assert chk.fails and chk.witness == ("v0", "e0")


def test_boundary_conditions_weak_and_strong(circle):
    X = circle
    C = X.point_set(["v1", "e1", "v2"])
    f = SetValuedMap.from_ids(X, C, {"v1": ["v1", "e0"], "e1": ["e1"], "v2": ["e3"]})
    rep = check_boundary_conditions(f, C)
    assert rep.bdr_w.fails and rep.bdr_w.witness == ("v2",)
    assert rep.bdr_s.fails and rep.bdr_s.witness == ("v1",)
    g = CellMap.from_ids(X, C, {"v1": "v2", "e1": "e1", "v2": "v1"})
    assert check_boundary_conditions(g, C).bdr_function.holds
    statuses = check_hypotheses(g, C).statuses()
    assert statuses["usc"] == NA and statuses["continuous"] == HOLDS


def test_map_construction_errors(circle):
    X = circle
    C = X.point_set(["v0", "e0", "v1"])
    with pytest.raises(PartialMap):
        CellMap.from_ids(X, C, {"v0": "v0"})
    with pytest.raises(NotInDomain):
        CellMap.from_ids(X, C, {"v0": "v0", "e0": "e0", "v1": "v1", "v2": "v2"})
    with pytest.raises(EmptyImage):
        SetValuedMap(X, C, {0: 0, 1: 2, 5: 1})
    with pytest.raises(UnknownCell):
        SetValuedMap(X, C, {0: 1 << 40, 1: 2, 5: 1})
    with pytest.raises(DomainMismatch):
        CellMap(X, circle_model(5).whole(), {})
    f = CellMap.from_ids(X, C, {"v0": "v0", "e0": "e0", "v1": "v1"})
    with pytest.raises(NotInDomain):
        image(f, X.point_set(["v2"]))
    with pytest.raises(DomainMismatch):
        check_boundary_conditions(f, X.whole())


@given(monotone_instances(boundary=False))
def test_generated_monotone_maps_are_continuous(inst):
    X, C, f = inst
    assert check_continuous(f).holds
    assert check_usc(f.as_setvalued()).holds


@given(monotone_instances())
def test_generated_boundary_maps_reenter(inst):
    X, C, f = inst
    assert check_boundary_conditions(f, C).bdr_function.holds


@given(usc_instances(bdr="s"))
def test_generated_usc_maps_meet_hypotheses(inst):
    X, C, f = inst
    rep = check_hypotheses(f, C)
    assert rep.usc.holds and rep.conn.holds and rep.bdr_s.holds and rep.bdr_w.holds


def test_usc_matches_open_set_definition_exhaustively():
    """The order-theoretic usc test agrees with the open-set definition on 400 maps."""
    rng = random.Random(11)
    agree = 0
    for _ in range(400):
        X = random_space(rng, 12)
        C = random_closed(rng, X)
        f = (random_any_setvalued(rng, X, C) if rng.random() < 0.5
             else random_usc(rng, X, C, conn=False, bdr="") or random_any_setvalued(rng, X, C))
        assert check_usc(f).holds == usc_by_open_sets(f, iter_open_sets(X))
        agree += 1
    assert agree == 400


@given(any_instances(max_cells=8))
def test_usc_fast_and_definitional_agree(inst):
    X, C, f = inst
    g = f if f.kind == "setvalued" else f.as_setvalued()
    assert check_usc(g).holds == usc_by_open_sets(g, iter_open_sets(X))


@given(monotone_instances(boundary=False))
def test_continuity_equals_usc_of_singletons(inst):
    X, C, f = inst
    assert check_continuous(f).holds == check_usc(f.as_setvalued()).holds


@settings(max_examples=1000)
@given(usc_instances(bdr=""), st.integers(0, 2 ** 12 - 1), st.integers(0, 11))
def test_image_of_connected_set_is_connected(inst, am, start):
    """Under usc and connected images, connected sets have connected images."""
    X, C, f = inst
    members = list(C)
    A = X.from_mask(X.component_of(members[start % len(members)], am & C.mask | 1 << members[start % len(members)]))
    assert X.is_connected(A)
    assert X.is_connected(image(f, A))


def test_boundary_condition_ignores_cells_outside_a_non_closed_domain():
    X = path_model(1)
    C = X.point_set(["e0"])
    f = CellMap.from_ids(X, C, {"e0": "v0"})
    assert check_boundary_conditions(f, C).bdr_function.holds
