import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dvt.cohomology import clopen_components
from dvt.errors import BadParameter, CyclicOrder, DuplicateCell, NotASubset, UnknownCell
from dvt.topology import (SubspaceView, build_space, circle_model, grid_model, iter_open_sets,
                          labeled_path, path_model, product_space)

from strategies import space_and_closed, space_and_mask, spaces


def ids(A):
    return set(A.ids())


# -- concrete models ---------------------------------------------------------

def test_interval_model_order():
    X = build_space(["a", "b", "ab"], [("a", "ab"), ("b", "ab")])
    assert X.leq("a", "ab") and not X.leq("ab", "a")
    assert ids(X.minimal_open("a")) == {"a", "ab"}
    assert ids(X.closure(X.point_set(["ab"]))) == {"a", "b", "ab"}
    assert X.is_open(X.point_set(["ab"]))
    assert X.is_closed(X.point_set(["a"]))


def test_build_space_rejects_bad_input():
    with pytest.raises(DuplicateCell):
        build_space(["a", "a"], [])
    with pytest.raises(UnknownCell):
        build_space(["a"], [("a", "b")])
    with pytest.raises(CyclicOrder):
        build_space(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(BadParameter):
        circle_model(2)
    with pytest.raises(BadParameter):
        path_model(0)
    with pytest.raises(BadParameter):
        grid_model(0, 1)


def test_circle_closure_boundary_and_components():
    X = circle_model(5)
    assert ids(X.closure(X.point_set(["e0"]))) == {"e0", "v0", "v1"}
    assert ids(X.minimal_open("v1")) == {"v1", "e0", "e1"}
    C = X.point_set(["v1", "e1", "v2", "e2", "v3", "e3", "v4"])
    assert X.is_closed(C)
    assert ids(X.boundary(C)) == {"v1", "v4"}
    C3 = X.point_set(["v2", "v4"])
    assert len(X.connected_components(C3)) == 2
    C2 = X.point_set(["v1", "v2", "v4"])
    assert ids(X.relative_boundary(C2, C)) == {"v1", "v2", "v4"}


def test_product_and_grid_sizes():
    assert len(product_space(path_model(1), path_model(1))) == 9
    assert len(product_space(circle_model(5), circle_model(7))) == 140
    G = grid_model(2, 2)
    assert len(G) == 25
    assert G.leq("(v0,v0)", "(e0,e0)")
    assert not G.leq("(v0,e0)", "(e0,v0)")


def test_labeled_path_ids():
    P = labeled_path(["0", "2", "4"], vertex="x{}")
    assert list(P.cells) == ["x0", "x2", "x4", "0..2", "2..4"]
    assert P.is_connected(P.whole())


def test_unknown_cell_and_subspace_errors():
    X = circle_model(3)
    with pytest.raises(UnknownCell):
        X.point_set(["nope"])
    with pytest.raises(UnknownCell):
        X.idx(99)
    view = SubspaceView(X, X.point_set(["v0"]))
    with pytest.raises(NotASubset):
        view.closure(X.point_set(["v1"]))


def test_pointset_algebra():
    X = circle_model(4)
    A, B = X.point_set(["v0", "e0"]), X.point_set(["e0", "v1"])
    assert ids(A | B) == {"v0", "e0", "v1"}
    assert ids(A & B) == {"e0"}
    assert ids(A - B) == {"v0"}
    assert ids(A ^ B) == {"v0", "v1"}
    assert len(A.complement()) == len(X) - 2
    assert (A & B) <= A and not A <= B
    assert "v0" in A and "v1" not in A
    assert X.point_set(["v2"]).isdisjoint(A)


def test_open_set_enumeration_matches_brute_force_on_circle():
    X = circle_model(4)
    brute = {m for m in range(X.full + 1) if X.up_closure(m) == m}
    got = list(iter_open_sets(X))
    assert len(got) == len(set(got))
    assert set(got) == brute


# -- properties ---------------------------------------------------------------

@given(space_and_mask())
def test_closure_interior_laws(sm):
    X, A = sm
    cl, it = X.closure(A), X.interior(A)
    assert it <= A <= cl
    assert X.closure(cl) == cl and X.interior(it) == it
    assert X.is_closed(cl) and X.is_open(it)
    assert X.interior(A.complement()) == cl.complement()
    assert X.boundary(A) == X.boundary(A.complement())
    assert X.is_closed(X.boundary(A))


@given(space_and_mask())
def test_relative_boundary_formula(sm):
    X, A = sm
    Y = X.closure(A)
    view = SubspaceView(X, Y)
    # the relative boundary operator agrees with closure minus relative interior
    assert X.relative_boundary(A, Y) == view.boundary(A)


@given(spaces(max_cells=9))
def test_open_sets_are_exactly_up_sets(X):
    brute = {m for m in range(X.full + 1) if X.up_closure(m) == m}
    got = list(iter_open_sets(X))
    assert len(got) == len(brute) and set(got) == brute


@given(spaces())
def test_minimal_open_sets_are_connected(X):
    for x in range(len(X)):
        assert X.is_connected(X.minimal_open(x))
        assert X.is_connected(X.closure(X.point_set([x])))


@given(space_and_mask(max_cells=12))
def test_components_agree_with_clopen_count(sm):
    X, A = sm
    comps = X.connected_components(A)
    assert len(comps) == clopen_components(X, A)
    assert sum(len(c) for c in comps) == len(A)
    for c in comps:
        assert X.is_connected(c)


@given(space_and_mask())
def test_components_of_open_sets_are_open(sm):
    X, A = sm
    for U in (X.interior(A), X.closure(A)):
        for c in X.connected_components(U):
            assert X.is_open(c) == X.is_open(U) or not X.is_open(U)
            if X.is_closed(U):
                assert X.is_closed(c)


@given(space_and_mask())
def test_subspace_keeps_order_and_ids(sm):
    X, A = sm
    if not A:
        return
    S = X.subspace(A)
    assert list(S.cells) == A.ids()
    for a, b in itertools.product(A.ids(), repeat=2):
        assert S.leq(a, b) == X.leq(a, b)
    assert len(S.connected_components(S.whole())) == len(X.connected_components(A))


# boundaries of components and unions, and complements of components; 1000 cases each
@settings(max_examples=1000)
@given(space_and_mask())
def test_component_boundary_inside_boundary(sm):
    X, V = sm
    bd = X.boundary(V)
    for c in X.connected_components(V):
        assert X.boundary(c) <= bd


@settings(max_examples=1000)
@given(space_and_closed())
def test_component_boundary_of_closed_set(sc):
    X, V = sc
    bd = X.boundary(V)
    for c in X.connected_components(V):
        assert X.boundary(c) == c & bd


@settings(max_examples=1000)
@given(spaces(), st.lists(st.integers(0, 2 ** 12 - 1), min_size=1, max_size=4))
def test_boundary_of_union_inside_closure_of_boundaries(X, raw):
    parts = [X.from_mask(m & X.full) for m in raw]
    union = X.empty()
    bds = X.empty()
    for A in parts:
        union = union | A
        bds = bds | X.boundary(A)
    assert X.boundary(union) <= X.closure(bds)


@settings(max_examples=1000)
@given(spaces(), st.integers(0, 2 ** 12 - 1), st.integers(0, 2 ** 12 - 1))
def test_removing_a_component_keeps_complement_connected(X, ym, am):
    Y = X.from_mask(ym & X.full)
    if not Y or not X.is_connected(Y):
        return
    A = X.from_mask(X.up_closure(am & Y.mask)) & Y
    # A must be open in Y
    if not SubspaceView(X, Y).is_open(A) or not X.is_connected(Y - A):
        return
    for c in X.connected_components(A):
        assert X.is_connected(Y - c)
