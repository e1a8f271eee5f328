import pytest
from hypothesis import given, settings, strategies as st

from ufswindle.chains import Chain, boundary, restrict
from ufswindle.complexes import Window, make_regular_tree
from ufswindle.harness import generate_random_boundary
from ufswindle.product import ProductComplex, TriClass, classify_tri
from ufswindle.reduce_h1 import NotACycleError
from ufswindle.reduce_h2 import (
    bound_z_chain,
    diagonal_coefficients,
    kill_diagonal_tris,
    kill_x_simplices,
    kill_y_simplices,
    reduce_h2,
    sigma,
    tau,
)
from ufswindle.tails import tree_tail_scheme
from ufswindle.witness import GeodesicSpec, geodesic_slice_cycle

T3 = make_regular_tree(3)
P = ProductComplex([T3, T3, T3])
W = Window(5, 4)
S = tree_tail_scheme(T3)
LO, HI = (4, 4, 4), (1, 1, 1)


def test_sigma_order_matches_listed_simplices():
    x, x1 = 4, 1
    assert sigma((x, x, x), (x1, x1, x1), 0) == ((x, x, x), (x1, x, x), (x1, x1, x1))
    assert sigma((x, x, x), (x1, x1, x1), 1) == ((x, x, x), (x1, x1, x), (x1, x1, x1))
    # tau_i has sigma_i and sigma_{i+1} as its faces
    for i in range(5):
        faces = {tau(LO, HI, i)[:j] + tau(LO, HI, i)[j + 1 :] for j in range(4)}
        assert sigma(LO, HI, i) in faces and sigma(LO, HI, i + 1) in faces


def test_partial_sum_example():
    c = Chain(2, {sigma(LO, HI, 0): 1, sigma(LO, HI, 1): -1})
    assert diagonal_coefficients(c)[(LO, HI)] == [1, -1, 0, 0, 0, 0]
    st_ = kill_diagonal_tris(P, c, Window(8), interior_radius=0)
    assert st_.constructed == Chain(3, {tau(LO, HI, 0): 1})
    assert not any(classify_tri(s) is TriClass.DIAGONAL for s in st_.residual)


def test_no_diagonals_is_identity():
    c = boundary(Chain(3, {((4, 4, 4), (1, 4, 4), (1, 1, 4), (1, 1, 1)): 1}))
    c = restrict(c, lambda s: classify_tri(s) is not TriClass.DIAGONAL)
    st_ = kill_diagonal_tris(P, c, Window(8), interior_radius=0)
    assert not st_.constructed and st_.residual == c


def test_non_cycle_rejected():
    with pytest.raises(NotACycleError):
        kill_diagonal_tris(P, Chain(2, {sigma(LO, HI, 0): 1}), Window(8, 2))


@settings(max_examples=10)
@given(st.integers(0, 10**6))
def test_diagonal_stage_on_random_boundaries(seed):
    c = generate_random_boundary(P, 3, 2, 1, seed)
    st_ = kill_diagonal_tris(P, c, W)
    assert st_.ok
    inside = P.inside(W.interior_radius)
    assert not any(inside(s) and classify_tri(s) is TriClass.DIAGONAL for s in st_.residual)
    for (lo, hi), cs in diagonal_coefficients(c).items():
        if inside((lo, hi)):
            d = [sum(cs[: i + 1]) for i in range(5)]
            assert d[4] == -cs[5]


def pairing_defects(c, inside):
    """x-simplices whose partner across the shared long face does not carry the opposite coefficient."""
    out = []
    for s, a in c.items():
        if classify_tri(s) is TriClass.X and s[1][1] != s[0][1] and s[1][2] == s[0][2]:
            (x, y, z), _, (_, y1, z1) = s
            partner = ((x, y, z), (x, y, z1), (x, y1, z1))
            if inside((s[0], s[2])) and c[partner] + a:
                out.append(s)
    return out


def aggregate_defects(c, inside):
    """Interior z-edges whose incident y-simplices (from above and below in x) do not sum to zero."""
    defects = []
    edges = {(s[0], s[1]) for s in c} | {(s[1], s[2]) for s in c}
    for e in edges:
        (x, y, z), (x2, y2, z1) = e
        if (x, y) != (x2, y2) or not inside(e):
            continue
        total = sum(c[(e[0], e[1], (xa, y, z1))] for xa in T3.above(x))
        total += sum(c[((xb, y, z), e[0], e[1])] for xb in T3.below(x))
        if total:
            defects.append(e)
    return defects


@pytest.mark.parametrize("seed", range(3))
def test_stage_conditions_against_direct_summation(seed):
    c = generate_random_boundary(P, 3, 2, 1, seed)
    cert = reduce_h2(P, c, W)
    d, x, y, z = cert.stages
    assert not pairing_defects(d.residual, P.inside(x.interior_radius))
    assert not aggregate_defects(x.residual, P.inside(y.interior_radius))
    assert x.checks["pairing_faces_checked"] > 0
    assert y.checks["aggregate_faces_checked"] > 0
    assert cert.verdict == "OK"


def test_tetrahedron_boundary_through_x_stage():
    c = boundary(Chain(3, {((4, 4, 4), (1, 4, 4), (1, 1, 4), (1, 1, 1)): 1}))
    d = kill_diagonal_tris(P, c, W)
    x = kill_x_simplices(P, d.residual, S, W)
    inside = P.inside(W.interior_radius)
    assert not any(inside(s) and classify_tri(s) is TriClass.X for s in x.residual)


def test_stages_without_their_class_do_nothing():
    y_only = Chain(2, {((4, 4, 4), (1, 4, 4), (1, 4, 1)): 1})
    assert not kill_x_simplices(P, y_only, S, W).constructed
    z_only = Chain(2, {((4, 4, 4), (1, 4, 4), (1, 1, 4)): 1})
    assert not kill_y_simplices(P, z_only, S, W).constructed
    assert not bound_z_chain(P, Chain.zero(2), S, W).constructed


def test_zero_input():
    cert = reduce_h2(P, Chain.zero(2), W)
    assert cert.verdict == "OK"
    assert all(not s.constructed for s in cert.stages)


def test_fixed_z_witness():
    c = geodesic_slice_cycle([GeodesicSpec(0, 1)] * 2, P, W)
    cert = reduce_h2(P, c, W)
    assert cert.verdict == "OK"
    assert [bool(s.constructed) for s in cert.stages] == [False, False, False, True]
