import pytest

from oracles import ExplicitTree, brute_simplices, product_simplex_count
from ufswindle.complexes import make_line, make_regular_tree
from ufswindle.product import (
    Cube,
    EdgeClass,
    ProductComplex,
    TriClass,
    classify_edge,
    classify_tri,
    cube_of,
    local_chains,
    product,
)


def unit_cube(k):
    # child 1 < root 0 in every factor
    return Cube(tuple((1, 0) for _ in range(k)))


def test_vertex_count(p2):
    assert len(list(p2.vertices_in(1))) == 16


def test_unit_square_counts():
    sq = unit_cube(2)
    assert len(sq.simplices(2)) == 2
    assert len(sq.simplices(1)) == 5


def test_unit_cube_tetrahedra():
    assert len(unit_cube(3).simplices(3)) == 6


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_three_cube_chains_match_brute_force(n):
    # local chains are the ordered (n+1)-chains of {0,1}^3
    import itertools

    pts = list(itertools.product((0, 1), repeat=3))
    brute = 0
    for sub in itertools.combinations(pts, n + 1):
        order = sorted(sub, key=sum)
        if all(a != b and all(x <= y for x, y in zip(a, b)) for a, b in zip(order, order[1:])):
            brute += 1
    assert len(local_chains(3, n)) == brute


@pytest.mark.parametrize("n", [0, 1, 2])
def test_two_fold_simplices_match_brute_force(tree3, n):
    p = ProductComplex([tree3, tree3])
    oracle = ExplicitTree([3], 1)
    assert set(p.simplices_in(n, 1)) == brute_simplices([oracle, oracle], n)


@pytest.mark.parametrize("n", [1, 2])
def test_three_fold_simplices_match_brute_force(n):
    x = make_regular_tree(3)
    p = ProductComplex([x, x, make_line()])
    ox = ExplicitTree([3], 1)
    assert set(p.simplices_in(n, 1)) == brute_simplices([ox, ox, ExplicitTree([2], 1)], n)


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_three_fold_counts_match_cube_formula(p3, r, n):
    v = 3 * 2**r - 2
    assert sum(1 for _ in p3.simplices_in(n, r)) == product_simplex_count(v, v - 1, 3, n)


def test_top_dimension_bound(p2):
    assert list(p2.simplices_in(3, 3)) == []


def test_edge_classes():
    assert classify_edge(((1, 0), (0, 0))) is EdgeClass.HORIZONTAL
    assert classify_edge(((0, 1), (0, 0))) is EdgeClass.VERTICAL
    assert classify_edge(((1, 1), (0, 0))) is EdgeClass.DIAGONAL


def test_tri_classes():
    x, y, z, x1, y1, z1 = 4, 5, 6, 1, 2, 3
    assert classify_tri(((x, y, z), (x, y1, z), (x, y1, z1))) is TriClass.X
    assert classify_tri(((x, y, z), (x1, y, z), (x1, y, z1))) is TriClass.Y
    assert classify_tri(((x, y, z), (x1, y, z), (x1, y1, z1))) is TriClass.DIAGONAL


def test_diagonal_tris_lie_on_no_cube_boundary(p3):
    # brute force: a 2-simplex is diagonal iff it is in the interior of its 3-cube
    cubes = list(p3.cubes_in(3, 1))
    for s in p3.simplices_in(2, 1):
        on_boundary = any(c.contains(s) and not c.in_interior(s) for c in cubes)
        assert (classify_tri(s) is TriClass.DIAGONAL) == (not on_boundary)


def test_cube_counts(p2, tree3):
    v, e = len(tree3.ball(3)), len(tree3.edges_in(3))
    assert sum(1 for _ in p2.cubes_in(2, 3)) == e * e
    assert sum(1 for _ in p2.cubes_in(1, 3)) == 2 * v * e
    assert list(p2.cubes_in(3, 3)) == []


@pytest.mark.parametrize("k", [1, 2, 3])
def test_cube_euler_characteristic(k):
    from math import factorial

    chi = sum((-1) ** n * len(local_chains(k, n)) for n in range(k + 1))
    assert chi == 1
    assert len(local_chains(k, k)) == factorial(k)


def test_cube_of_and_local(p2):
    s = ((4, 6), (1, 6), (1, 2))
    assert s in set(p2.simplices_in(2, 2))
    c = cube_of(s, p2.factors)
    assert c.coords == ((4, 1), (6, 2))
    assert c.local((1, 6)) == (1, 0)
    assert c.in_interior(s)
    assert not c.in_interior(s[:2])


def test_product_arity():
    t = make_regular_tree(3)
    with pytest.raises(ValueError):
        product([t])
    with pytest.raises(ValueError):
        product([t] * 4)
