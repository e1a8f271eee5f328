import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import ExplicitTree, tail_multiplicities
from ufswindle.chains import Chain, accumulate, boundary
from ufswindle.complexes import Window, make_line, make_regular_tree, make_tree
from ufswindle.product import EdgeClass, ProductComplex, TriClass, classify_edge, classify_tri
from ufswindle.tails import (
    BoundedSchemeUnavailable,
    fundamental_class_certificate,
    lift_tail,
    naive_line_tails,
    sweep,
    tree_tail_scheme,
)

T3 = make_regular_tree(3)
R = 6


def oracle_tail(tree: ExplicitTree, v, radius, first=0, then=1):
    out, i = [v], first
    while tree.depth[v] < radius:
        v = tree.children[v][i]
        out.append(v)
        i = then
    return out


@pytest.mark.parametrize("degrees", [[3], [4], [5], [3, 4]])
def test_multiplicity_matches_explicit_walk(degrees):
    t = make_tree(degrees)
    m = tree_tail_scheme(t).multiplicity(8)
    oracle = tail_multiplicities(ExplicitTree(degrees, 8), 8, 0, 1)
    assert {v: int(c) for v, c in enumerate(m) if c} == dict(oracle)
    assert m.max() == 1


def test_root_tail_route():
    tail = tree_tail_scheme(T3).tail(0, 4)
    assert [T3.path(v) for v in tail] == [(), (0,), (0, 1), (0, 1, 1), (0, 1, 1, 1)]


def test_line_has_no_bounded_scheme():
    with pytest.raises(BoundedSchemeUnavailable) as exc:
        tree_tail_scheme(make_line())
    assert exc.value.vertex == (0,)  # the root has two children, its children one


@pytest.mark.parametrize("radius", [5, 10])
def test_naive_line_multiplicity(radius):
    ln = make_line()
    m = naive_line_tails(ln).multiplicity(radius)
    oracle = tail_multiplicities(ExplicitTree([2], radius), radius, 0, 0)
    assert {v: int(c) for v, c in enumerate(m) if c} == dict(oracle)
    assert m.max() == radius


def test_naive_line_slope_is_one():
    ln = make_line()
    radii = np.arange(4, 13)
    peaks = [naive_line_tails(ln).max_multiplicity(int(r)) for r in radii]
    slope, intercept = np.polyfit(radii, peaks, 1)
    assert peaks == list(radii)
    assert round(slope, 9) == 1.0


def test_multiplicity_json_keys():
    table = tree_tail_scheme(T3).multiplicity_json(2)
    assert table["/0</"] == 1
    assert set(table.values()) == {1}


@pytest.mark.parametrize("f", [0, 1])
def test_lift_tail_telescopes(p2, f):
    scheme = tree_tail_scheme(T3)
    base = (4, 2)
    t = lift_tail(scheme, f, base, Window(R), p2)
    end = scheme.tail(base[f], R)[-1]
    far = base[:f] + (end,) + base[f + 1 :]
    assert boundary(t) == Chain(0, {(base,): 1, (far,): -1})
    cls = EdgeClass.HORIZONTAL if f == 0 else EdgeClass.VERTICAL
    assert all(classify_edge(e) is cls for e in t)


def test_lifts_with_different_frozen_coordinates_are_disjoint(p2):
    scheme = tree_tail_scheme(T3)
    a = lift_tail(scheme, 1, (4, 2), R, p2)
    b = lift_tail(scheme, 1, (5, 2), R, p2)
    assert not (a.support() & b.support())


def test_lift_outside_window_rejected(p2):
    with pytest.raises(ValueError):
        lift_tail(tree_tail_scheme(T3), 1, (T3.ball(4)[-1], 0), 3, p2)


@pytest.mark.parametrize("q,radius", [(3, 8), (4, 6)])
def test_fundamental_class_certificate(q, radius):
    t = make_regular_tree(q)
    cert = fundamental_class_certificate(t, tree_tail_scheme(t), Window(radius, 2))
    assert cert.verdict == "OK"
    assert cert.flags["tail_sum_norm"] == "1"
    assert cert.recheck()


def test_fundamental_class_on_line_grows():
    ln = make_line()
    norms = []
    for r in (4, 6, 8):
        cert = fundamental_class_certificate(ln, naive_line_tails(ln), Window(r, 2))
        assert cert.verdict == "OK"
        assert cert.flags["uniform"] is False
        norms.append(int(cert.flags["tail_sum_norm"]))
    assert norms == [4, 6, 8]


# -- panels and beams against the explicit formulas ---------------------------


def test_panel_boundary_formula(p2):
    """Truncated Y-panel of [(x,y),(x',y)] equals sum of the two triangles per tail step."""
    scheme = tree_tail_scheme(T3)
    oracle = ExplicitTree([3], R)
    rng = random.Random(7)
    edges = [(a, b) for a, b in T3.edges_in(R - 1)]
    for _ in range(100):
        x, x1 = rng.choice(edges)
        y = rng.choice(T3.ball(R - 1))
        sh = ((x, y), (x1, y))
        ys = oracle_tail(oracle, y, R)
        expected = accumulate(2, (
            term
            for yk, ykm in zip(ys, ys[1:])
            for term in ((((x, ykm), (x, yk), (x1, yk)), 1), (((x, ykm), (x1, ykm), (x1, yk)), -1))
        ))
        panel = sweep(Chain(1, {sh: 1}), 1, scheme, R)
        assert panel == expected
        t = accumulate(1, ((((x, b), (x, a)), 1) for a, b in zip(ys, ys[1:])))
        t1 = accumulate(1, ((((x1, b), (x1, a)), 1) for a, b in zip(ys, ys[1:])))
        rest = boundary(panel) - Chain(1, {sh: 1}) - t + t1
        assert len(rest) == 1
        (frontier, coeff), = rest.items()
        assert coeff == -1
        assert frontier == ((x, ys[-1]), (x1, ys[-1]))
        assert T3.depth(ys[-1]) == R


def test_beam_formula(p3):
    """Beam = tau0 - tau1 + tau2 per step, boundary = sigma - p0 + p1 - p2 + frontier."""
    scheme = tree_tail_scheme(T3)
    oracle = ExplicitTree([3], R)
    rng = random.Random(11)
    edges = T3.edges_in(R - 1)
    for _ in range(30):
        x = rng.choice(T3.ball(R - 1))
        (y, y1), (z, z1) = rng.choice(edges), rng.choice(edges)
        sx = ((x, y, z), (x, y1, z), (x, y1, z1))
        assert classify_tri(sx) is TriClass.X
        xs = oracle_tail(oracle, x, R)
        steps = list(zip(xs, xs[1:]))  # (x_k, x_{k-1})
        beam = accumulate(3, (
            term
            for xk, xm in steps
            for term in (
                (((xm, y, z), (xk, y, z), (xk, y1, z), (xk, y1, z1)), 1),
                (((xm, y, z), (xm, y1, z), (xk, y1, z), (xk, y1, z1)), -1),
                (((xm, y, z), (xm, y1, z), (xm, y1, z1), (xk, y1, z1)), 1),
            )
        ))
        assert sweep(Chain(2, {sx: 1}), 0, scheme, R) == beam

        def panel(a, b):
            return accumulate(2, (
                term
                for xk, xm in steps
                for term in (
                    (((xm,) + a, (xk,) + a, (xk,) + b), 1),
                    (((xm,) + a, (xm,) + b, (xk,) + b), -1),
                )
            ))

        p0 = panel((y1, z), (y1, z1))
        p1 = panel((y, z), (y1, z1))
        p2_ = panel((y, z), (y1, z))
        rest = boundary(beam) - Chain(2, {sx: 1}) + p0 - p1 + p2_
        bottom = tuple((xs[-1],) + v[1:] for v in sx)
        assert rest == Chain(2, {bottom: -1})


@st.composite
def horizontal_chains(draw):
    edges = T3.edges_in(R - 1)
    ys = T3.ball(R - 1)
    picks = draw(st.lists(st.tuples(st.sampled_from(edges), st.sampled_from(ys), st.integers(-3, 3)), max_size=8))
    return Chain(1, [(((a, y), (b, y)), c) for (a, b), y, c in picks])


@given(horizontal_chains())
def test_prism_identity(c):
    scheme = tree_tail_scheme(T3)
    if not c:
        return
    P = sweep(c, 1, scheme, R)
    bottom = Chain(1, [(tuple((v[0], scheme.tail(s[0][1], R)[-1]) for v in s), a) for s, a in c.items()])
    assert boundary(P) == c - bottom - sweep(boundary(c), 1, scheme, R)
