"""Degree-2 vanishing on 3-fold tree products: diagonals, then x-, y- and z-simplices."""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Sequence

from .certificate import ReductionCertificate, Stage
from .chains import Chain, accumulate, boundary, is_cycle_on, restrict
from .complexes import Window
from .product import ProductComplex, TriClass, classify_tri, moving
from .reduce_h1 import NotACycleError, _paths, _radius, frontier_gap, stage_radii
from .tails import BoundedSchemeUnavailable, TailScheme, sweep, tree_tail_scheme

# middle vertex of sigma_0..sigma_5 around a long diagonal, as the set of coordinates already moved
SIGMA_MOVES = ((0,), (0, 1), (1,), (1, 2), (2,), (0, 2))
# the two middle vertices of tau_0..tau_4; tau_i has sigma_i and sigma_{i+1} as faces
TAU_MOVES = (((0,), (0, 1)), ((1,), (0, 1)), ((1,), (1, 2)), ((2,), (1, 2)), ((2,), (0, 2)))
_SIGMA_INDEX = {m: i for i, m in enumerate(SIGMA_MOVES)}
_CLASS = (TriClass.X, TriClass.Y, TriClass.Z)


def _mix(lo, hi, moved) -> tuple:
    return tuple(hi[j] if j in moved else lo[j] for j in range(3))


def sigma(lo, hi, i: int) -> tuple:
    return (lo, _mix(lo, hi, SIGMA_MOVES[i]), hi)


def tau(lo, hi, i: int) -> tuple:
    a, b = TAU_MOVES[i]
    return (lo, _mix(lo, hi, a), _mix(lo, hi, b), hi)


def diagonal_coefficients(c: Chain) -> dict[tuple, list]:
    """Long diagonal -> [c_0..c_5] read from the diagonal 2-simplices of ``c``."""
    out: dict[tuple, list] = defaultdict(lambda: [0] * 6)
    for s, a in c.items():
        if classify_tri(s) is TriClass.DIAGONAL:
            lo, mid, hi = s
            out[(lo, hi)][_SIGMA_INDEX[moving((lo, mid))]] += a
    return out


def kill_diagonal_tris(p: ProductComplex, c: Chain, window: Window, *, interior_radius: int | None = None) -> Stage:
    r = _radius(window, interior_radius)
    inside = p.inside(r)
    if not is_cycle_on(c, inside):
        raise NotACycleError(f"input is not a cycle on the radius-{r} interior")
    st = Stage("D", Chain.zero(3), c, r)
    terms = []
    checked = 0
    for (lo, hi), cs in sorted(diagonal_coefficients(c).items()):
        d = [sum(cs[: i + 1]) for i in range(5)]
        for i in range(5):
            if d[i]:
                terms.append((tau(lo, hi, i), d[i] if i % 2 == 0 else -d[i]))
        if inside((lo, hi)):
            checked += 1
            if sum(cs):
                st.fail(f"cycle condition fails at long diagonal [{_paths(p, lo)}, {_paths(p, hi)}]: sum {sum(cs)}")
            elif d[4] != -cs[5]:
                st.fail(f"d4 != -c5 at long diagonal [{_paths(p, lo)}, {_paths(p, hi)}]")
        elif sum(cs):
            st.warnings += 1
    psi = accumulate(3, terms)
    st.constructed = psi
    st.residual = c - boundary(psi) if psi else c
    st.checks["long_diagonals_checked"] = checked
    st.checks["d4_identity_checked"] = checked
    not_diag = lambda s: classify_tri(s) is TriClass.DIAGONAL
    st.postcondition = not any(inside(s) for s in st.residual if not_diag(s))
    st.checks["frontier_gap"] = frontier_gap(p, st.residual, window, not_diag)
    return st


def _edge_moves(e) -> tuple[int, ...]:
    return moving(e)


def _sweep_stage(
    name: str,
    p: ProductComplex,
    c: Chain,
    factor: int,
    scheme: TailScheme,
    window: Window,
    r: int,
    conditions: dict[str, Sequence[tuple[int, ...]]],
    allowed: set[TriClass],
) -> Stage:
    """Sweep every simplex constant in ``factor`` along its tail.

    ``conditions`` maps a label to the moving-coordinate patterns of faces whose
    boundary coefficient must vanish, because their sweep would land in a class
    the stage must not produce.
    """
    inside = p.inside(r)
    part = restrict(c, lambda s: classify_tri(s) is _CLASS[factor])
    psi = sweep(part, factor, scheme, window.radius)
    b = c - boundary(psi) if psi else c
    st = Stage(name, psi, b, r, max_tail_multiplicity=scheme.max_multiplicity(window))
    flux = boundary(part) if part else Chain.zero(1)
    patterns = {pat: label for label, pats in conditions.items() for pat in pats}
    counted = defaultdict(int)
    for e in sorted(_faces(part)):
        label = patterns.get(_edge_moves(e))
        if label is None:
            continue
        a = flux[e]
        if inside(e):
            counted[label] += 1
            if a:
                st.fail(f"{label} condition fails at face [{_paths(p, e[0])}, {_paths(p, e[1])}]: {a}")
        elif a:
            st.warnings += 1
    for label in conditions:
        st.checks[f"{label}_faces_checked"] = counted[label]
    bad = lambda s: classify_tri(s) not in allowed
    st.postcondition = not any(inside(s) and bad(s) for s in b)
    st.checks["frontier_gap"] = frontier_gap(p, b, window, bad)
    return st


def _faces(c: Chain) -> set:
    return {s[:i] + s[i + 1 :] for s in c for i in range(len(s))}


def kill_x_simplices(
    p: ProductComplex, c: Chain, scheme_x: TailScheme, window: Window, *, interior_radius: int | None = None
) -> Stage:
    r = _radius(window, interior_radius)
    return _sweep_stage("X", p, c, 0, scheme_x, window, r, {"pairing": [(1, 2)]}, {TriClass.Y, TriClass.Z})


def kill_y_simplices(
    p: ProductComplex, c: Chain, scheme_y: TailScheme, window: Window, *, interior_radius: int | None = None
) -> Stage:
    r = _radius(window, interior_radius)
    conds = {"pairing": [(0, 2)], "aggregate": [(2,)]}
    return _sweep_stage("Y", p, c, 1, scheme_y, window, r, conds, {TriClass.Z})


def bound_class_chain(
    p: ProductComplex, c: Chain, factor: int, scheme: TailScheme, window: Window, *, interior_radius: int | None = None
) -> Stage:
    """Bound a chain made only of simplices constant in ``factor``; every face must have zero flux."""
    r = _radius(window, interior_radius)
    others = tuple(j for j in range(3) if j != factor)
    conds = {"cycle": [(others[0],), (others[1],), others]}
    return _sweep_stage("XYZ"[factor], p, c, factor, scheme, window, r, conds, set())


def bound_z_chain(
    p: ProductComplex, c: Chain, scheme_z: TailScheme, window: Window, *, interior_radius: int | None = None
) -> Stage:
    return bound_class_chain(p, c, 2, scheme_z, window, interior_radius=interior_radius)


def reduce_h2(
    p: ProductComplex, c: Chain, window: Window, schemes: Sequence[TailScheme] | None = None
) -> ReductionCertificate:
    """Run D -> X -> Y -> Z and certify that c bounds on the interior."""
    if p.arity != 3:
        raise ValueError("reduce_h2 needs a 3-fold product")
    cert = ReductionCertificate(p, window, c, window.interior_radius)
    radii = stage_radii(window, 4)
    try:
        if schemes is None:
            schemes = [tree_tail_scheme(f) for f in p.factors]
    except BoundedSchemeUnavailable as exc:
        cert.errors.append(f"bounded-scheme-unavailable: {exc}")
        return cert
    sx, sy, sz = schemes
    try:
        d = kill_diagonal_tris(p, c, window, interior_radius=radii[0])
    except NotACycleError as exc:
        cert.errors.append(f"not-a-cycle: {exc}")
        return cert
    cert.stages.append(d)
    x = kill_x_simplices(p, d.residual, sx, window, interior_radius=radii[1])
    cert.stages.append(x)
    y = kill_y_simplices(p, x.residual, sy, window, interior_radius=radii[2])
    cert.stages.append(y)
    cert.stages.append(bound_z_chain(p, y.residual, sz, window, interior_radius=radii[3]))
    return cert
