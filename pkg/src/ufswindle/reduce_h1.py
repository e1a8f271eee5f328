"""Degree-1 vanishing on 2-fold products: diagonals, then horizontals, then verticals."""

from __future__ import annotations

from collections.abc import Sequence

from .certificate import ReductionCertificate, Stage
from .chains import Chain, accumulate, boundary, is_cycle_on, restrict
from .complexes import Window
from .product import EdgeClass, ProductComplex, classify_edge
from .tails import BoundedSchemeUnavailable, TailScheme, sweep, tree_tail_scheme


class NotACycleError(ValueError):
    pass


def _radius(window: Window, interior_radius: int | None) -> int:
    return window.interior_radius if interior_radius is None else interior_radius


def frontier_gap(p: ProductComplex, c: Chain, window: Window, bad=None) -> int:
    """Distance from the frontier to the deepest-inside simplex of ``c`` violating a stage postcondition.

    ``bad`` selects the violating simplices (all of them when None); 0 means
    every violation touches the frontier shell.
    """
    depths = [p.vertex_depth(s[0]) for s in c if bad is None or bad(s)]
    return window.radius - min(depths) if depths else 0


def _of_class(c: Chain, cls: EdgeClass) -> Chain:
    return restrict(c, lambda s: classify_edge(s) is cls)


def kill_diagonals(p: ProductComplex, c: Chain, window: Window, *, interior_radius: int | None = None) -> Stage:
    """Replace each diagonal edge by the two sides of its square: b = c - d(phi)."""
    r = _radius(window, interior_radius)
    inside = p.inside(r)
    if not is_cycle_on(c, inside):
        raise NotACycleError(f"input is not a cycle on the radius-{r} interior")
    terms = []
    for s, a in c.items():
        (x, y), (x2, y2) = s
        if x != x2 and y != y2:
            terms.append((((x, y), (x, y2), (x2, y2)), -a))
    phi = accumulate(2, terms)
    b = c - boundary(phi) if phi else c
    st = Stage("D", phi, b, r)
    st.postcondition = not any(inside(s) for s in _of_class(b, EdgeClass.DIAGONAL))
    st.checks["frontier_gap"] = frontier_gap(p, b, window, lambda s: classify_edge(s) is EdgeClass.DIAGONAL)
    return st


def kill_horizontals(
    p: ProductComplex, c: Chain, scheme_y: TailScheme, window: Window, *, interior_radius: int | None = None
) -> Stage:
    """Attach the Y-panel of every horizontal edge, weighted by its coefficient."""
    r = _radius(window, interior_radius)
    inside = p.inside(r)
    if any(inside(s) for s in _of_class(c, EdgeClass.DIAGONAL)):
        raise ValueError("kill_horizontals needs an input without interior diagonal edges")
    phi = sweep(_of_class(c, EdgeClass.HORIZONTAL), 1, scheme_y, window.radius)
    b = c - boundary(phi) if phi else c
    st = Stage("H", phi, b, r, max_tail_multiplicity=scheme_y.max_multiplicity(window))
    st.postcondition = all(not inside(s) or classify_edge(s) is EdgeClass.VERTICAL for s in b)
    st.checks["frontier_gap"] = frontier_gap(p, b, window, lambda s: classify_edge(s) is not EdgeClass.VERTICAL)
    return st


def vertical_flux(c: Chain) -> dict:
    """d(c) at each vertex; for a vertical chain this is the per-vertex cycle condition."""
    return boundary(c).as_dict() if c else {}


def bound_verticals(
    p: ProductComplex, c: Chain, scheme_x: TailScheme, window: Window, *, interior_radius: int | None = None
) -> Stage:
    """Attach the X-panel of every vertical edge; the tail terms cancel by the cycle condition."""
    r = _radius(window, interior_radius)
    inside = p.inside(r)
    vert = _of_class(c, EdgeClass.VERTICAL)
    phi = sweep(vert, 0, scheme_x, window.radius)
    b = c - boundary(phi) if phi else c
    st = Stage("V", phi, b, r, max_tail_multiplicity=scheme_x.max_multiplicity(window))
    for (v,), a in sorted(vertical_flux(vert).items()):
        if inside((v,)):
            st.fail(f"cycle condition fails at vertex {_paths(p, v)} (flux {a})")
        else:
            st.warnings += 1
    st.checks["vertices_checked"] = sum(1 for v in _vertices(vert) if inside((v,)))
    st.postcondition = not any(inside(s) for s in b)
    st.checks["frontier_gap"] = frontier_gap(p, b, window)
    return st


def _vertices(c: Chain) -> set:
    return {v for s in c for v in s}


def _paths(p: ProductComplex, v) -> str:
    return "(" + ", ".join("/" + "/".join(map(str, f.path(x))) for f, x in zip(p.factors, v)) + ")"


def stage_radii(window: Window, n_stages: int) -> list[int]:
    step = window.margin // n_stages
    if step < 1:
        raise ValueError(f"margin {window.margin} is too small for {n_stages} stages (need at least 1 per stage)")
    return [window.radius - step * (j + 1) for j in range(n_stages)]


def reduce_h1(
    p: ProductComplex, c: Chain, window: Window, schemes: Sequence[TailScheme] | None = None
) -> ReductionCertificate:
    """Run D -> H -> V and certify that c bounds on the interior."""
    if p.arity != 2:
        raise ValueError("reduce_h1 needs a 2-fold product")
    cert = ReductionCertificate(p, window, c, window.interior_radius)
    radii = stage_radii(window, 3)
    try:
        if schemes is None:
            schemes = [tree_tail_scheme(f) for f in p.factors]
    except BoundedSchemeUnavailable as exc:
        cert.errors.append(f"bounded-scheme-unavailable: {exc}")
        return cert
    sx, sy = schemes
    try:
        d = kill_diagonals(p, c, window, interior_radius=radii[0])
    except NotACycleError as exc:
        cert.errors.append(f"not-a-cycle: {exc}")
        return cert
    cert.stages.append(d)
    h = kill_horizontals(p, d.residual, sy, window, interior_radius=radii[1])
    cert.stages.append(h)
    cert.stages.append(bound_verticals(p, h.residual, sx, window, interior_radius=radii[2]))
    return cert
