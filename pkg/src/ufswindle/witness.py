"""Geodesic-product cycles and the fundamental 0-chain."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .chains import Chain, accumulate
from .complexes import OrderedComplex, RootedTree, Window
from .product import ProductComplex


class WitnessSpecError(ValueError):
    pass


@dataclass(frozen=True)
class GeodesicSpec:
    """Two rays leaving ``apex`` through children ``a`` and ``b``; each continues via child 0."""

    a: int
    b: int
    apex: tuple[int, ...] = ()

    def __post_init__(self):
        if self.a == self.b:
            raise WitnessSpecError(f"geodesic rays coincide (both through child {self.a})")
        if min(self.a, self.b) < 0:
            raise WitnessSpecError("branch indices must be non-negative")

    @classmethod
    def parse(cls, text: str) -> "GeodesicSpec":
        """"a|b" at the root, or "p.q.r@a|b" at the apex with root path p/q/r."""
        apex_txt, _, pair = text.strip().rpartition("@")
        try:
            a, b = (int(x) for x in pair.split("|"))
            apex = tuple(int(x) for x in apex_txt.split(".")) if apex_txt else ()
        except ValueError:
            raise WitnessSpecError(f"bad geodesic spec {text!r}; expected like '0|1' or '0.2@0|1'") from None
        return cls(a, b, apex)

    def __str__(self):
        head = ".".join(map(str, self.apex)) + "@" if self.apex else ""
        return f"{head}{self.a}|{self.b}"

    def vertices(self, t: RootedTree, radius: int) -> list[int]:
        """Geodesic vertices inside the ball, from the deep end of ray b through the apex to ray a."""
        apex = t.vertex(self.apex)
        if t.depth(apex) > radius:
            return []

        def ray(i):
            out, v = [], apex
            first = True
            while t.depth(v) < radius:
                v = t.child(v, i if first else 0)
                first = False
                out.append(v)
            return out

        return ray(self.b)[::-1] + [apex] + ray(self.a)

    def signed_edges(self, t: RootedTree, radius: int) -> list[tuple[int, int, int]]:
        """(lesser, greater, eps): eps = +1 if traversal goes from lesser to greater."""
        vs = self.vertices(t, radius)
        out = []
        for u, v in zip(vs, vs[1:]):
            if v in t.above(u):
                out.append((u, v, 1))
            else:
                out.append((v, u, -1))
        return out


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    for i, j in itertools.combinations(range(len(perm)), 2):
        if perm[i] > perm[j]:
            sign = -sign
    return sign


def cell_chain_terms(cell: Sequence[tuple[int, ...]], weight: int = 1):
    """Shuffle triangulation of a product cell; each factor is (v,) or (lo, hi)."""
    edges = [i for i, c in enumerate(cell) if len(c) == 2]
    lo = tuple(c[0] for c in cell)
    for perm in itertools.permutations(range(len(edges))):
        cur = list(lo)
        verts = [tuple(cur)]
        for p in perm:
            cur[edges[p]] = cell[edges[p]][1]
            verts.append(tuple(cur))
        yield tuple(verts), weight * _perm_sign(perm)


def geodesic_slice_cycle(
    specs: Sequence[GeodesicSpec], p: ProductComplex, window: Window | int, fixed: Sequence[int] = ()
) -> Chain:
    """Product of geodesics in the first len(specs) factors, remaining factors pinned at ``fixed`` (default root)."""
    radius = window.radius if isinstance(window, Window) else window
    k = len(specs)
    if k + len(fixed) > p.arity:
        raise ValueError("more geodesics and pinned vertices than factors")
    fixed = list(fixed) + [f.root for f in p.factors[k + len(fixed) :]]
    for f in p.factors[:k]:
        if not isinstance(f, RootedTree):
            raise WitnessSpecError("geodesic witnesses need rooted-tree factors")
    per_factor = [spec.signed_edges(f, radius) for spec, f in zip(specs, p.factors)]
    pins = [(v,) for v in fixed]

    def terms():
        for combo in itertools.product(*per_factor):
            w = 1
            for _, _, e in combo:
                w *= e
            cell = [(lo, hi) for lo, hi, _ in combo] + pins
            yield from cell_chain_terms(cell, w)

    return accumulate(k, terms())


def geodesic_product_cycle(specs: Sequence[GeodesicSpec], p: ProductComplex, window: Window | int) -> Chain:
    if len(specs) != p.arity:
        raise ValueError(f"need one geodesic per factor ({p.arity}), got {len(specs)}")
    return geodesic_slice_cycle(specs, p, window)


def fundamental_zero_chain(x: OrderedComplex | ProductComplex, window: Window | int) -> Chain:
    if isinstance(x, OrderedComplex):
        x = ProductComplex([x])
    return Chain(0, {(v,): 1 for v in x.vertices_in(window)})


def top_degree_empty(p: ProductComplex, window: Window | int) -> bool:
    """No (arity+1)-simplices exist, so no top-degree cycle can bound."""
    return next(iter(p.simplices_in(p.arity + 1, window)), None) is None
