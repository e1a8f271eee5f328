"""Tail schemes on rooted trees and the prism sweep along tails.

A tail of v is the descending path v = u_0 > u_-1 > u_-2 > ... Under the
child < parent orientation it runs away from the root, so truncating it at
the window radius only leaves residue at the frontier.
"""

from __future__ import annotations

import numpy as np

from .certificate import ReductionCertificate, Stage
from .chains import Chain, accumulate, boundary
from .complexes import OrderedComplex, RootedTree, Window
from .product import ProductComplex, PVertex


class BoundedSchemeUnavailable(ValueError):
    def __init__(self, vertex, msg: str):
        super().__init__(msg)
        self.vertex = vertex


class TailScheme:
    """Routing rule: first step to child ``first``, then always to child ``then``."""

    def __init__(self, tree: RootedTree, first: int, then: int, name: str, bounded: bool):
        self.tree = tree
        self.bounded = bounded
        self.first = first
        self.then = then
        self.name = name
        self._cache: dict[tuple[int, int], tuple[int, ...]] = {}

    def __repr__(self):
        return f"TailScheme({self.name!r} on {self.tree.name})"

    def tail(self, v: int, radius: int) -> tuple[int, ...]:
        """(u_0, u_-1, ..., u_-K): the tail of v truncated to the ball of ``radius``."""
        key = (v, radius)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        t = self.tree
        d = t.depth(v)
        out = [v]
        i = self.first
        while d < radius:
            v = t.child(v, i)
            out.append(v)
            d += 1
            i = self.then
        res = tuple(out)
        self._cache[key] = res
        return res

    def multiplicity(self, window: Window | int) -> np.ndarray:
        """T(e) for every edge in the ball, indexed by the edge's child endpoint."""
        radius = window.radius if isinstance(window, Window) else window
        t = self.tree
        n = t.ball_size(radius)
        starts = np.array([t.level_start(d) for d in range(radius + 2)], dtype=np.int64)
        branch = np.array([t.children_count(d) for d in range(radius + 1)], dtype=np.int64)
        counts = np.zeros(n, dtype=np.int64)
        cur = np.arange(n, dtype=np.int64)
        depth = np.searchsorted(starts, cur, side="right") - 1
        idx = self.first
        while True:
            live = depth < radius
            cur, depth = cur[live], depth[live]
            if cur.size == 0:
                break
            cur = starts[depth + 1] + (cur - starts[depth]) * branch[depth] + idx
            depth = depth + 1
            counts += np.bincount(cur, minlength=n)
            idx = self.then
        return counts

    def max_multiplicity(self, window: Window | int) -> int:
        m = self.multiplicity(window)
        return int(m.max()) if m.size else 0

    def multiplicity_json(self, window: Window | int) -> dict[str, int]:
        """{"/child</parent": count} for every edge some tail passes through."""
        t = self.tree
        m = self.multiplicity(window)
        return {edge_key(t, v, t.parent(v)): int(m[v]) for v in np.nonzero(m)[0].tolist()}


def tree_tail_scheme(t: OrderedComplex) -> TailScheme:
    if not isinstance(t, RootedTree):
        raise BoundedSchemeUnavailable(None, f"{t!r} is not a rooted tree; no bounded tail scheme is known")
    depths = range(len(t.branching) + 1)
    for d in depths:
        if t.children_count(d) < 2:
            v = t.level_start(d)
            raise BoundedSchemeUnavailable(
                t.path(v), f"vertex {_fmt(t.path(v))} of {t.name} has {t.children_count(d)} child; "
                "the bounded tail scheme needs at least 2 children everywhere"
            )
    return TailScheme(t, 0, 1, "tree", bounded=True)


def naive_line_tails(line: RootedTree, window: Window | None = None) -> TailScheme:
    if not isinstance(line, RootedTree) or line.kind != "line":
        raise ValueError("naive_line_tails needs the line complex")
    return TailScheme(line, 0, 0, "naive", bounded=False)


def _fmt(path) -> str:
    return "/" + "/".join(map(str, path))


def edge_key(t: OrderedComplex, lo: int, hi: int) -> str:
    return f"{_fmt(t.path(lo))}<{_fmt(t.path(hi))}"


# -- sweeps -------------------------------------------------------------------


def sweep(c: Chain, factor: int, scheme: TailScheme, radius: int) -> Chain:
    """Prism of every simplex of ``c`` along the tail of its constant ``factor`` coordinate.

    For s = [v0..vn] with tail u_0 > u_-1 > ... > u_-K the result carries
    sum_k sum_i (-1)^i [v0(u_{k-1})..vi(u_{k-1}), vi(u_k)..vn(u_k)], so
    d(sweep s) = s - s(u_-K) - sweep(d s).
    """
    n = c.degree
    f = factor

    def terms():
        for s, a in c.items():
            x = s[0][f]
            if s[-1][f] != x:
                raise ValueError(f"simplex is not constant in factor {f}")
            tail = scheme.tail(x, radius)
            for hi, lo in zip(tail, tail[1:]):
                lows = [v[:f] + (lo,) + v[f + 1 :] for v in s]
                highs = [v[:f] + (hi,) + v[f + 1 :] for v in s]
                for i in range(n + 1):
                    yield tuple(lows[: i + 1] + highs[i:]), (a if i % 2 == 0 else -a)

    return accumulate(n + 1, terms())


def lift_tail(
    scheme: TailScheme, factor: int, base: PVertex, window: Window | int, product: ProductComplex | None = None
) -> Chain:
    """The factor-``factor`` tail of ``base`` with the other coordinates frozen."""
    radius = window.radius if isinstance(window, Window) else window
    if product is not None:
        outside = product.vertex_depth(base) > radius
    else:
        outside = scheme.tree.depth(base[factor]) > radius
    if outside:
        raise ValueError(f"base {base} lies outside the radius-{radius} window")
    return sweep(Chain(0, {(base,): 1}), factor, scheme, radius)


def fundamental_class_certificate(x: OrderedComplex, scheme: TailScheme, window: Window) -> ReductionCertificate:
    """Certify that the sum of truncated tails bounds the fundamental 0-chain on the interior."""
    p = ProductComplex([x])
    r = window.radius
    fund = Chain(0, {((v,),): 1 for v in x.ball(r)})
    tails = sweep(fund, 0, scheme, r)
    residual = fund - boundary(tails) if tails else fund
    stage = Stage("tails", tails, residual, window.interior_radius)
    stage.max_tail_multiplicity = scheme.max_multiplicity(window)
    # the leftover must sit on the frontier shell
    stage.postcondition = all(x.depth(s[0][0]) == r for s in residual)
    cert = ReductionCertificate(p, window, fund, window.interior_radius, [stage])
    cert.flags["scheme"] = scheme.name
    cert.flags["uniform"] = scheme.bounded
    cert.flags["tail_sum_norm"] = str(tails.sup_norm)
    return cert
