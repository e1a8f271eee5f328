"""Triangulated products of ordered complexes.

A product vertex is a tuple of factor vertices; a simplex is a strictly
increasing tuple of product vertices in the coordinatewise order whose
coordinate sets are simplices of the factors.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .complexes import OrderedComplex, RootedTree, Window

PVertex = tuple[int, ...]
Simplex = tuple[PVertex, ...]


class EdgeClass(str, enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    DIAGONAL = "diagonal"


class TriClass(str, enum.Enum):
    X = "x-simplex"
    Y = "y-simplex"
    Z = "z-simplex"
    DIAGONAL = "diagonal"


class ProductComplex:
    def __init__(self, factors: Sequence[OrderedComplex]):
        self.factors = tuple(factors)
        self.arity = len(self.factors)

    def __repr__(self):
        return "ProductComplex(" + " x ".join(getattr(f, "name", f.kind) for f in self.factors) + ")"

    # -- regions ---------------------------------------------------------

    def vertex_depth(self, v: PVertex) -> int:
        return max(f.depth(c) for f, c in zip(self.factors, v))

    def inside(self, radius: int):
        """Predicate: every vertex of the simplex has all coordinates within ``radius``."""
        depths = [f.depth for f in self.factors]
        if all(isinstance(f, RootedTree) for f in self.factors):
            # on trees the least vertex is the deepest in every coordinate
            def pred(s: Simplex) -> bool:
                return all(d(c) <= radius for d, c in zip(depths, s[0]))
        else:
            def pred(s: Simplex) -> bool:
                return all(d(c) <= radius for v in s for d, c in zip(depths, v))

        return pred

    def vertices_in(self, window: Window | int) -> Iterator[PVertex]:
        radius = window.radius if isinstance(window, Window) else window
        return itertools.product(*(f.ball(radius) for f in self.factors))

    # -- enumeration -----------------------------------------------------

    def extensions(self, top: PVertex, used: tuple[frozenset, ...], radius: int | None) -> Iterator[PVertex]:
        """Vertices strictly above ``top`` that keep every coordinate set a factor simplex."""
        options = []
        for f, c, u in zip(self.factors, top, used):
            opts = [c]
            for w in f.above(c):
                if radius is not None and f.depth(w) > radius:
                    continue
                if f.is_simplex(u | {w}):
                    opts.append(w)
            options.append(opts)
        for combo in itertools.product(*options):
            if combo != top:
                yield combo

    def simplices_from(self, base: PVertex, n: int, radius: int | None = None) -> Iterator[Simplex]:
        """All n-simplices whose least vertex is ``base``."""
        if n == 0:
            yield (base,)
            return
        used0 = tuple(frozenset((c,)) for c in base)
        dims = [f.dimension for f in self.factors]

        def grow(chain, used):
            if len(chain) == n + 1:
                yield tuple(chain)
                return
            # each step moves some coordinate up inside a factor simplex
            if sum(d + 1 - len(u) for d, u in zip(dims, used)) < n + 1 - len(chain):
                return
            for nxt in self.extensions(chain[-1], used, radius):
                chain.append(nxt)
                yield from grow(chain, tuple(u | {c} for u, c in zip(used, nxt)))
                chain.pop()

        yield from grow([base], used0)

    def simplices_in(self, n: int, window: Window | int) -> Iterator[Simplex]:
        radius = window.radius if isinstance(window, Window) else window
        if n < 0:
            return
        for base in self.vertices_in(radius):
            yield from self.simplices_from(base, n, radius)

    def cubes_in(self, k: int, window: Window | int) -> Iterator["Cube"]:
        radius = window.radius if isinstance(window, Window) else window
        if k > self.arity or k < 1:
            return
        per_factor = []
        for f in self.factors:
            per_factor.append(([(v,) for v in f.ball(radius)], f.edges_in(radius)))
        for mask in itertools.combinations(range(self.arity), k):
            lists = [per_factor[i][1] if i in mask else per_factor[i][0] for i in range(self.arity)]
            for coords in itertools.product(*lists):
                yield Cube(tuple(coords))


def product(factors: Sequence[OrderedComplex]) -> ProductComplex:
    if len(factors) not in (2, 3):
        raise ValueError(f"product arity must be 2 or 3, got {len(factors)}")
    return ProductComplex(factors)


def moving(s: Simplex) -> tuple[int, ...]:
    """Indices of the coordinates that are not constant along the simplex."""
    first, last = s[0], s[-1]
    return tuple(i for i, (a, b) in enumerate(zip(first, last)) if a != b)


def classify_edge(e: Simplex) -> EdgeClass:
    if len(e) != 2:
        raise ValueError(f"classify_edge needs a 1-simplex, got degree {len(e) - 1}")
    (x0, y0), (x1, y1) = e
    if y0 == y1:
        return EdgeClass.HORIZONTAL
    if x0 == x1:
        return EdgeClass.VERTICAL
    return EdgeClass.DIAGONAL


_TRI = (TriClass.X, TriClass.Y, TriClass.Z)


def classify_tri(s: Simplex) -> TriClass:
    if len(s) != 3:
        raise ValueError(f"classify_tri needs a 2-simplex, got degree {len(s) - 1}")
    if len(s[0]) != 3:
        raise ValueError("classify_tri needs a 3-fold product simplex")
    # a coordinate is constant along a simplex iff it agrees at both ends
    for i in range(3):
        if s[0][i] == s[2][i]:
            return _TRI[i]
    return TriClass.DIAGONAL


@dataclass(frozen=True)
class Cube:
    """Per factor either ``(v,)`` (a vertex) or ``(lo, hi)`` (an oriented edge)."""

    coords: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return sum(len(c) == 2 for c in self.coords)

    @property
    def edge_factors(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coords) if len(c) == 2)

    def corner(self, bits: Sequence[int]) -> PVertex:
        """Product vertex with local binary coordinates ``bits`` (one per edge factor)."""
        it = iter(bits)
        return tuple(c[next(it)] if len(c) == 2 else c[0] for c in self.coords)

    def local(self, v: PVertex) -> tuple[int, ...] | None:
        out = []
        for c, x in zip(self.coords, v):
            if len(c) == 2:
                if x == c[0]:
                    out.append(0)
                elif x == c[1]:
                    out.append(1)
                else:
                    return None
            elif x != c[0]:
                return None
        return tuple(out)

    def contains(self, s: Simplex) -> bool:
        return all(self.local(v) is not None for v in s)

    def in_interior(self, s: Simplex) -> bool:
        """True iff the simplex lies in the cube but not in its boundary."""
        lo, hi = self.local(s[0]), self.local(s[-1])
        return lo is not None and hi is not None and not any(lo) and all(hi)

    def simplices(self, n: int) -> list[Simplex]:
        return [tuple(self.corner(b) for b in chain) for chain in local_chains(self.k, n)]

    def corners_depth_ok(self, factors: Sequence[OrderedComplex], radius: int) -> bool:
        return all(f.depth(x) <= radius for f, c in zip(factors, self.coords) for x in c)


def local_chains(k: int, n: int) -> list[tuple[tuple[int, ...], ...]]:
    """Strictly increasing (n+1)-chains in {0,1}^k, in lexicographic order."""
    pts = list(itertools.product((0, 1), repeat=k))
    out = []

    def grow(chain):
        if len(chain) == n + 1:
            out.append(tuple(chain))
            return
        top = chain[-1]
        for p in pts:
            if p != top and all(a <= b for a, b in zip(top, p)):
                chain.append(p)
                grow(chain)
                chain.pop()

    for p in pts:
        grow([p])
    return out


def cube_of(s: Simplex, factors: Sequence[OrderedComplex]) -> Cube:
    """The smallest cube containing the simplex (edges where coordinates move)."""
    coords = []
    for i, f in enumerate(factors):
        a, b = s[0][i], s[-1][i]
        if a == b:
            coords.append((a,))
        else:
            if len({v[i] for v in s}) > 2:
                raise ValueError("simplex moves more than one step in a factor; it lies in no cube")
            coords.append((a, b))
    return Cube(tuple(coords))
