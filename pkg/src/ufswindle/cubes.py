"""Cube-local relative solver: push a relative cycle onto cube boundaries.

Every k-cube of a product has the same local triangulation, so a local
problem depends only on (k, i) and the coefficient vector on the cube's
interior i-simplices. Interior simplices are exactly the chains of
{0,1}^k that start at 0...0 and end at 1...1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .chains import Chain, Coeff, boundary, exact_coeff
from .complexes import Window
from .linalg import rref, solve_integer, solve_square
from .product import Cube, ProductComplex, cube_of, local_chains, moving


class NoSolutionError(ValueError):
    pass


@dataclass(frozen=True)
class CubeLocalSolution:
    cube: Cube
    input: Chain
    b: Chain
    a: Chain


@lru_cache(maxsize=None)
def relative_system(k: int, i: int):
    """(rows, cols, D): D maps interior (i+1)-chains to interior i-chains of the k-cube."""
    full = (1,) * k
    zero = (0,) * k

    def interior(chains):
        return [s for s in chains if s[0] == zero and s[-1] == full]

    rows = interior(local_chains(k, i))
    cols = interior(local_chains(k, i + 1))
    index = {s: r for r, s in enumerate(rows)}
    D = [[0] * len(cols) for _ in rows]
    for j, s in enumerate(cols):
        for f in range(len(s)):
            face = s[:f] + s[f + 1 :]
            r = index.get(face)
            if r is not None:
                D[r][j] += -1 if f % 2 else 1
    return tuple(rows), tuple(cols), tuple(tuple(r) for r in D)


def _key(x) -> tuple:
    return (tuple(abs(v) for v in x), tuple(x))


def _free_form(D, target):
    """Parametrize solutions as x = h + F f over the free columns of the rational RREF."""
    res = rref([list(r) for r in D], list(target))
    if res is None:
        return None
    R, vals, pivots = res
    n = len(D[0]) if D else 0
    free = [j for j in range(n) if j not in pivots]
    h = [Fraction(0)] * n
    F = [[Fraction(0)] * len(free) for _ in range(n)]
    for a, j in enumerate(free):
        F[j][a] = Fraction(1)
    for r, pj in enumerate(pivots):
        h[pj] = vals[r]
        for a, j in enumerate(free):
            F[pj][a] = -R[r][j]
    return h, F


def _min_int(D, target) -> tuple[int, ...]:
    sol = solve_integer([list(r) for r in D], list(target))
    if sol is None:
        raise NoSolutionError("no integer solution")
    x0, _ = sol
    h, F = _free_form(D, target)
    d = len(F[0]) if F else 0
    for B in range(max((abs(v) for v in x0), default=0) + 1):
        best = None
        for f in itertools.product(range(-B, B + 1), repeat=d):
            x = []
            for hj, Fj in zip(h, F):
                v = hj + sum(a * b for a, b in zip(Fj, f))
                if v.denominator != 1 or abs(v) > B:
                    break
                x.append(int(v))
            else:
                if best is None or _key(x) < _key(best):
                    best = x
        if best is not None:
            return tuple(best)
    raise AssertionError("integer search exceeded the particular-solution bound")


def _min_rat(D, target) -> tuple[Coeff, ...]:
    form = _free_form(D, target)
    if form is None:
        raise NoSolutionError("no rational solution")
    h, F = form
    n = len(h)
    d = len(F[0]) if F else 0
    # Chebyshev minimization: optimum sits on d+1 active constraints x_j = +-B
    constraints = [(j, s) for j in range(n) for s in (1, -1)]
    best_B, cands = None, []
    for act in itertools.combinations(constraints, d + 1):
        M = [list(F[j]) + [Fraction(-s)] for j, s in act]
        rhs = [-h[j] for j, s in act]
        z = solve_square(M, rhs)
        if z is None:
            continue
        f, B = z[:d], z[d]
        if B < 0:
            continue
        x = [hj + sum(a * b for a, b in zip(Fj, f)) for hj, Fj in zip(h, F)]
        if any(abs(v) > B for v in x):
            continue
        if best_B is None or B < best_B:
            best_B, cands = B, [x]
        elif B == best_B:
            cands.append(x)
    if best_B is None:
        # d+1 > n cannot happen (n >= d); a square system with n == 0
        return tuple()
    return tuple(exact_coeff(v) for v in min(cands, key=_key))


@lru_cache(maxsize=4096)
def solve_relative(k: int, i: int, target: tuple, mode: str = "int") -> tuple:
    rows, cols, D = relative_system(k, i)
    if not cols:
        if any(target):
            raise NoSolutionError("no interior simplices to absorb the input")
        return ()
    if not any(target):
        return (0,) * len(cols)
    if mode == "int":
        return _min_int(D, target)
    if mode == "rat":
        return _min_rat(D, target)
    raise ValueError(f"unknown coefficient mode {mode!r}")


def solve_cube(cube: Cube, c: Chain, mode: str = "int") -> CubeLocalSolution:
    k, i = cube.k, c.degree
    if i >= k:
        raise ValueError(f"degree {i} is not below the cube dimension {k}")
    if not all(cube.contains(s) for s in c):
        raise ValueError("input is not supported in the cube")
    if i >= 1 and c and any(cube.in_interior(f) for f in boundary(c)):
        raise ValueError("boundary of the input is not supported on the cube boundary")
    if mode == "int" and any(not isinstance(v, int) for _, v in c.items()):
        raise ValueError("rational coefficients in integer mode")
    rows, cols, _ = relative_system(k, i)
    local = {tuple(cube.local(v) for v in s): a for s, a in c.items()}
    target = tuple(local.get(r, 0) for r in rows)
    x = solve_relative(k, i, target, mode)
    b = Chain(i + 1, {tuple(cube.corner(p) for p in col): v for col, v in zip(cols, x) if v})
    a = c - boundary(b) if b else c
    return CubeLocalSolution(cube, c, b, a)


@dataclass(frozen=True)
class SkeletonReduction:
    b: Chain
    a: Chain
    cubes: int
    constant: Coeff


def reduce_to_skeleton(p: ProductComplex, c: Chain, k: int, window: Window, mode: str = "int") -> SkeletonReduction:
    """Solve cube by cube so that c - d(b) lives on the boundaries of the k-cubes."""
    if c.degree >= k:
        raise ValueError(f"degree {c.degree} is not below k={k}")
    r = window.interior_radius
    groups: dict[Cube, dict] = {}
    for s, v in c.items():
        mv = moving(s)
        if len(mv) > k:
            raise ValueError("input is not supported on the union of k-cubes")
        if len(mv) == k:
            cube = cube_of(s, p.factors)
            groups.setdefault(cube, {})[s] = v
    terms: dict = {}
    solved = 0
    for cube in sorted(groups, key=lambda q: q.coords):
        if not cube.corners_depth_ok(p.factors, r):
            continue
        sol = solve_cube(cube, Chain(c.degree, groups[cube]), mode)
        solved += 1
        for s, v in sol.b.items():
            terms[s] = terms.get(s, 0) + v
    b = Chain(c.degree + 1, terms)
    a = c - boundary(b) if b else c
    constant = Fraction(b.sup_norm) / c.sup_norm if c else Fraction(0)
    return SkeletonReduction(b, a, solved, exact_coeff(constant))
