"""Exact elimination over the integers and the rationals for small dense systems."""

from __future__ import annotations

from fractions import Fraction


def _eye(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_diagonalize(A: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]], int]:
    """Unimodular U, V with U A V diagonal. Returns (U, D, V, rank).

    Plain Smith-style pivoting on the smallest entry; the divisibility chain of
    the true normal form is not needed for solving and is not enforced.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    S = [list(map(int, row)) for row in A]
    U, V = _eye(m), _eye(n)
    t = 0
    while t < min(m, n):
        cands = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
        if not cands:
            break
        _, i, j = min(cands)
        S[t], S[i] = S[i], S[t]
        U[t], U[i] = U[i], U[t]
        for row in S:
            row[t], row[j] = row[j], row[t]
        for row in V:
            row[t], row[j] = row[j], row[t]
        while True:
            p = S[t][t]
            moved = False
            for i in range(t + 1, m):
                q = S[i][t] // p
                if q:
                    S[i] = [a - q * b for a, b in zip(S[i], S[t])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[t])]
                if S[i][t]:
                    S[t], S[i] = S[i], S[t]
                    U[t], U[i] = U[i], U[t]
                    moved = True
                    break
            if moved:
                continue
            for j in range(t + 1, n):
                q = S[t][j] // p
                if q:
                    for row in S:
                        row[j] -= q * row[t]
                    for row in V:
                        row[j] -= q * row[t]
                if S[t][j]:
                    for row in S:
                        row[t], row[j] = row[j], row[t]
                    for row in V:
                        row[t], row[j] = row[j], row[t]
                    moved = True
                    break
            if not moved:
                break
        t += 1
    return U, S, V, t


def solve_integer(A: list[list[int]], b: list[int]) -> tuple[list[int], list[list[int]]] | None:
    """An integer solution of A x = b and a kernel basis, or None if no integer solution exists."""
    m = len(A)
    n = len(A[0]) if m else 0
    U, S, V, rank = smith_diagonalize(A)
    ub = [sum(u * v for u, v in zip(row, b)) for row in U]
    y = [0] * n
    for i in range(rank):
        if ub[i] % S[i][i]:
            return None
        y[i] = ub[i] // S[i][i]
    if any(ub[i] for i in range(rank, m)):
        return None
    x = [sum(V[r][c] * y[c] for c in range(n)) for r in range(n)]
    kernel = [[V[r][c] for r in range(n)] for c in range(rank, n)]
    return x, kernel


def rref(A: list[list], b: list) -> tuple[list[list[Fraction]], list[Fraction], list[int]] | None:
    """Reduced row echelon form of [A | b] over Q. None if inconsistent."""
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[Fraction(v) for v in row] + [Fraction(bv)] for row, bv in zip(A, b)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if M[i][col]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][col]
        M[r] = [v * inv for v in M[r]]
        for i in range(m):
            if i != r and M[i][col]:
                f = M[i][col]
                M[i] = [a - f * c for a, c in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    if any(M[i][n] for i in range(r, m)):
        return None
    return [row[:n] for row in M[:r]], [row[n] for row in M[:r]], pivots


def solve_square(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Unique solution of a square system over Q, or None if singular."""
    res = rref(M, rhs)
    if res is None:
        return None
    R, vals, piv = res
    if len(piv) != len(M[0]):
        return None
    return vals
