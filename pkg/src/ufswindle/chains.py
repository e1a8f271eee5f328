"""Exact sparse chains: formal sums of simplices with int or Fraction coefficients."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Iterator, Mapping

from .product import ProductComplex, Simplex

Coeff = int | Fraction


class ChainFormatError(ValueError):
    """A serialized chain could not be parsed."""


def exact_coeff(v) -> Coeff:
    if isinstance(v, bool):
        raise TypeError("boolean coefficient")
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else v
    if isinstance(v, Rational):
        return exact_coeff(Fraction(v.numerator, v.denominator))
    raise TypeError(f"inexact coefficient {v!r}; use int or Fraction")


class Chain:
    """A degree-n chain. Zero coefficients are never stored."""

    __slots__ = ("degree", "_c", "_norm")

    def __init__(self, degree: int, coeffs: Mapping[Simplex, Coeff] | Iterable[tuple[Simplex, Coeff]] = ()):
        self.degree = degree
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[Simplex, Coeff] = {}
        for s, v in items:
            if len(s) != degree + 1:
                raise ValueError(f"simplex of degree {len(s) - 1} in a degree-{degree} chain")
            v = exact_coeff(v)
            t = c.get(s, 0) + v
            if t:
                c[s] = exact_coeff(t)
            else:
                c.pop(s, None)
        self._c = c
        self._norm = None

    @classmethod
    def _wrap(cls, degree: int, clean: dict) -> "Chain":
        ch = cls.__new__(cls)
        ch.degree = degree
        ch._c = clean
        ch._norm = None
        return ch

    @classmethod
    def zero(cls, degree: int) -> "Chain":
        return cls._wrap(degree, {})

    def __getitem__(self, s: Simplex) -> Coeff:
        return self._c.get(s, 0)

    def __contains__(self, s) -> bool:
        return s in self._c

    def __iter__(self) -> Iterator[Simplex]:
        return iter(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def items(self):
        return self._c.items()

    def support(self) -> set[Simplex]:
        return set(self._c)

    def as_dict(self) -> dict[Simplex, Coeff]:
        return dict(self._c)

    @property
    def sup_norm(self) -> Coeff:
        if self._norm is None:
            self._norm = max((abs(v) for v in self._c.values()), default=0)
        return self._norm

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        if not self._c and not other._c:
            return True
        return self.degree == other.degree and self._c == other._c

    __hash__ = None

    def __repr__(self):
        return f"Chain(degree={self.degree}, terms={len(self._c)}, norm={self.sup_norm})"

    def __add__(self, other: "Chain") -> "Chain":
        return add(self, other)

    def __sub__(self, other: "Chain") -> "Chain":
        return add(self, other, -1)

    def __neg__(self) -> "Chain":
        return scale(self, -1)

    def __mul__(self, k) -> "Chain":
        return scale(self, k)

    __rmul__ = __mul__


def add(a: Chain, b: Chain, k: Coeff = 1) -> Chain:
    """a + k*b."""
    if a.degree != b.degree and a and b:
        raise ValueError(f"degree mismatch: {a.degree} vs {b.degree}")
    degree = a.degree if a else b.degree
    out = dict(a._c)
    for s, v in b._c.items():
        t = out.get(s, 0) + k * v
        if t:
            out[s] = exact_coeff(t)
        else:
            out.pop(s, None)
    return Chain._wrap(degree, out)


def scale(a: Chain, k: Coeff) -> Chain:
    k = exact_coeff(k)
    if not k:
        return Chain.zero(a.degree)
    return Chain._wrap(a.degree, {s: exact_coeff(v * k) for s, v in a._c.items()})


def accumulate(degree: int, terms: Iterable[tuple[Simplex, Coeff]]) -> Chain:
    """Sum many (simplex, coefficient) terms; faster than repeated add."""
    out: dict[Simplex, Coeff] = {}
    get = out.get
    for s, v in terms:
        out[s] = get(s, 0) + v
    return Chain._wrap(degree, {s: exact_coeff(v) for s, v in out.items() if v})


def boundary(c: Chain) -> Chain:
    n = c.degree
    if n < 1:
        raise ValueError("boundary of a 0-chain is not defined here")
    out: dict[Simplex, Coeff] = {}
    get = out.get
    for s, v in c._c.items():
        for i in range(n + 1):
            f = s[:i] + s[i + 1 :]
            out[f] = get(f, 0) + (v if i % 2 == 0 else -v)
    return Chain._wrap(n - 1, {f: v for f, v in out.items() if v})


def restrict(c: Chain, region: Callable[[Simplex], bool]) -> Chain:
    return Chain._wrap(c.degree, {s: v for s, v in c._c.items() if region(s)})


def is_cycle_on(c: Chain, region: Callable[[Simplex], bool]) -> bool:
    return not any(region(f) for f in boundary(c))


def distinct_values(c: Chain) -> int:
    return len(set(c._c.values()))


# -- serialization ------------------------------------------------------------


def format_coeff(v: Coeff) -> str:
    return str(v)


def parse_coeff(text: str) -> Coeff:
    if not isinstance(text, str):
        raise ChainFormatError(f"coefficient must be a string, got {text!r}")
    try:
        if "/" in text:
            num, den = text.split("/")
            return exact_coeff(Fraction(int(num), int(den)))
        return int(text)
    except (ValueError, ZeroDivisionError):
        raise ChainFormatError(f"bad coefficient {text!r}") from None


def dump_lines(c: Chain, p: ProductComplex) -> list[str]:
    # records are built from memoized per-vertex JSON fragments; byte-identical
    # to json.dumps(..., separators=(",", ":"))
    factors = p.factors
    memo: dict = {}

    def vertex(u):
        got = memo.get(u)
        if got is None:
            paths = [factors[i].path(x) for i, x in enumerate(u)]
            body = "[" + ",".join("[" + ",".join(map(str, q)) + "]" for q in paths) + "]"
            got = memo[u] = (tuple(paths), body)
        return got

    recs = []
    for s, v in c.items():
        parts = [vertex(u) for u in s]
        key = tuple(q[0] for q in parts)
        recs.append((key, '{"s":[' + ",".join(q[1] for q in parts) + '],"c":"' + format_coeff(v) + '"}'))
    recs.sort(key=lambda r: r[0])
    return [json.dumps({"degree": c.degree})] + [line for _, line in recs]


def dumps_chain(c: Chain, p: ProductComplex) -> str:
    return "\n".join(dump_lines(c, p)) + "\n"


def loads_chain(text: str, p: ProductComplex, degree: int | None = None) -> Chain:
    terms = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ChainFormatError(f"line {lineno}: {exc}") from None
        if not isinstance(rec, dict):
            raise ChainFormatError(f"line {lineno}: expected a JSON object")
        if "s" not in rec:
            if "degree" in rec and isinstance(rec["degree"], int):
                if degree is not None and degree != rec["degree"]:
                    raise ChainFormatError(f"line {lineno}: degree {rec['degree']} but {degree} expected")
                degree = rec["degree"]
                continue
            raise ChainFormatError(f"line {lineno}: record has no simplex")
        try:
            s = tuple(
                tuple(f.vertex(path) for f, path in zip(p.factors, v, strict=True)) for v in rec["s"]
            )
        except (TypeError, ValueError, IndexError) as exc:
            raise ChainFormatError(f"line {lineno}: bad simplex {rec['s']!r} ({exc})") from None
        if "c" not in rec:
            raise ChainFormatError(f"line {lineno}: record has no coefficient")
        if not s:
            raise ChainFormatError(f"line {lineno}: empty simplex")
        if degree is None:
            degree = len(s) - 1
        if len(s) != degree + 1:
            raise ChainFormatError(f"line {lineno}: simplex of degree {len(s) - 1} in a degree-{degree} chain")
        _check_simplex(p, s, lineno)
        terms.append((s, parse_coeff(rec["c"])))
    if degree is None:
        raise ChainFormatError("empty chain file without a degree header")
    return Chain(degree, terms)


def _check_simplex(p: ProductComplex, s: Simplex, lineno: int):
    for a, b in zip(s, s[1:]):
        if a == b:
            raise ChainFormatError(f"line {lineno}: repeated vertex")
        for f, x, y in zip(p.factors, a, b):
            if x != y and y not in f.above(x):
                raise ChainFormatError(f"line {lineno}: vertices are not increasing in the product order")
    for i, f in enumerate(p.factors):
        if not f.is_simplex(frozenset(v[i] for v in s)):
            raise ChainFormatError(f"line {lineno}: factor {i} coordinates do not form a simplex")


def chain_digest(c: Chain, p: ProductComplex) -> str:
    h = hashlib.sha256()
    for line in dump_lines(c, p):
        h.update(line.encode())
        h.update(b"\n")
    return h.hexdigest()
