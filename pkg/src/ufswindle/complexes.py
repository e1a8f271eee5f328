"""Ordered locally finite complexes and finite windows on them.

Vertices are plain integers. For rooted trees (including the line) the
integer is the breadth-first index of the vertex, computed arithmetically
from the branching numbers, so a vertex never has to be materialized.
Root paths (tuples of child indices) are the external, human-facing form.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

VertexRef = tuple[int, ...]


class ComplexError(ValueError):
    """Invalid complex parameters or an invalid explicit complex."""


class DescriptorError(ValueError):
    """A complex descriptor string could not be parsed."""


class OutOfWindowError(ValueError):
    pass


@dataclass(frozen=True)
class Window:
    radius: int
    margin: int = 0

    def __post_init__(self):
        if self.radius < 0 or self.margin < 0:
            raise ValueError("window radius and margin must be non-negative")
        if self.margin and self.margin >= self.radius:
            raise ValueError(f"margin {self.margin} must be smaller than radius {self.radius}")

    @property
    def interior_radius(self) -> int:
        return self.radius - self.margin

    def interior(self) -> "Window":
        return Window(self.interior_radius)


class OrderedComplex:
    """Common interface; concrete classes are RootedTree and FiniteComplex."""

    kind: str
    degree_bound: int
    dimension: int = 1
    root: int = 0

    def depth(self, v: int) -> int:
        raise NotImplementedError

    def above(self, v: int) -> tuple[int, ...]:
        raise NotImplementedError

    def below(self, v: int) -> tuple[int, ...]:
        raise NotImplementedError

    def ball(self, radius: int) -> list[int]:
        raise NotImplementedError

    def path(self, v: int) -> VertexRef:
        raise NotImplementedError

    def vertex(self, path: Sequence[int]) -> int:
        raise NotImplementedError

    def is_simplex(self, vertices: frozenset[int]) -> bool:
        if len(vertices) <= 1:
            return True
        if len(vertices) == 2:
            u, v = vertices
            return u in self.above(v) or v in self.above(u)
        return False

    def _check_in(self, v: int, window: Window | None):
        if window is not None and self.depth(v) > window.radius:
            raise OutOfWindowError(f"vertex {self.path(v)} lies outside the radius-{window.radius} window")

    def neighbors_above(self, v: int, window: Window | None = None) -> set[int]:
        self._check_in(v, window)
        return set(self.above(v))

    def neighbors_below(self, v: int, window: Window | None = None) -> set[int]:
        self._check_in(v, window)
        return set(self.below(v))

    def vertices_in(self, window: Window | int) -> Iterator[int]:
        radius = window.radius if isinstance(window, Window) else window
        return iter(self.ball(radius))

    def edges_in(self, radius: int) -> list[tuple[int, int]]:
        """Oriented edges (lesser, greater) with both ends in the ball."""
        out = []
        for v in self.ball(radius):
            for w in self.above(v):
                if self.depth(w) <= radius:
                    out.append((v, w))
        return out


class RootedTree(OrderedComplex):
    """A spherically symmetric rooted tree, oriented child < parent.

    ``root_degree`` children at the root, ``branching[(d - 1) % len]``
    children at each vertex of depth d >= 1.
    """

    def __init__(self, root_degree: int, branching: Sequence[int], kind: str, name: str):
        self.root_degree = root_degree
        self.branching = tuple(branching)
        self.kind = kind
        self.name = name
        self.degree_bound = max([root_degree] + [b + 1 for b in self.branching])
        self._start = [0, 1]  # _start[d] = id of the first vertex at depth d

    def __repr__(self):
        return f"RootedTree({self.name!r})"

    def __eq__(self, other):
        return isinstance(other, RootedTree) and (self.root_degree, self.branching) == (
            other.root_degree,
            other.branching,
        )

    def __hash__(self):
        return hash((self.root_degree, self.branching))

    def children_count(self, depth: int) -> int:
        if depth == 0:
            return self.root_degree
        return self.branching[(depth - 1) % len(self.branching)]

    def level_start(self, d: int) -> int:
        start = self._start
        while len(start) <= d + 1:
            k = len(start) - 1
            start.append(start[-1] + (start[-1] - start[-2]) * self.children_count(k - 1))
        return start[d]

    def level_size(self, d: int) -> int:
        return self.level_start(d + 1) - self.level_start(d)

    def depth(self, v: int) -> int:
        start = self._start
        while start[-1] <= v:
            self.level_start(len(start))
        return bisect_right(start, v) - 1

    def parent(self, v: int) -> int | None:
        if v == 0:
            return None
        d = self.depth(v)
        return self._start[d - 1] + (v - self._start[d]) // self.children_count(d - 1)

    def child(self, v: int, i: int) -> int:
        d = self.depth(v)
        b = self.children_count(d)
        if not 0 <= i < b:
            raise IndexError(f"vertex {self.path(v)} has no child {i}")
        return self.level_start(d + 1) + (v - self._start[d]) * b + i

    def above(self, v: int) -> tuple[int, ...]:
        return () if v == 0 else (self.parent(v),)

    def below(self, v: int) -> tuple[int, ...]:
        d = self.depth(v)
        b = self.children_count(d)
        first = self.level_start(d + 1) + (v - self._start[d]) * b
        return tuple(range(first, first + b))

    def ball(self, radius: int) -> list[int]:
        return list(range(self.level_start(radius + 1)))

    def ball_size(self, radius: int) -> int:
        return self.level_start(radius + 1)

    def path(self, v: int) -> VertexRef:
        # the offset within a level is a mixed-radix number whose digits are the child indices
        d = self.depth(v)
        off = v - self._start[d]
        out = [0] * d
        for j in range(d, 0, -1):
            off, out[j - 1] = divmod(off, self.children_count(j - 1))
        return tuple(out)

    def vertex(self, path: Sequence[int]) -> int:
        v = 0
        for i in path:
            v = self.child(v, int(i))
        return v


def make_regular_tree(q: int) -> RootedTree:
    if q < 3:
        raise ComplexError(f"regular tree needs degree q >= 3 (every vertex of degree at least 3), got q={q}")
    return RootedTree(q, [q - 1], "regular-tree", f"tree:{q}")


def make_tree(degrees: Sequence[int]) -> RootedTree:
    """Tree with vertex degree ``degrees[d % len]`` at depth d (root uses degrees[0])."""
    degrees = [int(q) for q in degrees]
    if not degrees:
        raise ComplexError("empty degree sequence")
    if len(degrees) == 1:
        return make_regular_tree(degrees[0])
    if min(degrees) < 3:
        raise ComplexError(f"every vertex needs degree at least 3, got degree sequence {degrees}")
    n = len(degrees)
    branching = [degrees[d % n] - 1 for d in range(1, n + 1)]
    return RootedTree(degrees[0], branching, "tree", "tree:" + ",".join(map(str, degrees)))


def make_line() -> RootedTree:
    # root 0 with one child per side; path (0,)*k is +k, (1,)+(0,)*(k-1) is -k
    return RootedTree(2, [1], "line", "line")


def line_position(line: RootedTree, v: int) -> int:
    """Signed integer coordinate of a line vertex."""
    if v == 0:
        return 0
    p = line.path(v)
    return len(p) if p[0] == 0 else -len(p)


class FiniteComplex(OrderedComplex):
    """A finite ordered complex given explicitly (vertices, oriented edges, simplices)."""

    kind = "finite-explicit"

    def __init__(self, labels, edges, simplices=(), root=None, name="finite"):
        labels = [str(x) for x in labels]
        if len(set(labels)) != len(labels):
            raise ComplexError("duplicate vertex labels")
        if not labels:
            raise ComplexError("complex has no vertices")
        index = {lab: i for i, lab in enumerate(labels)}
        above: dict[int, set[int]] = {i: set() for i in index.values()}
        for e in edges:
            if len(e) != 2:
                raise ComplexError(f"edge {e} must be a [lesser, greater] pair")
            a, b = (str(x) for x in e)
            if a not in index or b not in index:
                raise ComplexError(f"edge {e} uses an unknown vertex")
            u, v = index[a], index[b]
            if u == v:
                raise ComplexError(f"loop at {a}")
            if u in above[v]:
                raise ComplexError(f"edge {a}-{b} is oriented both ways")
            above[u].add(v)
        root_label = labels[0] if root is None else str(root)
        if root_label not in index:
            raise ComplexError(f"unknown root {root_label}")

        # renumber in BFS order from the root so balls are prefixes
        adj = {i: set(above[i]) for i in above}
        for u in above:
            for v in above[u]:
                adj[v].add(u)
        r = index[root_label]
        order, dist = [r], {r: 0}
        queue = deque([r])
        while queue:
            u = queue.popleft()
            for w in sorted(adj[u], key=lambda i: labels[i]):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    order.append(w)
                    queue.append(w)
        if len(order) != len(labels):
            raise ComplexError("complex is not connected")
        new = {old: i for i, old in enumerate(order)}
        self.labels = [labels[old] for old in order]
        self._depth = [dist[old] for old in order]
        self._above = [tuple(sorted(new[w] for w in above[old])) for old in order]
        below: list[list[int]] = [[] for _ in order]
        for i, ws in enumerate(self._above):
            for w in ws:
                below[w].append(i)
        self._below = [tuple(sorted(b)) for b in below]
        self._bfs_parent = [None] * len(order)
        self._bfs_children: list[list[int]] = [[] for _ in order]
        for i in range(1, len(order)):
            p = min(w for w in self._above[i] + self._below[i] if self._depth[w] == self._depth[i] - 1)
            self._bfs_parent[i] = p
            self._bfs_children[p].append(i)
        self.name = name
        self.degree_bound = max(len(a) + len(b) for a, b in zip(self._above, self._below))
        self._simplices = self._check_simplices(simplices, index, new)
        self.dimension = max([1 if any(self._above) else 0] + [len(x) - 1 for x in self._simplices])

    def _check_simplices(self, simplices, index, new) -> set[frozenset[int]]:
        out = set()
        for s in simplices:
            try:
                vs = frozenset(new[index[str(x)]] for x in s)
            except KeyError:
                raise ComplexError(f"simplex {s} uses an unknown vertex") from None
            if len(vs) != len(s) or len(vs) < 3:
                raise ComplexError(f"higher simplex {s} must list at least 3 distinct vertices")
            for u in vs:
                for v in vs:
                    if u != v and not (v in self._above[u] or u in self._above[v]):
                        raise ComplexError(f"vertices of simplex {s} are not pairwise comparable")
            out.add(vs)
        # faces of higher simplices must be declared too
        for s in list(out):
            for u in s:
                f = s - {u}
                if len(f) >= 3 and f not in out:
                    raise ComplexError(f"face {sorted(self.labels[i] for i in f)} of a simplex is missing")
        # transitivity inside each simplex: a < b < c implies a < c
        for s in out:
            for a in s:
                for b in self._above[a]:
                    if b in s:
                        for c in self._above[b]:
                            if c in s and c not in self._above[a]:
                                raise ComplexError("order is not transitive on a simplex")
        # comparable triples forming a chain must be simplices (comparability exactly on simplices)
        for a in range(len(self.labels)):
            for b in self._above[a]:
                for c in self._above[b]:
                    if c in self._above[a] and frozenset((a, b, c)) not in out:
                        raise ComplexError(
                            f"{self.labels[a]} < {self.labels[b]} < {self.labels[c]} is a chain but not a declared simplex"
                        )
        return out

    def __repr__(self):
        return f"FiniteComplex({self.name!r}, {len(self.labels)} vertices)"

    def depth(self, v: int) -> int:
        return self._depth[v]

    def above(self, v: int) -> tuple[int, ...]:
        return self._above[v]

    def below(self, v: int) -> tuple[int, ...]:
        return self._below[v]

    def ball(self, radius: int) -> list[int]:
        return [v for v in range(len(self.labels)) if self._depth[v] <= radius]

    def path(self, v: int) -> VertexRef:
        out = []
        while v:
            p = self._bfs_parent[v]
            out.append(self._bfs_children[p].index(v))
            v = p
        return tuple(reversed(out))

    def vertex(self, path: Sequence[int]) -> int:
        v = 0
        for i in path:
            kids = self._bfs_children[v]
            if not 0 <= int(i) < len(kids):
                raise IndexError(f"no child {i} at {self.labels[v]}")
            v = kids[int(i)]
        return v

    def is_simplex(self, vertices: frozenset[int]) -> bool:
        if len(vertices) <= 2:
            return super().is_simplex(vertices)
        return vertices in self._simplices


def load_finite(path: str | Path) -> FiniteComplex:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DescriptorError(f"cannot read finite complex {path}: {exc}") from exc
    if not isinstance(data, dict) or "vertices" not in data or "edges" not in data:
        raise DescriptorError(f"{path}: expected an object with 'vertices' and 'edges'")
    return FiniteComplex(
        data["vertices"], data["edges"], data.get("simplices", ()), data.get("root"), name=f"finite:{path}"
    )


def parse_descriptor(text: str) -> OrderedComplex:
    """Parse "tree:q", "tree:q1,q2,...", "line" or "finite:<path>"."""
    text = text.strip()
    if text == "line":
        return make_line()
    kind, sep, arg = text.partition(":")
    if not sep:
        raise DescriptorError(f"unknown complex descriptor {text!r}")
    if kind == "tree":
        try:
            degrees = [int(x) for x in arg.split(",")]
        except ValueError:
            raise DescriptorError(f"bad tree degrees in {text!r}") from None
        try:
            return make_tree(degrees)
        except ComplexError as exc:
            raise DescriptorError(str(exc)) from exc
    if kind == "finite":
        try:
            return load_finite(arg)
        except ComplexError as exc:
            raise DescriptorError(f"{arg}: {exc}") from exc
    raise DescriptorError(f"unknown complex descriptor {text!r}")
