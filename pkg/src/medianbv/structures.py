"""Finite median algebras, betweenness relations, and axiom checks.

Points are the integers ``0..n-1``. A :class:`Structure` couples a point
count with one of five median backends:

* ``table``: an explicit flattened ``n**3`` median table,
* ``tree``: an undirected tree on the points (median = common point of the
  three pairwise paths),
* ``chain``: the total order ``0 < 1 < ... < n-1``,
* ``grid``: ``width x height`` product of two chains, point ``r*width + c``
  at row ``r`` and column ``c``,
* ``star``: hub ``0`` joined to every leaf ``1..n-1``.

A :class:`TernaryRelation` stores ``<a,b,c>`` ("b lies between a and c") as
one bitmask per ordered endpoint pair.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from . import caps
from ._bits import iter_bits, to_mask, to_set
from .errors import InvalidInput

KINDS = ("table", "tree", "chain", "grid", "star")
TREELIKE = ("tree", "chain", "star")


def _median3(x: int, y: int, z: int) -> int:
    if x <= y:
        if y <= z:
            return y
        return z if x <= z else x
    if x <= z:
        return x
    return z if y <= z else y


@dataclass(frozen=True, eq=False)
class Structure:
    """An immutable finite median algebra.

    Use the classmethod constructors rather than calling this directly.
    Derived tables (full median table, intervals, LCA index) are computed
    lazily and cached.
    """

    kind: str
    n: int
    edges: tuple[tuple[int, int], ...] = ()
    width: int = 0
    height: int = 0
    table: tuple[int, ...] = ()
    labels: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInput(f"unknown structure kind {self.kind!r}")
        if self.n < 1:
            raise InvalidInput("a structure needs at least one point")
        if self.labels is not None:
            if len(self.labels) != self.n or len(set(self.labels)) != self.n:
                raise InvalidInput("labels must be n distinct names")
        if self.kind == "tree":
            self._validate_tree()
        elif self.kind == "grid":
            if self.width < 1 or self.height < 1 or self.width * self.height != self.n:
                raise InvalidInput(
                    f"grid needs n = width*height, got {self.n} != {self.width}*{self.height}"
                )
        elif self.kind == "table":
            if len(self.table) != self.n**3:
                raise InvalidInput(f"table needs n^3 = {self.n ** 3} entries, got {len(self.table)}")
            if any(not 0 <= v < self.n for v in self.table):
                raise InvalidInput("table entries must be points 0..n-1")

    def _validate_tree(self):
        n = self.n
        if len(self.edges) != n - 1:
            raise InvalidInput(f"tree on {n} points needs {n - 1} edges, got {len(self.edges)}")
        for a, b in self.edges:
            if not (0 <= a < n and 0 <= b < n) or a == b:
                raise InvalidInput(f"bad tree edge ({a}, {b})")
        seen = {0}
        queue = deque([0])
        adj = self.adjacency
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        if len(seen) != n:
            raise InvalidInput("tree edges do not connect all points")

    # -- constructors -------------------------------------------------------

    @classmethod
    def chain(cls, n: int, labels=None) -> "Structure":
        return cls("chain", n, labels=_labels(labels))

    @classmethod
    def star(cls, n: int, labels=None) -> "Structure":
        return cls("star", n, labels=_labels(labels))

    @classmethod
    def tree(cls, n: int, edges: Iterable[Sequence[int]], labels=None) -> "Structure":
        return cls("tree", n, edges=tuple((int(a), int(b)) for a, b in edges), labels=_labels(labels))

    @classmethod
    def grid(cls, width: int, height: int, labels=None) -> "Structure":
        return cls("grid", width * height, width=width, height=height, labels=_labels(labels))

    @classmethod
    def from_table(cls, n: int, table: Iterable[int], labels=None) -> "Structure":
        return cls("table", n, table=tuple(int(v) for v in table), labels=_labels(labels))

    @classmethod
    def from_function(cls, n: int, med: Callable[[int, int, int], int], labels=None) -> "Structure":
        """Materialize an arbitrary ternary operation as a table backend."""
        flat = [med(x, y, z) for x in range(n) for y in range(n) for z in range(n)]
        return cls.from_table(n, flat, labels=labels)

    # -- basic queries --------------------------------------------------------

    @property
    def points(self) -> range:
        return range(self.n)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def check_point(self, p: int) -> int:
        if not isinstance(p, (int, np.integer)) or not 0 <= p < self.n:
            raise InvalidInput(f"point {p!r} out of range 0..{self.n - 1}")
        return int(p)

    def coords(self, p: int) -> tuple[int, int]:
        """Grid coordinates ``(row, column)`` of a grid point."""
        if self.kind != "grid":
            raise InvalidInput("coordinates only exist on grid structures")
        return divmod(self.check_point(p), self.width)

    def point_at(self, row: int, col: int) -> int:
        if self.kind != "grid":
            raise InvalidInput("coordinates only exist on grid structures")
        if not (0 <= row < self.height and 0 <= col < self.width):
            raise InvalidInput(f"grid coordinate ({row},{col}) out of range")
        return row * self.width + col

    def name(self, p: int) -> str:
        if self.labels is not None:
            return self.labels[p]
        if self.kind == "grid":
            r, c = divmod(p, self.width)
            return f"{r},{c}"
        return str(p)

    def median(self, x: int, y: int, z: int) -> int:
        x, y, z = self.check_point(x), self.check_point(y), self.check_point(z)
        return self._median(x, y, z)

    def _median(self, x: int, y: int, z: int) -> int:
        kind = self.kind
        if kind == "chain":
            return _median3(x, y, z)
        if kind == "star":
            if x == y or x == z:
                return x
            if y == z:
                return y
            return 0
        if kind == "tree":
            return self._lca_index.median(x, y, z)
        if kind == "grid":
            w = self.width
            rx, cx = divmod(x, w)
            ry, cy = divmod(y, w)
            rz, cz = divmod(z, w)
            return _median3(rx, ry, rz) * w + _median3(cx, cy, cz)
        n = self.n
        return self.table[(x * n + y) * n + z]

    # -- cached derived data --------------------------------------------------

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Neighbour lists of a tree-like backend (tree, chain, star)."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for a, b in self.tree_edges:
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(sorted(v)) for v in adj)

    @cached_property
    def tree_edges(self) -> tuple[tuple[int, int], ...]:
        """Edge list (each pair sorted) of a tree-like backend."""
        if self.kind == "tree":
            return tuple(sorted((min(a, b), max(a, b)) for a, b in self.edges))
        if self.kind == "chain":
            return tuple((i, i + 1) for i in range(self.n - 1))
        if self.kind == "star":
            return tuple((0, k) for k in range(1, self.n))
        raise InvalidInput(f"{self.kind} backend has no tree edges")

    @cached_property
    def _lca_index(self) -> "LCAIndex":
        return LCAIndex(self.n, self.adjacency)

    @cached_property
    def median_array(self) -> np.ndarray:
        """Full median table as an ``(n, n, n)`` integer array."""
        n = self.n
        if self.kind == "table":
            return np.asarray(self.table, dtype=np.int64).reshape(n, n, n)
        if self.kind == "chain":
            i = np.arange(n)
            x, y, z = np.meshgrid(i, i, i, indexing="ij")
            return np.median(np.stack([x, y, z]), axis=0).astype(np.int64)
        arr = np.empty((n, n, n), dtype=np.int64)
        med = self._median
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    arr[x, y, z] = med(x, y, z)
        return arr

    @cached_property
    def median_lists(self) -> list[list[list[int]]]:
        """Full median table as nested lists (fast scalar indexing)."""
        return self.median_array.tolist()

    @cached_property
    def interval_masks(self) -> tuple[tuple[int, ...], ...]:
        """``interval_masks[a][b]`` is the bitmask of ``[a,b] = {x : m(a,x,b) = x}``."""
        n = self.n
        if self.kind in TREELIKE:
            paths = _all_paths(n, self.adjacency)
            return tuple(tuple(paths[a][b] for b in range(n)) for a in range(n))
        arr = self.median_array
        idx = np.arange(n)
        # fixed[a, x, b] is True when m(a, x, b) == x
        fixed = arr == idx[None, :, None]
        weights = [1 << x for x in range(n)]
        out = []
        for a in range(n):
            row = []
            for b in range(n):
                row.append(sum(weights[x] for x in np.flatnonzero(fixed[a, :, b])))
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def is_median_pretree(self) -> bool:
        """Whether the induced betweenness is a median pretree.

        Tree, chain, and star backends are median pretrees by construction; a
        grid is one exactly when it is a single row or column; table backends
        are checked exhaustively.
        """
        if self.kind in TREELIKE:
            return True
        if self.kind == "grid":
            return min(self.width, self.height) == 1
        return is_median_pretree(induced_betweenness(self))

    def interval_mask(self, a: int, b: int) -> int:
        return self.interval_masks[a][b]

    def to_table(self) -> "Structure":
        return Structure.from_table(self.n, self.median_array.reshape(-1).tolist(), labels=self.labels)

    def substructure(self, points: Iterable[int]) -> tuple["Structure", tuple[int, ...]]:
        """Induced structure on a subalgebra, relabelled to ``0..k-1``.

        Returns the structure and the original point of each new index. Tree
        backends restricted to a convex subset stay trees.
        """
        pts = tuple(sorted({self.check_point(p) for p in points}))
        if not pts:
            raise InvalidInput("substructure needs at least one point")
        index = {p: i for i, p in enumerate(pts)}
        mask = to_mask(pts)
        if self.kind in TREELIKE:
            sub_edges = [(index[a], index[b]) for a, b in self.tree_edges if a in index and b in index]
            if len(sub_edges) == len(pts) - 1:
                return Structure.tree(len(pts), sub_edges), pts
        med = self.median_lists
        flat = []
        for x in pts:
            for y in pts:
                for z in pts:
                    m = med[x][y][z]
                    if not (mask >> m) & 1:
                        raise InvalidInput(f"{list(pts)} is not a subalgebra")
                    flat.append(index[m])
        return Structure.from_table(len(pts), flat), pts


def _labels(labels):
    return None if labels is None else tuple(str(x) for x in labels)


def _all_paths(n: int, adj) -> list[list[int]]:
    """Bitmask of the tree path between every pair of points (BFS per source)."""
    paths = []
    for src in range(n):
        row = [0] * n
        row[src] = 1 << src
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if not row[v]:
                    row[v] = row[u] | (1 << v)
                    queue.append(v)
        paths.append(row)
    return paths


class LCAIndex:
    """Lowest common ancestors on a tree rooted at point 0.

    Euler tour plus a sparse table of depths: O(n log n) preprocessing and
    O(1) queries.
    """

    def __init__(self, n: int, adj):
        self.depth = [0] * n
        self.parent = [-1] * n
        first = [0] * n
        tour: list[int] = []
        visited = [False] * n
        stack = [(0, iter(adj[0]))]
        visited[0] = True
        first[0] = 0
        tour.append(0)
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                if not visited[v]:
                    visited[v] = True
                    self.parent[v] = u
                    self.depth[v] = self.depth[u] + 1
                    first[v] = len(tour)
                    tour.append(v)
                    stack.append((v, iter(adj[v])))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if stack:
                    tour.append(stack[-1][0])
        self.first = first
        self.tour = tour
        depth = self.depth
        levels = [tour]
        span = 1
        while 2 * span <= len(tour):
            prev = levels[-1]
            cur = []
            for i in range(len(tour) - 2 * span + 1):
                a, b = prev[i], prev[i + span]
                cur.append(a if depth[a] <= depth[b] else b)
            levels.append(cur)
            span *= 2
        self.levels = levels

    def lca(self, u: int, v: int) -> int:
        i, j = self.first[u], self.first[v]
        if i > j:
            i, j = j, i
        k = (j - i + 1).bit_length() - 1
        a = self.levels[k][i]
        b = self.levels[k][j - (1 << k) + 1]
        return a if self.depth[a] <= self.depth[b] else b

    def median(self, x: int, y: int, z: int) -> int:
        best = self.lca(x, y)
        for cand in (self.lca(y, z), self.lca(x, z)):
            if self.depth[cand] > self.depth[best]:
                best = cand
        return best


def tree_median_oracle(n: int, edges: Iterable[Sequence[int]], x: int, y: int, z: int) -> int:
    """Median of three tree vertices as the common point of the pairwise paths."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)

    def path(u, v):
        prev = {u: None}
        queue = deque([u])
        while queue:
            w = queue.popleft()
            if w == v:
                break
            for t in adj[w]:
                if t not in prev:
                    prev[t] = w
                    queue.append(t)
        out = set()
        w = v
        while w is not None:
            out.add(w)
            w = prev[w]
        return out

    common = path(x, y) & path(y, z) & path(x, z)
    assert len(common) == 1, common
    return common.pop()


def median(s: Structure, x: int, y: int, z: int) -> int:
    return s.median(x, y, z)


# -- betweenness relations ----------------------------------------------------


@dataclass(frozen=True)
class TernaryRelation:
    """A ternary relation ``<a,b,c>`` on ``0..n-1``.

    ``masks[a * n + c]`` is the bitmask of all ``b`` with ``<a,b,c>``, i.e. the
    interval ``[a,c]``. Equality compares these tables exactly.
    """

    n: int
    masks: tuple[int, ...]

    def __post_init__(self):
        if len(self.masks) != self.n * self.n:
            raise InvalidInput("relation needs n*n interval masks")

    @classmethod
    def from_predicate(cls, n: int, holds: Callable[[int, int, int], bool]) -> "TernaryRelation":
        masks = []
        for a in range(n):
            for c in range(n):
                masks.append(to_mask(b for b in range(n) if holds(a, b, c)))
        return cls(n, tuple(masks))

    @classmethod
    def from_triples(cls, n: int, triples: Iterable[Sequence[int]]) -> "TernaryRelation":
        masks = [0] * (n * n)
        for a, b, c in triples:
            masks[a * n + c] |= 1 << b
        return cls(n, tuple(masks))

    def holds(self, a: int, b: int, c: int) -> bool:
        return bool((self.masks[a * self.n + c] >> b) & 1)

    def interval_mask(self, a: int, c: int) -> int:
        return self.masks[a * self.n + c]

    def interval(self, a: int, c: int) -> frozenset[int]:
        return to_set(self.masks[a * self.n + c])

    def triples(self):
        n = self.n
        for a in range(n):
            for c in range(n):
                for b in iter_bits(self.masks[a * n + c]):
                    yield a, b, c

    def restrict(self, points: Iterable[int]) -> tuple["TernaryRelation", tuple[int, ...]]:
        """Induced relation on a subset, relabelled to ``0..k-1``."""
        pts = tuple(sorted(set(points)))
        k = len(pts)
        masks = []
        for a in pts:
            for c in pts:
                m = self.masks[a * self.n + c]
                masks.append(to_mask(i for i, b in enumerate(pts) if (m >> b) & 1))
        return TernaryRelation(k, tuple(masks)), pts


def induced_betweenness(s: Structure) -> TernaryRelation:
    """The relation ``<a,c,b>`` iff ``m(a,c,b) = c``."""
    n = s.n
    im = s.interval_masks
    return TernaryRelation(n, tuple(im[a][c] for a in range(n) for c in range(n)))


# -- axiom checking ---------------------------------------------------------------


@dataclass
class AxiomReport:
    passed: bool
    violations: list[tuple[str, tuple[int, ...]]]

    def labels(self) -> set[str]:
        return {label for label, _ in self.violations}

    def first(self, label: str) -> tuple[int, ...] | None:
        for lab, witness in self.violations:
            if lab == label:
                return witness
        return None


class _Collector:
    def __init__(self, limit: int):
        if limit < 1:
            raise InvalidInput("max_violations must be at least 1")
        self.limit = limit
        self.items: list[tuple[str, tuple[int, ...]]] = []
        self.failed: set[str] = set()

    def add(self, label: str, witness: tuple[int, ...]) -> None:
        self.failed.add(label)
        if len(self.items) < self.limit:
            self.items.append((label, witness))


def _scan_b_axioms(r: TernaryRelation, out: _Collector) -> None:
    n = r.n
    M = r.masks
    for a in range(n):
        for c in range(n):
            m = M[a * n + c]
            rev = M[c * n + a]
            for b in iter_bits(m & ~rev):
                out.add("B1", (a, b, c))
    # B2: <a,b,c> and <a,c,b> iff b == c
    for a in range(n):
        for b in range(n):
            for c in range(n):
                both = (M[a * n + c] >> b) & 1 and (M[a * n + b] >> c) & 1
                if bool(both) != (b == c):
                    out.add("B2", (a, b, c))
    # B3: <a,b,c> implies <a,b,d> or <d,b,c>
    # left[a][b]: mask of d with <a,b,d>; right[b][c]: mask of d with <d,b,c>
    full = (1 << n) - 1
    left = [[0] * n for _ in range(n)]
    right = [[0] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            for b in iter_bits(M[x * n + y]):
                left[x][b] |= 1 << y
                right[b][y] |= 1 << x
    for a in range(n):
        for c in range(n):
            for b in iter_bits(M[a * n + c]):
                bad = full & ~(left[a][b] | right[b][c])
                for d in iter_bits(bad):
                    out.add("B3", (a, b, c, d))


def _scan_a_axioms(r: TernaryRelation, out: _Collector) -> None:
    n = r.n
    M = r.masks
    for a in range(n):
        for b in range(n):
            m = M[a * n + b]
            if not (m >> a) & 1 or not (m >> b) & 1:
                out.add("A0", (a, b))
            if m != M[b * n + a]:
                out.add("A1", (a, b))
    for a in range(n):
        for b in range(n):
            for c in iter_bits(M[a * n + b]):
                if c != b and (M[a * n + c] >> b) & 1:
                    out.add("A2", (a, b, c))
    for a in range(n):
        for b in range(n):
            ab = M[a * n + b]
            for c in range(n):
                for x in iter_bits(ab & ~(M[a * n + c] | M[c * n + b])):
                    out.add("A3", (a, b, c, x))


def check_pretree_axioms(r: TernaryRelation, max_violations: int | None = None) -> AxiomReport:
    """Exhaustive check of B1-B3 and of the interval axioms A0-A3.

    Both systems are equivalent; a disagreement raises ``AssertionError``.
    """
    caps.require("pretree_axioms", r.n, "pretree axiom scan")
    limit = caps.get("violations") if max_violations is None else max_violations
    b_out = _Collector(limit)
    a_out = _Collector(limit)
    _scan_b_axioms(r, b_out)
    _scan_a_axioms(r, a_out)
    if bool(b_out.failed) != bool(a_out.failed):
        raise AssertionError(
            f"B-axioms and A-axioms disagree: B failed {sorted(b_out.failed)}, A failed {sorted(a_out.failed)}"
        )
    return AxiomReport(not b_out.failed, (b_out.items + a_out.items)[:limit])


def check_median_axioms(s: Structure, max_violations: int | None = None) -> AxiomReport:
    """Exhaustive check of M1 (pairs), M2 (triples), and M3 (quintuples)."""
    caps.require("median_axioms", s.n, "median axiom scan")
    limit = caps.get("violations") if max_violations is None else max_violations
    out = _Collector(limit)
    n = s.n
    T = s.median_array
    idx = np.arange(n)
    m1 = T[idx[:, None], idx[:, None], idx[None, :]]  # m(x, x, y)
    for x, y in np.argwhere(m1 != idx[:, None])[: limit + 1]:
        out.add("M1", (int(x), int(y)))
    for perm in ((1, 0, 2), (1, 2, 0)):
        for x, y, z in np.argwhere(T != T.transpose(perm))[: limit + 1]:
            out.add("M2", (int(x), int(y), int(z)))
    # m(m(x,y,z),u,v) == m(x, m(y,u,v), m(z,u,v)) for all x,y,z,u,v
    X = idx[:, None, None]
    for u in range(n):
        for v in range(n):
            col = T[:, u, v]
            lhs = col[T]
            rhs = T[X, col[None, :, None], col[None, None, :]]
            for x, y, z in np.argwhere(lhs != rhs)[: limit + 1]:
                out.add("M3", (int(x), int(y), int(z), u, v))
            if "M3" in out.failed and len(out.items) >= limit:
                return AxiomReport(False, out.items)
    return AxiomReport(not out.failed, out.items)


def check_median_pretree(r: TernaryRelation, max_violations: int | None = None) -> AxiomReport:
    """Pretree axioms plus non-emptiness of every triple-interval intersection."""
    limit = caps.get("violations") if max_violations is None else max_violations
    report = check_pretree_axioms(r, limit)
    if not report.passed:
        return report
    out = _Collector(limit)
    n = r.n
    M = r.masks
    for a, b, c in itertools.combinations_with_replacement(range(n), 3):
        common = M[a * n + b] & M[a * n + c] & M[b * n + c]
        if not common:
            out.add("median-nonempty", (a, b, c))
        elif common & (common - 1):
            raise AssertionError(f"pretree median of {(a, b, c)} is not a singleton")
    return AxiomReport(not out.failed, out.items)


def is_median_pretree(r: TernaryRelation) -> bool:
    return check_median_pretree(r).passed


def median_from_relation(r: TernaryRelation) -> Structure:
    """Table-backed median algebra of a median pretree (median as interval meet)."""
    if not is_median_pretree(r):
        raise InvalidInput("relation is not a median pretree")
    n = r.n
    M = r.masks
    flat = []
    for a in range(n):
        for b in range(n):
            ab = M[a * n + b]
            for c in range(n):
                common = ab & M[a * n + c] & M[b * n + c]
                flat.append(common.bit_length() - 1)
    return Structure.from_table(n, flat)
