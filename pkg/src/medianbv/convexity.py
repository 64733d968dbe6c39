"""Intervals, convex sets, spans, linear subsets, and monotone maps."""
from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from . import caps
from ._bits import iter_bits, next_closure, popcount, to_mask, to_set
from .errors import InvalidInput, NotLinear
from .structures import Structure

PointSet = frozenset


def _mask_of(s: Structure, points: Iterable[int]) -> int:
    return to_mask(s.check_point(p) for p in points)


def interval(s: Structure, a: int, b: int) -> frozenset[int]:
    """``[a,b] = {x : m(a,x,b) = x}``."""
    return to_set(s.interval_mask(s.check_point(a), s.check_point(b)))


def is_convex_mask(s: Structure, mask: int) -> bool:
    im = s.interval_masks
    pts = list(iter_bits(mask))
    for i, a in enumerate(pts):
        row = im[a]
        for b in pts[i + 1:]:
            if row[b] & ~mask:
                return False
    return True


def is_convex(s: Structure, points: Iterable[int]) -> bool:
    return is_convex_mask(s, _mask_of(s, points))


def _hull_pass(s: Structure, mask: int) -> int:
    im = s.interval_masks
    out = mask
    pts = list(iter_bits(mask))
    for i, a in enumerate(pts):
        row = im[a]
        for b in pts[i + 1:]:
            out |= row[b]
    return out


def hull_mask(s: Structure, mask: int) -> int:
    while True:
        nxt = _hull_pass(s, mask)
        if nxt == mask:
            return mask
        mask = nxt


def convex_hull(s: Structure, points: Iterable[int]) -> frozenset[int]:
    """Smallest convex superset, by iterating pairwise-interval unions.

    On median pretrees one pass already reaches the fixpoint; that is asserted.
    """
    mask = _mask_of(s, points)
    hull = hull_mask(s, mask)
    if s.is_median_pretree:
        one_pass = _hull_pass(s, mask)
        assert one_pass == hull, "single-pass hull differs from fixpoint on a median pretree"
    return to_set(hull)


def span_mask(s: Structure, mask: int, forbid: int = 0) -> int:
    """Median closure of a mask; -1 as soon as a point of ``forbid`` appears."""
    med = s.median_lists
    pts = list(iter_bits(mask))
    new = pts[:]
    while new:
        added = []
        for p in new:
            row = med[p]
            for q in pts:
                rq = row[q]
                for r in pts:
                    x = rq[r]
                    if not (mask >> x) & 1:
                        if (forbid >> x) & 1:
                            return -1
                        mask |= 1 << x
                        added.append(x)
        pts = pts + added
        new = added
    return mask


def span(s: Structure, points: Iterable[int]) -> frozenset[int]:
    """Subalgebra generated by the points (closure under the median)."""
    mask = _mask_of(s, points)
    closed = span_mask(s, mask)
    assert closed & ~hull_mask(s, mask) == 0, "span escaped the convex hull"
    return to_set(closed)


def is_subalgebra_mask(s: Structure, mask: int) -> bool:
    return span_mask(s, mask) == mask


def is_subalgebra(s: Structure, points: Iterable[int]) -> bool:
    return is_subalgebra_mask(s, _mask_of(s, points))


def subalgebras(s: Structure):
    """Yield every subalgebra mask (including the empty one), lectic order."""
    return next_closure(s.n, lambda m, forbid: span_mask(s, m, forbid))


def convex_sets(s: Structure):
    """Yield every convex subset mask (including the empty one)."""
    im = s.interval_masks

    def closure(mask, forbid):
        while True:
            pts = list(iter_bits(mask))
            nxt = mask
            for i, a in enumerate(pts):
                row = im[a]
                for b in pts[i + 1:]:
                    nxt |= row[b]
            if nxt & forbid:
                return -1
            if nxt == mask:
                return mask
            mask = nxt

    return next_closure(s.n, closure)


# -- collinearity and directions ------------------------------------------------


def is_collinear(s: Structure, a: int, b: int, c: int) -> bool:
    im = s.interval_masks
    a, b, c = s.check_point(a), s.check_point(b), s.check_point(c)
    return bool((im[b][c] >> a) & 1 or (im[a][c] >> b) & 1 or (im[a][b] >> c) & 1)


def _all_collinear(s: Structure, pts: Sequence[int]) -> bool:
    im = s.interval_masks
    for a, b, c in itertools.combinations(pts, 3):
        if not ((im[b][c] >> a) & 1 or (im[a][c] >> b) & 1 or (im[a][b] >> c) & 1):
            return False
    return True


def _direction(s: Structure, pts: Sequence[int]) -> tuple[int, ...] | None:
    """One compatible total order of ``pts`` or None when none exists."""
    if len(pts) <= 2:
        return tuple(sorted(pts))
    im = s.interval_masks
    mask = to_mask(pts)
    interior = 0
    for a, b in itertools.combinations(pts, 2):
        interior |= im[a][b] & mask & ~((1 << a) | (1 << b))
    extremes = [p for p in pts if not (interior >> p) & 1]
    if not extremes:
        return None
    u = min(extremes)
    order = tuple(sorted(pts, key=lambda y: (popcount(im[u][y] & mask), y)))
    # the order's betweenness must reproduce the structure's on the subset
    pos = {p: i for i, p in enumerate(order)}
    for a, b, c in itertools.permutations(pts, 3):
        between = pos[a] < pos[b] < pos[c] or pos[c] < pos[b] < pos[a]
        if between != bool((im[a][c] >> b) & 1):
            return None
    return order


def is_linear(s: Structure, points: Iterable[int]) -> bool:
    """All triples collinear and a compatible direction exists.

    On pretrees the second condition follows from the first; on general median
    algebras (e.g. the square in a grid) it does not.
    """
    pts = sorted({s.check_point(p) for p in points})
    if len(pts) <= 2:
        return True
    return _all_collinear(s, pts) and _direction(s, pts) is not None


def directions(s: Structure, points: Iterable[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The two total orders on a linear subset whose betweenness matches ``s``.

    The first starts at the smallest extreme point; the second is its reverse.
    Subsets with fewer than two points get the trivial order twice.
    """
    pts = sorted({s.check_point(p) for p in points})
    if len(pts) < 2:
        order = tuple(pts)
        return order, order
    if not _all_collinear(s, pts):
        raise NotLinear(pts)
    order = _direction(s, pts)
    if order is None:
        raise NotLinear(pts)
    if len(pts) == 2:
        order = tuple(pts)
    return order, tuple(reversed(order))


# -- maps between structures ------------------------------------------------------


def _check_map(h: Sequence[int], src: Structure, dst: Structure) -> list[int]:
    if len(h) != src.n:
        raise InvalidInput(f"map must assign a value to each of the {src.n} source points")
    return [dst.check_point(v) for v in h]


def is_monotone(h: Sequence[int], src: Structure, dst: Structure) -> bool:
    """``h[a,b]`` lies inside ``[h(a), h(b)]`` for every pair."""
    h = _check_map(h, src, dst)
    sim = src.interval_masks
    dim = dst.interval_masks
    bit = [1 << v for v in h]
    for a in range(src.n):
        for b in range(a, src.n):
            image = 0
            for x in iter_bits(sim[a][b]):
                image |= bit[x]
            if image & ~dim[h[a]][h[b]]:
                return False
    return True


def is_median_preserving(h: Sequence[int], src: Structure, dst: Structure) -> bool:
    h = _check_map(h, src, dst)
    sm = src.median_lists
    dm = dst.median_lists
    for x, y, z in itertools.combinations_with_replacement(range(src.n), 3):
        if h[sm[x][y][z]] != dm[h[x]][h[y]][h[z]]:
            return False
    return True


def is_convexity_preserving(h: Sequence[int], src: Structure, dst: Structure) -> bool:
    """Preimage of every convex subset of ``dst`` is convex in ``src``."""
    h = _check_map(h, src, dst)
    caps.require("convex_subsets", dst.n, "convex subset enumeration")
    preimage_of = [0] * dst.n
    for x, v in enumerate(h):
        preimage_of[v] |= 1 << x
    for convex in convex_sets(dst):
        pre = 0
        for v in iter_bits(convex):
            pre |= preimage_of[v]
        if not is_convex_mask(src, pre):
            return False
    return True


def value_chain(values: Sequence[float]) -> tuple[Structure, list[int]]:
    """Chain of the distinct values, and each value's rank in it."""
    distinct = sorted(set(values))
    rank = {v: i for i, v in enumerate(distinct)}
    return Structure.chain(len(distinct)), [rank[v] for v in values]


def is_monotone_function(s: Structure, values: Sequence[float]) -> bool:
    """Monotonicity of a real-valued function, the reals ordered as a chain."""
    chain, ranks = value_chain(list(values))
    if len(ranks) != s.n:
        raise InvalidInput(f"function must have {s.n} values")
    return is_monotone(ranks, s, chain)
