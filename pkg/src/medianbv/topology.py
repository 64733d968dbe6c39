"""Shadows, branches, and the shadow topology on finite pretrees.

Every topology on a finite set is determined by the minimal open
neighbourhood ``U(x)`` of each point: a set is open iff it contains ``U(x)``
for each of its points. Most checks here work on those neighbourhoods.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from . import caps
from ._bits import iter_bits, popcount, to_mask, to_set
from .errors import CoverInvalid, InvalidInput
from .structures import Structure, TernaryRelation, induced_betweenness


def _relation(r) -> TernaryRelation:
    return induced_betweenness(r) if isinstance(r, Structure) else r


def _saturated_masks(n: int, nbhd: Sequence[int]):
    """All masks containing ``nbhd[x]`` for each of their points, ascending."""
    for mask in range(1 << n):
        ok = True
        for x in iter_bits(mask):
            if nbhd[x] & ~mask:
                ok = False
                break
        if ok:
            yield mask


@dataclass(frozen=True, eq=False)
class FiniteTopology:
    """Open sets on ``0..n-1``, kept as bitmasks; validated at construction."""

    n: int
    open_masks: tuple[int, ...]

    def __post_init__(self):
        masks = tuple(sorted(set(self.open_masks), key=lambda m: (popcount(m), sorted(iter_bits(m)))))
        object.__setattr__(self, "open_masks", masks)
        full = (1 << self.n) - 1
        present = set(masks)
        if 0 not in present or full not in present:
            raise InvalidInput("a topology must contain the empty set and the ground set")
        if any(m & ~full for m in masks):
            raise InvalidInput("open set mentions a point outside the ground set")
        nbhd = self.minimal_neighborhoods
        # with unions available, intersections are closed iff every U(x) is itself open
        if any(m not in present for m in nbhd):
            raise InvalidInput("open sets are not closed under intersection")
        if len(masks) * len(masks) <= (1 << self.n) * max(self.n, 1):
            for a in masks:
                for b in masks:
                    if a | b not in present:
                        raise InvalidInput("open sets are not closed under union")
        elif sum(1 for _ in _saturated_masks(self.n, nbhd)) != len(masks):
            raise InvalidInput("open sets are not closed under union")

    @classmethod
    def from_opens(cls, n: int, opens: Iterable[Iterable[int]]) -> "FiniteTopology":
        return cls(n, tuple(to_mask(o) for o in opens))

    @classmethod
    def from_neighborhoods(cls, n: int, nbhd: Sequence[int]) -> "FiniteTopology":
        """Topology whose open sets are the unions of the given neighbourhoods.

        ``nbhd[x]`` must contain ``x``; it is replaced by the intersection of all
        given neighbourhoods containing ``x`` so the result is consistent.
        """
        full = (1 << n) - 1
        fixed = []
        for x in range(n):
            m = full
            for y in range(n):
                if (nbhd[y] >> x) & 1:
                    m &= nbhd[y]
            fixed.append(m)
        return cls(n, tuple(_saturated_masks(n, fixed)))

    @classmethod
    def discrete(cls, n: int) -> "FiniteTopology":
        return cls.from_neighborhoods(n, [1 << x for x in range(n)])

    @classmethod
    def indiscrete(cls, n: int) -> "FiniteTopology":
        return cls(n, (0, (1 << n) - 1))

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def opens(self) -> list[frozenset[int]]:
        return [to_set(m) for m in self.open_masks]

    @cached_property
    def closed_masks(self) -> tuple[int, ...]:
        full = self.full_mask
        return tuple(sorted((full & ~m for m in self.open_masks), key=lambda m: (popcount(m), sorted(iter_bits(m)))))

    @cached_property
    def minimal_neighborhoods(self) -> tuple[int, ...]:
        """``U(x)``: intersection of all open sets containing ``x``."""
        out = []
        for x in range(self.n):
            m = self.full_mask
            for o in self.open_masks:
                if (o >> x) & 1:
                    m &= o
            out.append(m)
        return tuple(out)

    def is_open(self, points: Iterable[int]) -> bool:
        return to_mask(points) in set(self.open_masks)

    def closure_mask(self, mask: int) -> int:
        nbhd = self.minimal_neighborhoods
        return to_mask(x for x in range(self.n) if nbhd[x] & mask)

    def subspace(self, points: Iterable[int]) -> tuple["FiniteTopology", tuple[int, ...]]:
        """Trace topology on a subset, relabelled to ``0..k-1``."""
        pts = tuple(sorted(set(points)))
        index = {p: i for i, p in enumerate(pts)}
        mask = to_mask(pts)
        traces = {to_mask(index[p] for p in iter_bits(o & mask)) for o in self.open_masks}
        return FiniteTopology(len(pts), tuple(traces)), pts

    def dump(self) -> str:
        """One open set per line as a sorted point list, e.g. ``[0, 2]``."""
        return "\n".join(str(sorted(iter_bits(m))) for m in self.open_masks)


def is_closed(t: FiniteTopology, points: Iterable[int]) -> bool:
    return (t.full_mask & ~to_mask(points)) in set(t.open_masks)


def closure(t: FiniteTopology, points: Iterable[int]) -> frozenset[int]:
    return to_set(t.closure_mask(to_mask(points)))


def is_hausdorff(t: FiniteTopology) -> bool:
    """Distinct points have disjoint open neighbourhoods."""
    nbhd = t.minimal_neighborhoods
    for x in range(t.n):
        for y in range(x + 1, t.n):
            if nbhd[x] & nbhd[y]:
                return False
    return True


# -- shadows --------------------------------------------------------------------


def shadow_mask(r: TernaryRelation, u: int, v: int) -> int:
    if u == v:
        raise InvalidInput("a shadow needs two distinct points")
    n = r.n
    return to_mask(x for x in range(n) if r.holds(x, u, v))


def shadow(r, u: int, v: int) -> frozenset[int]:
    """``{x : u in [x, v]}``: the shadow cast by ``u`` with light at ``v``."""
    return to_set(shadow_mask(_relation(r), u, v))


def branch(r, u: int, v: int) -> frozenset[int]:
    """Complement of the shadow of ``(u, v)``."""
    r = _relation(r)
    return to_set(((1 << r.n) - 1) & ~shadow_mask(r, u, v))


def shadow_topology(r) -> FiniteTopology:
    """Topology with the shadows as a subbase for the closed sets.

    Equivalently the branches form a subbase for the open sets, so the minimal
    neighbourhood of ``x`` is the intersection of all branches containing it.
    """
    r = _relation(r)
    n = r.n
    caps.require("shadow", n, "shadow topology")
    full = (1 << n) - 1
    nbhd = [full] * n
    for u in range(n):
        for v in range(n):
            if u == v:
                continue
            br = full & ~shadow_mask(r, u, v)
            for x in iter_bits(br):
                nbhd[x] &= br
    return FiniteTopology(n, tuple(_saturated_masks(n, nbhd)))


# -- fragmentability --------------------------------------------------------------


@dataclass(frozen=True)
class OscillationWitness:
    """Closed ``Y`` on which ``f < alpha`` and ``f > beta`` are both dense."""

    Y: frozenset[int]
    alpha: float
    beta: float


def _values(t: FiniteTopology, f) -> tuple[float, ...]:
    vals = tuple(float(v) for v in f)
    if len(vals) != t.n:
        raise InvalidInput(f"function has {len(vals)} values, space has {t.n} points")
    return vals


def _level_masks(vals) -> dict[float, int]:
    levels: dict[float, int] = {}
    for x, v in enumerate(vals):
        levels[v] = levels.get(v, 0) | (1 << x)
    return levels


def unfragmented_subset(t: FiniteTopology, f) -> frozenset[int] | None:
    """A nonempty ``A`` admitting no open ``O`` with ``f`` constant on ``O & A``.

    On a finite space the epsilon in the definition can be taken below the
    smallest gap between values, so "small diameter" means "constant"; and it
    suffices to test minimal neighbourhoods, since any suitable ``O`` contains
    ``U(x)`` for some ``x`` in ``O & A``. Returns None when ``f`` is fragmented.
    """
    vals = _values(t, f)
    caps.require("fragmented", t.n, "fragmentability scan")
    nbhd = t.minimal_neighborhoods
    levels = _level_masks(vals)
    same = [levels[v] for v in vals]
    for a in range(1, 1 << t.n):
        for x in iter_bits(a):
            if nbhd[x] & a & ~same[x] == 0:
                break
        else:
            return to_set(a)
    return None


def is_fragmented(t: FiniteTopology, f) -> bool:
    return unfragmented_subset(t, f) is None


def unfragmented_witness(t: FiniteTopology, f) -> OscillationWitness | None:
    """Closed ``Y`` and thresholds ``alpha < beta`` with both strict level sets dense in ``Y``.

    Thresholds sit at the quarter points of each gap between consecutive
    distinct values; enlarging either level set only helps density, so these
    are the only candidates needed. Returns None when ``f`` is fragmented.
    """
    vals = _values(t, f)
    if is_fragmented(t, vals):
        return None
    nbhd = t.minimal_neighborhoods
    distinct = sorted(set(vals))
    cuts = []
    for lo, hi in zip(distinct, distinct[1:]):
        gap = hi - lo
        cuts.append((lo + gap / 4, lo + 3 * gap / 4))
    for y in t.closed_masks:
        if not y:
            continue
        for alpha, beta in cuts:
            low = to_mask(x for x in iter_bits(y) if vals[x] < alpha)
            high = to_mask(x for x in iter_bits(y) if vals[x] > beta)
            if all(nbhd[p] & low and nbhd[p] & high for p in iter_bits(y)):
                return OscillationWitness(to_set(y), alpha, beta)
    return None


def check_finite_union_lemma(t: FiniteTopology, f, cover: Sequence[Iterable[int]]) -> bool:
    """Validate a finite closed cover and return whether ``f`` is fragmented."""
    masks = [to_mask(c) for c in cover]
    if not masks:
        raise CoverInvalid("cover is empty")
    closed = set(t.closed_masks)
    for m in masks:
        if m not in closed:
            raise CoverInvalid(f"cover member {sorted(iter_bits(m))} is not closed")
    union = 0
    for m in masks:
        union |= m
    if union != t.full_mask:
        raise CoverInvalid("cover does not exhaust the ground set")
    return is_fragmented(t, f)


def restriction_fragmented(t: FiniteTopology, f, points: Iterable[int]) -> bool:
    """Fragmentability of ``f`` restricted to a subset with the trace topology."""
    sub, pts = t.subspace(points)
    vals = _values(t, f)
    return is_fragmented(sub, [vals[p] for p in pts])
