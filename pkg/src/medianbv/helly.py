"""Pointwise selection from variation-bounded function sequences.

``select_finite`` is the pigeonhole step: cut ``[c, d]`` into boxes of width
``eps`` at every point and keep the most populated box pattern.
``select_diagonal`` repeats that with a shrinking ``eps`` over a lazily pulled
prefix of an unbounded source.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InvalidInput, SourceExhausted
from .structures import Structure
from .variation import total_variation

Cell = tuple[float, float]


@dataclass
class SelectionResult:
    indices: tuple[int, ...]
    epsilon: float
    cell: tuple[Cell, ...]
    stages: tuple[tuple[int, ...], ...] = field(default_factory=tuple)

    @property
    def limit_estimate(self) -> tuple[float, ...]:
        """Per-point midpoint of the final cell."""
        return tuple((lo + hi) / 2 for lo, hi in self.cell)


def _box_count(c: float, d: float, eps: float) -> int:
    return max(1, math.ceil((d - c) / eps))


def _box(v: float, c: float, eps: float, k: int) -> int:
    return min(int((v - c) // eps), k - 1)


def _cell(j: int, c: float, d: float, eps: float) -> Cell:
    return (c + j * eps, min(c + (j + 1) * eps, d))


def _validate(fs, value_range, eps) -> tuple[list[tuple[float, ...]], float, float]:
    if eps <= 0:
        raise InvalidInput("eps must be positive")
    c, d = (float(x) for x in value_range)
    if c > d:
        raise InvalidInput(f"empty range [{c}, {d}]")
    rows = [tuple(float(v) for v in f) for f in fs]
    if not rows:
        raise InvalidInput("no functions to select from")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise InvalidInput(f"function {i} has {len(row)} values, expected {width}")
        for v in row:
            if not c <= v <= d:
                raise InvalidInput(f"function {i} leaves the range [{c}, {d}] with value {v}")
    return rows, c, d


def _largest_class(rows, candidates: Sequence[int], c: float, d: float, eps: float):
    k = _box_count(c, d, eps)
    classes: dict[tuple[int, ...], list[int]] = {}
    for i in candidates:
        key = tuple(_box(v, c, eps, k) for v in rows[i])
        classes.setdefault(key, []).append(i)
    # largest class; ties to the one whose index list is lexicographically first
    key, members = min(classes.items(), key=lambda kv: (-len(kv[1]), kv[1]))
    return members, tuple(_cell(j, c, d, eps) for j in key), k


def pigeonhole_bound(count: int, points: int, c: float, d: float, eps: float) -> int:
    """Guaranteed size ``ceil(N / boxes**points)`` of the largest class."""
    boxes = _box_count(c, d, eps) ** points
    return -(-count // boxes)


def select_finite(fs: Iterable, value_range: Sequence[float], eps: float) -> SelectionResult:
    """Largest class of functions sharing one box pattern at every point.

    Boxes are ``[c + k*eps, c + (k+1)*eps)`` with ``d`` placed in the last box;
    any two selected functions differ by at most ``eps`` at every point.
    """
    rows, c, d = _validate(fs, value_range, eps)
    members, cell, _ = _largest_class(rows, range(len(rows)), c, d, eps)
    return SelectionResult(tuple(members), float(eps), cell, (tuple(members),))


class _Prefix:
    """Growable prefix of an iterable or an index callable ``i -> function``."""

    def __init__(self, source):
        self.buffer: list[tuple[float, ...]] = []
        self.exhausted = False
        if callable(source):
            self._fetch = source
        else:
            iterator = iter(source)
            self._fetch = lambda i: next(iterator)

    def take(self, count: int) -> list[tuple[float, ...]]:
        while len(self.buffer) < count and not self.exhausted:
            try:
                item = self._fetch(len(self.buffer))
            except (StopIteration, IndexError):
                self.exhausted = True
                break
            self.buffer.append(tuple(float(v) for v in item))
        return self.buffer


def select_diagonal(
    source,
    s: Structure,
    value_range: Sequence[float],
    eps_schedule: Sequence[float],
    depth: int,
    horizon: int = 64,
    max_horizon: int = 1 << 16,
) -> SelectionResult:
    """Nested refinement over ``depth`` stages of a decreasing tolerance schedule.

    Stage ``k`` keeps the largest ``eps_schedule[k]`` box class among the
    survivors of stage ``k-1``, so stage classes are nested. The first
    ``depth`` members of the last class are returned; they are pairwise
    ``eps_schedule[depth-1]``-close. ``source`` is an iterable of functions or a
    callable ``i -> function``; it is pulled lazily, doubling the horizon until
    the last class holds ``depth`` members.
    """
    if depth < 1:
        raise InvalidInput("depth must be at least 1")
    eps = [float(e) for e in eps_schedule]
    if len(eps) < depth:
        raise InvalidInput(f"eps schedule needs at least {depth} entries")
    eps = eps[:depth]
    if any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise InvalidInput("eps schedule must be positive and strictly decreasing")
    prefix_source = _Prefix(source)
    size = max(horizon, depth)
    while True:
        prefix = prefix_source.take(size)
        if not prefix:
            raise SourceExhausted("source yielded no functions")
        rows, c, d = _validate(prefix, value_range, eps[-1])
        if len(rows[0]) != s.n:
            raise InvalidInput(f"functions have {len(rows[0])} values, structure has {s.n} points")
        survivors: Sequence[int] = range(len(rows))
        stages = []
        cell: tuple[Cell, ...] = ()
        for e in eps:
            survivors, cell, _ = _largest_class(rows, survivors, c, d, e)
            stages.append(tuple(survivors))
        if len(survivors) >= depth:
            return SelectionResult(tuple(survivors[:depth]), eps[-1], cell, tuple(stages))
        if prefix_source.exhausted or size >= max_horizon:
            raise SourceExhausted(
                f"after {len(rows)} functions the final class has {len(survivors)} < {depth} members"
            )
        size *= 2


def max_pairwise_gap(fs: Sequence[Sequence[float]], indices: Iterable[int]) -> float:
    """Largest pointwise difference between any two selected functions."""
    chosen = [fs[i] for i in indices]
    worst = 0.0
    for f, g in itertools.combinations(chosen, 2):
        worst = max(worst, max((abs(a - b) for a, b in zip(f, g)), default=0.0))
    return worst


def verify_limit_variation(s: Structure, limit, r: float, tol: float = 0.0) -> bool:
    """Whether the limit function stays within variation ``r + tol``."""
    return total_variation(s, limit).value <= r + tol
