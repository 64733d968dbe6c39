"""Adjacent doublets (gaps) and the variation functionals.

``variation_on`` sums ``|f(a) - f(b)|`` over the gaps of a finite subalgebra;
``total_variation`` takes the supremum over subalgebras and
``linear_variation`` the supremum over linear subsets.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import caps
from ._bits import iter_bits, to_mask, to_set
from .convexity import _direction, is_subalgebra_mask, subalgebras
from .errors import InvalidInput, NotASubalgebra
from .structures import TREELIKE, Structure

INFINITY = math.inf
TIE_TOL = 1e-12

Gap = tuple[int, int]


@dataclass(frozen=True)
class RealFunction:
    """A finite real value per point, optionally with a declared range ``[c, d]``."""

    values: tuple[float, ...]
    range: tuple[float, float] | None = None

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidInput("function values must be finite")
        if self.range is not None:
            c, d = (float(x) for x in self.range)
            if c > d:
                raise InvalidInput(f"empty range [{c}, {d}]")
            object.__setattr__(self, "range", (c, d))
            bad = [v for v in vals if not c <= v <= d]
            if bad:
                raise InvalidInput(f"value {bad[0]} outside declared range [{c}, {d}]")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, p: int) -> float:
        return self.values[p]

    def __iter__(self):
        return iter(self.values)

    def restrict(self, points: Sequence[int]) -> "RealFunction":
        return RealFunction(tuple(self.values[p] for p in points), self.range)

    def compose(self, h: Sequence[int]) -> "RealFunction":
        """``f o h`` for a point map ``h``."""
        return RealFunction(tuple(self.values[v] for v in h), self.range)


def as_function(s: Structure, f) -> RealFunction:
    if not isinstance(f, RealFunction):
        f = RealFunction(tuple(f))
    if len(f) != s.n:
        raise InvalidInput(f"function has {len(f)} values, structure has {s.n} points")
    return f


@dataclass
class VariationReport:
    value: float
    witness: frozenset[int] | None
    contributions: dict[Gap, float] = field(default_factory=dict)

    def __float__(self) -> float:
        return self.value


# -- gaps ---------------------------------------------------------------------------


def adjacency_gaps_scan(s: Structure, mask: int) -> list[Gap]:
    """Interval-scan oracle: pairs whose ambient interval meets Y only in the pair."""
    im = s.interval_masks
    pts = list(iter_bits(mask))
    out = []
    for i, a in enumerate(pts):
        row = im[a]
        for b in pts[i + 1:]:
            if row[b] & mask == (1 << a) | (1 << b):
                out.append((a, b))
    return out


def adjacency_gaps(s: Structure, points: Iterable[int] | None = None) -> frozenset[Gap]:
    """All ``Y``-adjacent doublets ``(a, b)``, ``a < b``; ``Y`` defaults to all points.

    For tree-like backends the gaps of the whole ground set are its edges.
    """
    if points is None:
        mask = s.full_mask
    else:
        mask = to_mask(s.check_point(p) for p in points)
    if not mask:
        raise InvalidInput("adjacency gaps need a nonempty point set")
    if mask == s.full_mask and s.kind in TREELIKE:
        return frozenset(s.tree_edges)
    return frozenset(adjacency_gaps_scan(s, mask))


def _gap_sum(f: RealFunction, gaps: Iterable[Gap]) -> tuple[float, dict[Gap, float]]:
    contrib = {g: abs(f[g[0]] - f[g[1]]) for g in sorted(gaps)}
    return math.fsum(contrib.values()), contrib


# -- variation on a subalgebra ------------------------------------------------------


def _sigma_mask(s: Structure, sigma, relaxed: bool) -> int:
    mask = s.full_mask if sigma is None else to_mask(s.check_point(p) for p in sigma)
    if not mask:
        raise InvalidInput("sigma must be nonempty")
    if not relaxed and not is_subalgebra_mask(s, mask):
        raise NotASubalgebra(to_set(mask))
    return mask


def variation_on(s: Structure, f, sigma: Iterable[int] | None = None, relaxed: bool = False) -> VariationReport:
    """Sum of ``|f(a) - f(b)|`` over the gaps of ``sigma`` (default: all points).

    ``sigma`` must be a subalgebra unless ``relaxed`` is set.
    """
    f = as_function(s, f)
    mask = _sigma_mask(s, sigma, relaxed)
    value, contrib = _gap_sum(f, adjacency_gaps(s, iter_bits(mask)))
    return VariationReport(value, to_set(mask), contrib)


def restricted_variation(s: Structure, f, sigma: Iterable[int] | None, within: Iterable[int]) -> float:
    """Variation of ``sigma`` counting only gaps that lie inside ``within``."""
    f = as_function(s, f)
    mask = _sigma_mask(s, sigma, relaxed=False)
    inside = to_mask(s.check_point(p) for p in within)
    gaps = [g for g in adjacency_gaps(s, iter_bits(mask)) if (inside >> g[0]) & 1 and (inside >> g[1]) & 1]
    return _gap_sum(f, gaps)[0]


# -- total variation ------------------------------------------------------------------


def _better(value: float, key: tuple[int, ...], best_value: float, best_key) -> bool:
    if best_key is None or value > best_value + TIE_TOL:
        return True
    return abs(value - best_value) <= TIE_TOL and key < best_key


def enumerate_total_variation(s: Structure, f) -> VariationReport:
    """Maximum of the subalgebra variation over every nonempty subalgebra.

    Exhaustive (NextClosure over the median closure system); bounded by the
    ``subalgebras`` size cap. Ties go to the lexicographically smallest set.
    """
    f = as_function(s, f)
    caps.require("subalgebras", s.n, "subalgebra enumeration")
    im = s.interval_masks
    vals = f.values
    best_value, best_key, best_mask = 0.0, None, 0
    for mask in subalgebras(s):
        if not mask:
            continue
        pts = list(iter_bits(mask))
        total = 0.0
        for i, a in enumerate(pts):
            row = im[a]
            fa = vals[a]
            for b in pts[i + 1:]:
                if row[b] & mask == (1 << a) | (1 << b):
                    total += abs(fa - vals[b])
        key = tuple(pts)
        if _better(total, key, best_value, best_key):
            best_value, best_key, best_mask = total, key, mask
    value, contrib = _gap_sum(f, adjacency_gaps_scan(s, best_mask))
    return VariationReport(value, to_set(best_mask), contrib)


def total_variation(s: Structure, f, method: str = "auto") -> VariationReport:
    """Supremum of the subalgebra variation over all finite subalgebras.

    ``method``: ``"ground"`` evaluates the whole ground set (exact on median
    pretrees, where larger subalgebras never have smaller variation);
    ``"enumerate"`` maximizes over all subalgebras; ``"auto"`` picks ``ground``
    for median pretrees and ``enumerate`` otherwise.
    """
    f = as_function(s, f)
    if method == "auto":
        method = "ground" if s.is_median_pretree else "enumerate"
    if method == "ground":
        return variation_on(s, f)
    if method == "enumerate":
        return enumerate_total_variation(s, f)
    raise InvalidInput(f"unknown method {method!r}")


def in_bv_r(s: Structure, f, r: float, tol: float = 1e-9) -> bool:
    return total_variation(s, f).value <= r + tol


# -- linear variation ------------------------------------------------------------------


def _path_variation(f: RealFunction, order: Sequence[int]) -> float:
    return math.fsum(abs(f[a] - f[b]) for a, b in zip(order, order[1:]))


def linear_variation_dp(s: Structure, f) -> VariationReport:
    """Linear variation on a tree-like backend by two-phase dynamic programming.

    Maximal linear subsets of a tree are leaf-to-leaf paths, so the answer is
    the heaviest path under edge weights ``|f(u) - f(v)|``. Phase one computes,
    bottom-up, the heaviest downward path from each vertex; phase two joins the
    two heaviest child branches at every vertex.
    """
    f = as_function(s, f)
    if s.kind not in TREELIKE:
        raise InvalidInput("dynamic programming needs a tree, chain, or star backend")
    n = s.n
    adj = s.adjacency
    parent = [-1] * n
    order = [0]
    seen = [False] * n
    seen[0] = True
    for u in order:
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                parent[v] = u
                order.append(v)
    down = [0.0] * n
    down_next = [-1] * n
    for u in reversed(order):
        for v in adj[u]:
            if v == parent[u]:
                continue
            cand = down[v] + abs(f[u] - f[v])
            if cand > down[u] + TIE_TOL:
                down[u] = cand
                down_next[u] = v
    best_value, best_path = -1.0, None
    for u in order:
        branches = []
        for v in adj[u]:
            if v != parent[u]:
                branches.append((down[v] + abs(f[u] - f[v]), v))
        branches.sort(key=lambda t: (-t[0], t[1]))
        value = sum(w for w, _ in branches[:2])
        if value > best_value + TIE_TOL:
            legs = []
            for _, v in branches[:2]:
                leg = [v]
                while down_next[leg[-1]] != -1:
                    leg.append(down_next[leg[-1]])
                legs.append(leg)
            if len(legs) == 2:
                path = list(reversed(legs[0])) + [u] + legs[1]
            elif legs:
                path = [u] + legs[0]
            else:
                path = [u]
            best_value, best_path = value, path
    value = _path_variation(f, best_path)
    contrib = {tuple(sorted(p)): abs(f[p[0]] - f[p[1]]) for p in zip(best_path, best_path[1:])}
    return VariationReport(value, frozenset(best_path), contrib)


def linear_variation_paths(s: Structure, f) -> float:
    """Oracle for tree-like backends: heaviest path over all leaf pairs."""
    f = as_function(s, f)
    if s.kind not in TREELIKE:
        raise InvalidInput("leaf-pair enumeration needs a tree-like backend")
    if s.n == 1:
        return 0.0
    adj = s.adjacency
    leaves = [v for v in range(s.n) if len(adj[v]) <= 1]
    best = 0.0
    for src in leaves:
        # path weights from src to every vertex
        weight = {src: 0.0}
        stack = [src]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in weight:
                    weight[v] = weight[u] + abs(f[u] - f[v])
                    stack.append(v)
        best = max(best, max(weight[t] for t in leaves))
    return best


def maximal_linear_subsets(s: Structure) -> list[tuple[int, ...]]:
    """All maximal linear subsets, each given in its first direction.

    Depth-first search over linear subsets (linearity is hereditary); bounded
    by the ``linear_subsets`` size cap.
    """
    caps.require("linear_subsets", s.n, "linear subset enumeration")
    im = s.interval_masks
    n = s.n
    found: list[tuple[int, ...]] = []

    def collinear_with(pts, p):
        for a, b in itertools.combinations(pts, 2):
            if not ((im[b][p] >> a) & 1 or (im[a][p] >> b) & 1 or (im[a][b] >> p) & 1):
                return False
        return True

    def extendable(pts):
        members = set(pts)
        for p in range(n):
            if p not in members and collinear_with(pts, p) and _direction(s, sorted(pts + [p])) is not None:
                return True
        return False

    def grow(pts, start):
        for p in range(start, n):
            if collinear_with(pts, p):
                cand = pts + [p]
                if _direction(s, cand) is not None:
                    grow(cand, p + 1)
        if not extendable(pts):
            found.append(_direction(s, pts))

    grow([], 0)
    return found


def linear_variation_bruteforce(s: Structure, f) -> VariationReport:
    f = as_function(s, f)
    best_value, best_key, best_order = 0.0, None, None
    for order in maximal_linear_subsets(s):
        value = _path_variation(f, order)
        key = tuple(sorted(order))
        if _better(value, key, best_value, best_key):
            best_value, best_key, best_order = value, key, order
    contrib = {tuple(sorted(p)): abs(f[p[0]] - f[p[1]]) for p in zip(best_order, best_order[1:])}
    return VariationReport(math.fsum(contrib.values()), frozenset(best_order), contrib)


def linear_variation(s: Structure, f) -> VariationReport:
    """Supremum of the variation over finite linear subsets.

    The maximum is attained on a maximal linear subset, summed along one of its
    directions. Tree-like backends use :func:`linear_variation_dp`, anything
    else brute-force enumeration.
    """
    if s.kind in TREELIKE:
        return linear_variation_dp(s, f)
    return linear_variation_bruteforce(s, f)


# -- star-specific helpers ------------------------------------------------------------------


def deviation_support(s: Structure, f, base: int = 0) -> frozenset[int]:
    """Leaves of a star where ``f`` differs from its value at the hub."""
    if s.kind != "star":
        raise InvalidInput("deviation_support needs a star structure")
    if base != 0:
        raise InvalidInput("the base point must be the hub 0")
    f = as_function(s, f)
    return frozenset(k for k in range(1, s.n) if f[k] != f[0])


STAR_RULES = {
    "hub": lambda n: [1.0] + [0.0] * (n - 1),
    "geometric": lambda n: [0.0] + [2.0 ** -k for k in range(1, n)],
}


@dataclass
class ProbeResult:
    rule: str
    sizes: list[int]
    values: list[float]

    @property
    def strictly_increasing(self) -> bool:
        return all(b > a for a, b in zip(self.values, self.values[1:]))

    @property
    def increments(self) -> list[float]:
        return [b - a for a, b in zip(self.values, self.values[1:])]

    @property
    def trend(self) -> str:
        """``diverging`` when increments never shrink, ``converging`` when they decay."""
        inc = self.increments
        if not inc or not self.strictly_increasing:
            return "indeterminate"
        if all(b >= a - TIE_TOL for a, b in zip(inc, inc[1:])):
            return "diverging"
        if all(b < a for a, b in zip(inc, inc[1:])):
            return "converging"
        return "indeterminate"


def limit_probe(rule: str, max_n: int, min_n: int = 2) -> ProbeResult:
    """Variation of a star function rule over growing truncations ``star_N``.

    The infinite star itself is never materialized; the trend of the finite
    values is what gets reported.
    """
    if rule not in STAR_RULES:
        raise InvalidInput(f"unknown star rule {rule!r}; choose from {sorted(STAR_RULES)}")
    if max_n < min_n:
        raise InvalidInput("max must be at least 2")
    sizes = list(range(min_n, max_n + 1))
    values = [total_variation(Structure.star(n), STAR_RULES[rule](n)).value for n in sizes]
    return ProbeResult(rule, sizes, values)
