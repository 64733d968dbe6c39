"""Seeded instance generators and the named fixtures used by the suites.

Every generator is a deterministic function of its parameters and seed.
Suites derive per-trial seeds with :func:`trial_seed`.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from ._bits import iter_bits, to_mask
from .convexity import convex_hull, is_monotone, span
from .errors import InvalidInput
from .structures import TREELIKE, Structure
from .topology import FiniteTopology
from .variation import RealFunction


def trial_seed(seed: int, trial: int) -> int:
    return (seed * 1_000_003 + trial) & 0xFFFFFFFF


def rng_for(seed) -> random.Random:
    return random.Random(seed)


def random_tree(n: int, seed) -> Structure:
    """Uniform labelled tree on ``n`` points, decoded from a random Pruefer sequence."""
    if n < 1:
        raise InvalidInput("a tree needs at least one point")
    rng = rng_for(seed)
    if n == 1:
        return Structure.tree(1, [])
    if n == 2:
        return Structure.tree(2, [(0, 1)])
    code = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for v in code:
        degree[v] += 1
    edges = []
    for v in code:
        leaf = min(u for u in range(n) if degree[u] == 1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = (x for x in range(n) if degree[x] == 1)
    edges.append((u, w))
    return Structure.tree(n, edges)


def random_function(s: Structure, value_range: Sequence[float] = (0.0, 1.0), seed=0) -> RealFunction:
    """I.i.d. uniform values in the range, which is attached to the result."""
    c, d = (float(x) for x in value_range)
    rng = rng_for(seed)
    return RealFunction(tuple(rng.uniform(c, d) if d > c else c for _ in range(s.n)), (c, d))


def random_integer_function(n: int, levels: int, seed) -> tuple[float, ...]:
    rng = rng_for(seed)
    return tuple(float(rng.randrange(levels)) for _ in range(n))


def random_subset(n: int, rng: random.Random, k: int | None = None) -> list[int]:
    if k is None:
        k = rng.randint(1, n)
    return sorted(rng.sample(range(n), min(k, n)))


def _gate_to_path(s: Structure, path: Sequence[int]) -> list[int]:
    """Nearest-point projection of every point onto a tree path."""
    on_path = to_mask(path)
    out = []
    for x in range(s.n):
        # the gate of x is the median of x with the path's two ends
        out.append(s.median(x, path[0], path[-1]))
        assert (on_path >> out[-1]) & 1
    return out


def _tree_path(s: Structure, a: int, b: int) -> list[int]:
    mask = s.interval_mask(a, b)
    im = s.interval_masks
    pts = list(iter_bits(mask))
    return sorted(pts, key=lambda y: bin(im[a][y]).count("1"))


def _structured_proposal(src: Structure, dst: Structure, rng: random.Random) -> list[int]:
    """Gate projection onto a source path, then an order-preserving walk along a target path.

    Only used for tree-like backends; compositions of monotone maps are
    monotone, so the proposal is usually accepted.
    """
    a, b = rng.randrange(src.n), rng.randrange(src.n)
    path = _tree_path(src, a, b)
    gate = _gate_to_path(src, path)
    c, d = rng.randrange(dst.n), rng.randrange(dst.n)
    target = _tree_path(dst, c, d)
    # nondecreasing map from positions on the source path to positions on the target path
    steps = sorted(rng.randrange(len(target)) for _ in range(len(path)))
    if rng.random() < 0.5:
        steps.reverse()
    position = {p: i for i, p in enumerate(path)}
    return [target[steps[position[g]]] for g in gate]


def random_monotone_map(
    src: Structure,
    dst: Structure,
    seed=0,
    max_tries: int = 10_000,
    proposal: str = "uniform",
) -> tuple[int, ...] | None:
    """Rejection sampling against :func:`is_monotone`; None after ``max_tries``.

    ``proposal="uniform"`` draws arbitrary maps; ``"structured"`` draws gate
    projections composed with path walks (tree-like backends only), which
    are far more often monotone. Every candidate passes the same filter.
    """
    if proposal not in ("uniform", "structured"):
        raise InvalidInput(f"unknown proposal {proposal!r}")
    if proposal == "structured" and (src.kind not in TREELIKE or dst.kind not in TREELIKE):
        raise InvalidInput("structured proposals need tree-like source and target")
    rng = rng_for(seed)
    for _ in range(max_tries):
        if proposal == "uniform":
            h = [rng.randrange(dst.n) for _ in range(src.n)]
        else:
            h = _structured_proposal(src, dst, rng)
        if is_monotone(h, src, dst):
            return tuple(h)
    return None


def random_monotone_function(
    s: Structure, value_range: Sequence[float], seed=0, levels: int = 4, max_tries: int = 10_000
) -> RealFunction | None:
    """Monotone real function: a monotone map into a chain, spread over ``[c, d]``."""
    c, d = (float(x) for x in value_range)
    chain = Structure.chain(levels)
    proposal = "structured" if s.kind in TREELIKE else "uniform"
    h = random_monotone_map(s, chain, seed, max_tries, proposal)
    if h is None:
        return None
    rng = rng_for(f"values-{seed}")
    ticks = sorted(rng.uniform(c, d) for _ in range(levels))
    if levels >= 2:
        ticks[0], ticks[-1] = c, d
    return RealFunction(tuple(ticks[v] for v in h), (c, d))


def random_product(seed, max_factor: int = 3) -> Structure:
    """Table backend of the coordinatewise median on a product of two random trees."""
    rng = rng_for(seed)
    t1 = random_tree(rng.randint(1, max_factor), rng.random())
    t2 = random_tree(rng.randint(2, max_factor), rng.random())
    n2 = t2.n

    def med(x, y, z):
        a = t1.median(x // n2, y // n2, z // n2)
        b = t2.median(x % n2, y % n2, z % n2)
        return a * n2 + b

    return Structure.from_function(t1.n * n2, med)


def random_topology(n: int, seed, density: float | None = None) -> FiniteTopology:
    """Topology of a random preorder (minimal neighbourhood = up-set)."""
    rng = rng_for(seed)
    if density is None:
        density = rng.random() * 0.5
    up = [1 << x for x in range(n)]
    for x in range(n):
        for y in range(n):
            if x != y and rng.random() < density:
                up[x] |= 1 << y
    # transitive closure
    changed = True
    while changed:
        changed = False
        for x in range(n):
            m = up[x]
            for y in iter_bits(m):
                m |= up[y]
            if m != up[x]:
                up[x] = m
                changed = True
    return FiniteTopology.from_neighborhoods(n, up)


def random_closed_cover(t: FiniteTopology, seed, max_members: int = 4) -> list[frozenset[int]]:
    """A few random closed sets, topped up until they cover the space."""
    rng = rng_for(seed)
    closed = [m for m in t.closed_masks if m]
    cover = [rng.choice(closed) for _ in range(rng.randint(1, max_members))]
    union = 0
    for m in cover:
        union |= m
    while union != t.full_mask:
        missing = t.full_mask & ~union
        x = next(iter_bits(missing))
        candidates = [m for m in closed if (m >> x) & 1]
        m = rng.choice(candidates)
        cover.append(m)
        union |= m
    return [frozenset(iter_bits(m)) for m in cover]


def random_almost_disjoint_convex(s: Structure, rng: random.Random, tries: int = 200):
    """Two convex sets meeting in at most one point (hulls of small random sets)."""
    for _ in range(tries):
        a = convex_hull(s, random_subset(s.n, rng, rng.randint(1, 3)))
        b = convex_hull(s, random_subset(s.n, rng, rng.randint(1, 3)))
        if len(a & b) <= 1:
            return a, b
    p = rng.randrange(s.n)
    return frozenset([p]), frozenset([p])


def random_subalgebra(s: Structure, rng: random.Random, k: int | None = None) -> frozenset[int]:
    return span(s, random_subset(s.n, rng, k))


# -- named fixtures -------------------------------------------------------------------


TRIOD_LABELS = ("a", "b", "c", "m")


def triod() -> Structure:
    """The 4-element triod: leaves a, b, c around the centre m."""
    return Structure.tree(4, [(0, 3), (1, 3), (2, 3)], labels=TRIOD_LABELS)


def triod_function() -> RealFunction:
    """f(a) = f(c) = f(m) = 1, f(b) = 0."""
    return RealFunction((1.0, 0.0, 1.0, 1.0), (-1.0, 1.0))


def star_hub_indicator(n: int) -> RealFunction:
    return RealFunction(tuple([1.0] + [0.0] * (n - 1)))


def star_geometric(n: int) -> RealFunction:
    """f(0) = 0 and f(k) = 2^-k on the leaves."""
    return RealFunction(tuple([0.0] + [2.0 ** -k for k in range(1, n)]))


def grid_right_column(k: int) -> tuple[Structure, RealFunction]:
    """The 2 x k grid and the indicator of its right column."""
    g = Structure.grid(2, k)
    return g, RealFunction(tuple(float(p % 2) for p in range(g.n)))


def triod_colorings() -> list[RealFunction]:
    """Every map of the triod's points into {1, 2, 3}."""
    return [RealFunction(tuple(float(c) for c in combo)) for combo in itertools.product((1, 2, 3), repeat=4)]


@dataclass(frozen=True)
class Fixture:
    name: str
    structure: Structure
    function: RealFunction | None = None


def fixtures(star_n: int = 8, grid_k: int = 3) -> dict[str, Fixture]:
    g, chi = grid_right_column(grid_k)
    out = [
        Fixture("triod", triod()),
        Fixture("triod_function", triod(), triod_function()),
        Fixture(f"star_{star_n}", Structure.star(star_n), star_hub_indicator(star_n)),
        Fixture(f"star_{star_n}_geometric", Structure.star(star_n), star_geometric(star_n)),
        Fixture(f"grid_2x{grid_k}_right_column", g, chi),
    ]
    out += [Fixture(f"triod_coloring_{i}", triod(), f) for i, f in enumerate(triod_colorings())]
    return {fx.name: fx for fx in out}


def _canonical_free_tree(n: int, edges) -> str:
    """AHU encoding rooted at the centre(s); equal for isomorphic trees."""
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    degree = [len(a) for a in adj]
    layer = [v for v in range(n) if degree[v] <= 1]
    remaining = n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for u in adj[v]:
                degree[u] -= 1
                if degree[u] == 1:
                    nxt.append(u)
        layer = nxt
    centres = layer if n > 1 else [0]

    def encode(v, parent):
        return "(" + "".join(sorted(encode(u, v) for u in adj[v] if u != parent)) + ")"

    return min(encode(c, -1) for c in centres)


def all_free_trees(n: int) -> list[Structure]:
    """One representative of every isomorphism class of trees on ``n`` points."""
    if n < 1:
        raise InvalidInput("a tree needs at least one point")
    level = {_canonical_free_tree(1, []): []}
    for size in range(2, n + 1):
        nxt = {}
        for edges in level.values():
            for v in range(size - 1):
                grown = edges + [(v, size - 1)]
                nxt.setdefault(_canonical_free_tree(size, grown), grown)
        level = nxt
    return [Structure.tree(n, edges) for _, edges in sorted(level.items())]


def relabel_tree(s: Structure, perm: Sequence[int]) -> Structure:
    return Structure.tree(s.n, [(perm[a], perm[b]) for a, b in s.tree_edges])
