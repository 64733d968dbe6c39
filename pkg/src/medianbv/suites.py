"""Seeded property suites over generated instances.

Each suite runs ``trials`` seeded trials and reports one :class:`PropertyResult`
per property. Trial ``t`` of a suite run with ``seed`` draws all its
randomness from ``trial_seed(seed, t)``, so results do not depend on the
order in which trials run.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Callable

from ._bits import iter_bits, to_mask
from .convexity import (
    convex_hull,
    directions,
    hull_mask,
    interval,
    is_convex,
    is_convexity_preserving,
    is_median_preserving,
    is_monotone,
    is_monotone_function,
    is_subalgebra,
    span,
    _hull_pass,
)
from .generators import (
    all_free_trees,
    grid_right_column,
    random_almost_disjoint_convex,
    random_closed_cover,
    random_function,
    random_integer_function,
    random_monotone_function,
    random_monotone_map,
    random_product,
    random_subalgebra,
    random_subset,
    random_topology,
    random_tree,
    relabel_tree,
    star_geometric,
    star_hub_indicator,
    trial_seed,
    triod,
    triod_function,
)
from .helly import max_pairwise_gap, pigeonhole_bound, select_diagonal, select_finite, verify_limit_variation
from .structures import (
    Structure,
    check_median_axioms,
    check_pretree_axioms,
    induced_betweenness,
    is_median_pretree,
    median_from_relation,
    tree_median_oracle,
)
from .topology import (
    branch,
    check_finite_union_lemma,
    closure,
    is_closed,
    is_fragmented,
    is_hausdorff,
    restriction_fragmented,
    shadow_topology,
    unfragmented_witness,
)
from .variation import (
    RealFunction,
    adjacency_gaps,
    adjacency_gaps_scan,
    deviation_support,
    enumerate_total_variation,
    in_bv_r,
    limit_probe,
    linear_variation,
    linear_variation_bruteforce,
    linear_variation_dp,
    linear_variation_paths,
    restricted_variation,
    total_variation,
    variation_on,
)

TOL = 1e-9


@dataclass
class PropertyResult:
    suite: str
    name: str
    checks: int = 0
    failures: int = 0
    example: str | None = None

    @property
    def passed(self) -> bool:
        return self.checks > 0 and self.failures == 0


class _Recorder:
    def __init__(self, suite: str):
        self.suite = suite
        self.results: dict[str, PropertyResult] = {}

    def check(self, name: str, ok: bool, detail: Callable[[], str] | str = "") -> bool:
        res = self.results.setdefault(name, PropertyResult(self.suite, name))
        res.checks += 1
        if not ok:
            res.failures += 1
            if res.example is None:
                res.example = detail() if callable(detail) else detail
        return ok

    def out(self) -> list[PropertyResult]:
        return list(self.results.values())


def _rng(seed: int, trial: int) -> random.Random:
    return random.Random(trial_seed(seed, trial))


def _random_treelike(rng: random.Random, max_n: int, min_n: int = 1) -> Structure:
    n = rng.randint(min_n, max_n)
    kind = rng.choice(("tree", "tree", "chain", "star"))
    if kind == "chain":
        return Structure.chain(n)
    if kind == "star":
        return Structure.star(n)
    return random_tree(n, rng.random())


def _random_values(s: Structure, rng: random.Random, value_range=(-1.0, 1.0)) -> RealFunction:
    # integer-valued functions exercise ties and zero gaps
    if rng.random() < 0.3:
        return RealFunction(random_integer_function(s.n, rng.randint(1, 4), rng.random()))
    return random_function(s, value_range, rng.random())


def _var(s: Structure, f, sigma) -> float:
    return variation_on(s, f, sigma).value if sigma else 0.0


# -- axioms -------------------------------------------------------------------------


def suite_axioms(seed: int, trials: int) -> list[PropertyResult]:
    rec = _Recorder("axioms")
    g = Structure.grid(2, 2)
    rg = check_pretree_axioms(induced_betweenness(g))
    rec.check("2x2 grid fails B3 with witness (0,0),(0,1),(1,1),(1,0)",
              not rg.passed and rg.first("B3") == (0, 1, 3, 2), lambda: str(rg.violations[:3]))
    rec.check("2x2 grid satisfies M1-M3", check_median_axioms(g).passed)
    for t in range(trials):
        rng = _rng(seed, t)
        s = _random_treelike(rng, 9)
        r = induced_betweenness(s)
        tag = f"trial {t}: {s.kind} n={s.n} edges={list(s.tree_edges)}"
        mr = check_median_axioms(s)
        rec.check("tree-like backends satisfy M1-M3", mr.passed, lambda: f"{tag} {mr.violations[:3]}")
        pr = check_pretree_axioms(r)
        rec.check("tree-like backends satisfy B1-B3 and A0-A3", pr.passed, lambda: f"{tag} {pr.violations[:3]}")
        rec.check("tree-like backends are median pretrees", is_median_pretree(r) and s.is_median_pretree, tag)
        back = median_from_relation(r)
        rec.check("median of the induced betweenness reproduces the median",
                  (back.median_array == s.median_array).all(), tag)
        rec.check("betweenness of that median reproduces the relation",
                  induced_betweenness(back).masks == r.masks, tag)
        p = random_product(rng.random())
        rec.check("products of trees satisfy M1-M3", check_median_axioms(p).passed, f"trial {t}: product n={p.n}")
        pp = check_pretree_axioms(induced_betweenness(p))
        rec.check("products of trees satisfy A0-A2",
                  not pp.labels() & {"A0", "A1", "A2"}, lambda: f"trial {t}: {pp.violations[:3]}")
    return rec.out()


# -- convexity ------------------------------------------------------------------------


def suite_convexity(seed: int, trials: int) -> list[PropertyResult]:
    rec = _Recorder("convexity")
    for t in range(trials):
        rng = _rng(seed, t)
        s = _random_treelike(rng, 10)
        n = s.n
        im = s.interval_masks
        tag = f"trial {t}: {s.kind} n={n} edges={list(s.tree_edges)}"
        a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
        ab = im[a][b]
        if (ab >> c) & 1:
            rec.check("[a,c] & [c,b] = {c} for c in [a,b]", im[a][c] & im[c][b] == 1 << c, tag)
            rec.check("[a,c] | [c,b] = [a,b] for c in [a,b]", im[a][c] | im[c][b] == ab, tag)
        rec.check("[a,b] inside [a,c] | [c,b]", ab & ~(im[a][c] | im[c][b]) == 0, tag)
        rec.check("intervals are convex", is_convex(s, interval(s, a, b)), tag)
        A = random_subset(n, rng, rng.randint(1, min(n, 4)))
        B = sorted(set(A) | set(random_subset(n, rng, rng.randint(1, 2))))
        hA, sA = convex_hull(s, A), span(s, A)
        rec.check("span inside hull", sA <= hA, tag)
        rec.check("hull idempotent", convex_hull(s, hA) == hA, tag)
        rec.check("span idempotent", span(s, sA) == sA, tag)
        rec.check("hull monotone", hA <= convex_hull(s, B), tag)
        rec.check("span monotone", sA <= span(s, B), tag)
        mask = to_mask(A)
        rec.check("one-pass hull equals fixpoint hull on median pretrees",
                  _hull_pass(s, mask) == hull_mask(s, mask), tag)
        d1, d2 = directions(s, interval(s, a, b))
        pos = {p: i for i, p in enumerate(d1)}
        ok = d2 == tuple(reversed(d1)) and all(
            ((pos[x] < pos[y] < pos[z]) or (pos[z] < pos[y] < pos[x])) == bool((im[x][z] >> y) & 1)
            for x, y, z in itertools.permutations(d1, 3)
        )
        rec.check("directions of an interval reproduce betweenness", ok, tag)
        # monotone = median preserving = convexity preserving
        src = _random_treelike(rng, 6) if rng.random() < 0.7 else random_product(rng.random())
        dst = _random_treelike(rng, 6) if rng.random() < 0.7 else random_product(rng.random())
        if rng.random() < 0.5 and src.kind in ("tree", "chain", "star") and dst.kind in ("tree", "chain", "star"):
            h = random_monotone_map(src, dst, rng.random(), max_tries=50, proposal="structured")
        else:
            h = None
        if h is None:
            h = [rng.randrange(dst.n) for _ in range(src.n)]
        mono = is_monotone(h, src, dst)
        rec.check("monotone iff median preserving iff convexity preserving",
                  mono == is_median_preserving(h, src, dst) == is_convexity_preserving(h, src, dst),
                  lambda: f"trial {t}: map {h}")
    return rec.out()


# -- variation inequalities -----------------------------------------------------------


def suite_inequalities(seed: int, trials: int) -> list[PropertyResult]:
    rec = _Recorder("inequalities")
    s0, f0 = triod(), triod_function()
    rec.check("relaxed variation on {a,b,c} exceeds the subalgebra variation",
              variation_on(s0, f0, [0, 1, 2], relaxed=True).value == 2.0 and total_variation(s0, f0).value == 1.0)
    for t in range(trials):
        rng = _rng(seed, t)
        s = random_tree(rng.randint(2, 9), rng.random())
        n = s.n
        f = _random_values(s, rng)
        tag = f"trial {t}: n={n} edges={list(s.tree_edges)} f={f.values}"
        sigma = random_subalgebra(s, rng)
        v_sigma = variation_on(s, f, sigma).value

        s1 = set(random_subset(n, rng))
        rest = [p for p in range(n) if p not in s1]
        s2 = set(rng.sample(rest, rng.randint(0, len(rest))))
        if rng.random() < 0.5:
            s2.add(rng.choice(sorted(s1)))
        lhs = restricted_variation(s, f, sigma, s1) + restricted_variation(s, f, sigma, s2)
        rec.check("restricted variations of almost disjoint sets add up to at most the whole",
                  v_sigma - lhs >= -TOL, tag)

        S = random_subalgebra(s, rng)
        rec.check("restriction to a subalgebra is at most the variation of the intersection",
                  _var(s, f, sigma & S) - restricted_variation(s, f, sigma, S) >= -TOL, tag)

        C = convex_hull(s, random_subset(n, rng, rng.randint(1, 3)))
        rec.check("restriction to a convex set equals the variation of the intersection",
                  abs(_var(s, f, sigma & C) - restricted_variation(s, f, sigma, C)) <= TOL, tag)

        C1, C2 = random_almost_disjoint_convex(s, rng)
        rec.check("intersections with almost disjoint convex sets add up to at most the whole",
                  v_sigma - _var(s, f, sigma & C1) - _var(s, f, sigma & C2) >= -TOL, tag)
        whole = total_variation(s, f).value
        sub1, _ = s.substructure(C1)
        sub2, _ = s.substructure(C2)
        parts = total_variation(sub1, f.restrict(sorted(C1))).value + total_variation(sub2, f.restrict(sorted(C2))).value
        rec.check("restrictions to almost disjoint convex sets add up to at most the whole",
                  whole - parts >= -TOL, tag)

        bigger = span(s, sigma | set(random_subset(n, rng, rng.randint(0, 2))))
        rec.check("variation grows with the subalgebra", variation_on(s, f, bigger).value - v_sigma >= -TOL, tag)

        rec.check("linear variation at most total variation", whole - linear_variation(s, f).value >= -TOL, tag)

        # monotone maps between trees
        dst = random_tree(rng.randint(1, 9), rng.random())
        h = random_monotone_map(s, dst, rng.random(), max_tries=200, proposal="structured")
        if h is not None:
            g = _random_values(dst, rng)
            htag = f"{tag} dst={list(dst.tree_edges)} h={h} g={g.values}"
            image = {h[p] for p in sigma}
            sigma2 = span(dst, image | set(random_subset(dst.n, rng, rng.randint(0, 2))))
            rec.check("composition with a monotone map does not raise subalgebra variation",
                      variation_on(dst, g, sigma2).value - variation_on(s, g.compose(h), sigma).value >= -TOL, htag)
            rec.check("composition with a monotone map does not raise total variation",
                      total_variation(dst, g).value - total_variation(s, g.compose(h)).value >= -TOL, htag)
        c = rng.uniform(-2, 1)
        d = c + rng.uniform(0, 3)
        m = random_monotone_function(s, (c, d), rng.random(), levels=rng.randint(1, 5))
        if m is not None:
            rec.check("monotone functions into [c,d] have variation at most d-c",
                      is_monotone_function(s, m.values) and in_bv_r(s, m, d - c, TOL),
                      lambda: f"{tag} h={m.values} range=({c},{d})")
    return rec.out()


# -- topology -----------------------------------------------------------------------------


def suite_topology(seed: int, trials: int) -> list[PropertyResult]:
    rec = _Recorder("topology")
    for t in range(trials):
        rng = _rng(seed, t)
        s = _random_treelike(rng, 9, min_n=2)
        n = s.n
        tag = f"trial {t}: {s.kind} n={n} edges={list(s.tree_edges)}"
        top = shadow_topology(s)
        rec.check("branches are convex",
                  all(is_convex(s, branch(s, u, v)) for u in range(n) for v in range(n) if u != v), tag)
        rec.check("intervals are closed",
                  all(is_closed(top, interval(s, a, b)) for a in range(n) for b in range(a, n)), tag)
        closed = [c for c in top.closed_masks if c]
        for cm in rng.sample(closed, min(4, len(closed))):
            rec.check("hulls of closed sets are closed", is_closed(top, convex_hull(s, iter_bits(cm))), tag)
        rec.check("shadow topology is Hausdorff", is_hausdorff(top), tag)
        C = convex_hull(s, random_subset(n, rng, rng.randint(1, 3)))
        sub, pts = s.substructure(C)
        trace, _ = top.subspace(pts)
        rec.check("shadow topology of a convex subset is the trace topology",
                  set(shadow_topology(sub).open_masks) == set(trace.open_masks), tag)
        f = _random_values(s, rng)
        rec.check("finite-variation functions are fragmented", is_fragmented(top, f), tag)

        # arbitrary finite topologies
        m = rng.randint(1, 8)
        T = random_topology(m, rng.random())
        vals = random_integer_function(m, rng.randint(1, 3), rng.random())
        cover = random_closed_cover(T, rng.random())
        ttag = f"trial {t}: opens={T.opens} f={vals} cover={[sorted(c) for c in cover]}"
        whole = check_finite_union_lemma(T, vals, cover)
        pieces = all(restriction_fragmented(T, vals, c) for c in cover)
        rec.check("fragmented on every closed piece implies fragmented", whole or not pieces, ttag)
        w = unfragmented_witness(T, vals)
        rec.check("oscillation witness exists iff not fragmented", (w is None) == whole, ttag)
        if w is not None:
            low = [x for x in w.Y if vals[x] < w.alpha]
            high = [x for x in w.Y if vals[x] > w.beta]
            ok = (
                w.alpha < w.beta
                and is_closed(T, w.Y)
                and w.Y <= closure(T, low)
                and w.Y <= closure(T, high)
            )
            rec.check("oscillation witnesses are valid", ok, ttag)
    return rec.out()


# -- selection ------------------------------------------------------------------------------


def _convergent_source(g, direction, rate: float):
    def fetch(i):
        return tuple(min(1.0, max(0.0, v + sgn * rate / (i + 1) ** 2)) for v, sgn in zip(g, direction))

    return fetch


def suite_helly(seed: int, trials: int) -> list[PropertyResult]:
    rec = _Recorder("helly")
    schedule = (0.4, 0.2, 0.1, 0.05)
    for t in range(trials):
        rng = _rng(seed, t)
        count, points = rng.randint(1, 60), rng.randint(1, 3)
        c = rng.uniform(-2, 0)
        d = c + rng.uniform(0.1, 2)
        eps = rng.uniform(0.05, 1.0) * (d - c)
        fs = [tuple(rng.choice((c, d, rng.uniform(c, d))) for _ in range(points)) for _ in range(count)]
        res = select_finite(fs, (c, d), eps)
        tag = f"trial {t}: N={count} points={points} range=({c},{d}) eps={eps}"
        rec.check("finite selection meets the pigeonhole bound",
                  len(res.indices) >= pigeonhole_bound(count, points, c, d, eps), tag)
        rec.check("finite selection is pairwise eps-close", max_pairwise_gap(fs, res.indices) <= eps + 1e-12, tag)

        s = random_tree(rng.randint(1, 6), rng.random())
        g = random_function(s, (0.0, 1.0), rng.random()).values
        direction = [rng.choice((-1, 1)) for _ in range(s.n)]
        depth = rng.randint(1, len(schedule))
        source = _convergent_source(g, direction, rng.uniform(0.1, 0.5))
        sel = select_diagonal(source, s, (0.0, 1.0), schedule, depth, horizon=1024)
        e = schedule[depth - 1]
        est = sel.limit_estimate
        dtag = f"trial {t}: g={g} depth={depth}"
        rec.check("diagonal selection estimates the limit within eps",
                  all(abs(a - b) <= e + 1e-12 for a, b in zip(est, g)), lambda: f"{dtag} estimate={est}")
        rec.check("diagonal stages are nested",
                  all(set(b) <= set(a) for a, b in zip(sel.stages, sel.stages[1:])), dtag)
        rows = [source(i) for i in range(max(sel.indices) + 1)]
        rec.check("diagonal selection is pairwise eps-close", max_pairwise_gap(rows, sel.indices) <= e + 1e-12, dtag)

        # sequences inside BV_r: perturb, reject if the variation grows past r
        r = total_variation(s, g).value
        noise = [rng.uniform(-0.5, 0.5) for _ in range(s.n)]
        kappa = rng.random()

        def bv_source(i, g=g, noise=noise, kappa=kappa, s=s, r=r):
            cand = tuple(min(1.0, max(0.0, v + w / (i + 1) ** 2)) for v, w in zip(g, noise))
            if total_variation(s, cand).value <= r:
                return cand
            lam = 1.0 / (i + 2)
            return tuple((1 - lam) * v + lam * kappa for v in g)

        sel = select_diagonal(bv_source, s, (0.0, 1.0), schedule, depth, horizon=256)
        rows = [bv_source(i) for i in range(max(sel.indices) + 1)]
        rec.check("generated sequences stay in BV_r",
                  all(total_variation(s, row).value <= r + TOL for row in rows), dtag)
        rec.check("the limit of a BV_r sequence is in BV_r", verify_limit_variation(s, g, r, TOL), dtag)
        rec.check("the selected limit estimate is in BV_r up to n*eps",
                  verify_limit_variation(s, sel.limit_estimate, r, s.n * e), dtag)
    return rec.out()


# -- oracles -----------------------------------------------------------------------------------


def suite_oracles(seed: int, trials: int) -> list[PropertyResult]:
    rec = _Recorder("oracles")
    if trials > 0:
        rng = _rng(seed, -1)
        for n in range(1, 10):
            for tree in all_free_trees(n):
                for perm in (list(range(n)), rng.sample(range(n), n)):
                    s = relabel_tree(tree, perm)
                    ok = all(
                        s.median(x, y, z) == tree_median_oracle(n, s.tree_edges, x, y, z)
                        for x in range(n) for y in range(n) for z in range(n)
                    )
                    rec.check("tree median equals the path-intersection oracle on every tree up to 9 points",
                              ok, f"edges={list(s.tree_edges)}")
    for t in range(trials):
        rng = _rng(seed, t)
        s = _random_treelike(rng, 10)
        f = _random_values(s, rng)
        tag = f"trial {t}: {s.kind} n={s.n} edges={list(s.tree_edges)} f={f.values}"
        rec.check("edge gaps equal interval-scan gaps",
                  adjacency_gaps(s) == frozenset(adjacency_gaps_scan(s, s.full_mask)), tag)
        Y = random_subset(s.n, rng)
        naive = frozenset(
            (a, b) for a, b in itertools.combinations(Y, 2) if interval(s, a, b) & set(Y) == {a, b}
        )
        rec.check("subset gaps equal the set-based definition", adjacency_gaps(s, Y) == naive, tag)
        ground = total_variation(s, f, method="ground").value
        enum = enumerate_total_variation(s, f).value
        rec.check("ground-set variation equals the subalgebra maximum", abs(ground - enum) <= TOL,
                  lambda: f"{tag} ground={ground} enum={enum}")
        dp = linear_variation_dp(s, f).value
        brute = linear_variation_bruteforce(s, f).value
        rec.check("linear variation by DP equals brute-force enumeration", abs(dp - brute) <= TOL,
                  lambda: f"{tag} dp={dp} brute={brute}")
        big = _random_treelike(rng, 64, min_n=11)
        fb = _random_values(big, rng)
        dp = linear_variation_dp(big, fb).value
        paths = linear_variation_paths(big, fb)
        rec.check("linear variation by DP equals leaf-pair enumeration", abs(dp - paths) <= TOL,
                  lambda: f"trial {t}: {big.kind} n={big.n} dp={dp} paths={paths}")
        p = random_product(rng.random())
        if p.is_median_pretree:
            fp = _random_values(p, rng)
            rec.check("ground-set variation equals the subalgebra maximum",
                      abs(variation_on(p, fp).value - enumerate_total_variation(p, fp).value) <= TOL, f"trial {t}")
    return rec.out()


# -- named fixtures ----------------------------------------------------------------------------


def suite_fixtures(seed: int, trials: int) -> list[PropertyResult]:
    rec = _Recorder("fixtures")
    s, f = triod(), triod_function()
    rec.check("triod function: variation 1, relaxed variation on the leaves 2",
              total_variation(s, f).value == 1.0 and variation_on(s, f, [0, 1, 2], relaxed=True).value == 2.0)
    rec.check("leaves of the triod are not a subalgebra", not is_subalgebra(s, [0, 1, 2]))
    for t in range(trials):
        rng = _rng(seed, t)
        v = [rng.uniform(-5, 5) for _ in range(4)]
        a, b, c, m = v
        legs = (abs(a - m), abs(b - m), abs(c - m))
        tv = total_variation(s, v).value
        lv = linear_variation(s, v).value
        rec.check("triod variation is the sum of the three legs", abs(tv - sum(legs)) <= TOL, str(v))
        rec.check("triod linear variation is the largest two-leg sum",
                  abs(lv - max(legs[0] + legs[1], legs[0] + legs[2], legs[1] + legs[2])) <= TOL, str(v))
        n = rng.randint(2, 50)
        vals = [rng.uniform(-1, 1) for _ in range(n)]
        ch = Structure.chain(n)
        classical = math.fsum(abs(x - y) for x, y in zip(vals, vals[1:]))
        rec.check("chain variation, linear variation, and classical variation agree",
                  abs(total_variation(ch, vals).value - classical) <= TOL
                  and abs(linear_variation(ch, vals).value - classical) <= TOL, f"n={n}")
        N = rng.randint(3, 12)
        star = Structure.star(N)
        g = random_monotone_function(star, (0.0, 1.0), rng.random(), levels=rng.randint(2, 4))
        if g is not None:
            rec.check("monotone functions on a star deviate from the hub on at most two leaves",
                      len(deviation_support(star, g)) <= 2, lambda: f"N={N} g={g.values}")
    for N in range(3, 13):
        star = Structure.star(N + 1)
        hub = star_hub_indicator(N + 1)
        rec.check("hub indicator on the star truncation {0..n} has variation n",
                  variation_on(star, hub, range(N + 1)).value == N, f"n={N}")
        rec.check("hub indicator has linear variation 2", linear_variation(star, hub).value == 2.0, f"N={N + 1}")
        geo = star_geometric(N)
        rec.check("geometric star function: variation 1 - 2^-(N-1), support N-1",
                  abs(total_variation(Structure.star(N), geo).value - (1 - 2.0 ** -(N - 1))) <= TOL
                  and len(deviation_support(Structure.star(N), geo)) == N - 1, f"N={N}")
    rec.check("hub indicator variation diverges over truncations", limit_probe("hub", 12).trend == "diverging")
    for k in range(1, 7):
        g, chi = grid_right_column(k)
        rec.check("grid right-column indicator is monotone with variation k",
                  is_monotone_function(g, chi.values) and total_variation(g, chi).value == k, f"k={k}")
    return rec.out()


SUITES: dict[str, Callable[[int, int], list[PropertyResult]]] = {
    "axioms": suite_axioms,
    "convexity": suite_convexity,
    "inequalities": suite_inequalities,
    "topology": suite_topology,
    "helly": suite_helly,
    "oracles": suite_oracles,
    "fixtures": suite_fixtures,
}


def run_suite(name: str, seed: int = 0, trials: int = 100) -> list[PropertyResult]:
    """Run one suite by name, or every suite for ``"all"``."""
    if name == "all":
        return [r for fn in SUITES.values() for r in fn(seed, trials)]
    if name not in SUITES:
        from .errors import InvalidInput

        raise InvalidInput(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name](seed, trials)
