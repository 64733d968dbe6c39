"""Acceptance criteria, one test each.

Every test records a single ``PASS``/``FAIL`` line (also printed) before
asserting, so a run shows the status of every criterion. Run directly with
``python tests/test_acceptance.py`` to get just those lines.
"""
from __future__ import annotations

import json
import math
import random
import time

import pytest

from medianbv import caps
from medianbv.cli import main as cli_main
from medianbv.convexity import is_monotone, is_monotone_function
from medianbv.generators import grid_right_column, star_geometric, star_hub_indicator, triod, triod_function
from medianbv.structures import Structure
from medianbv.suites import run_suite
from medianbv.variation import (
    deviation_support,
    enumerate_total_variation,
    limit_probe,
    linear_variation,
    total_variation,
    variation_on,
)

TOL = 1e-9


@pytest.fixture
def report(record_property):
    def emit(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {title}" + (f" ({detail})" if detail else "")
        print(line)
        record_property("acceptance", line)
        assert ok, line

    return emit


def _suite_summary(results):
    failed = [f"{r.name}: {r.example}" for r in results if not r.passed]
    checks = sum(r.checks for r in results)
    return not failed, f"{len(results)} properties, {checks} checks" + (f"; failed {failed[:3]}" if failed else "")


def _cli(capsys, *argv):
    code = cli_main(list(argv))
    return code, capsys.readouterr().out


def test_criterion_01_triod_formulas(report, tmp_path, capsys):
    s = triod()
    rng = random.Random(2024)
    samples = [[rng.uniform(-10, 10) for _ in range(4)] for _ in range(100)]
    start = time.perf_counter()
    worst = 0.0
    for a, b, c, m in samples:
        legs = (abs(a - m), abs(b - m), abs(c - m))
        worst = max(worst, abs(total_variation(s, [a, b, c, m]).value - sum(legs)))
        two_leg = max(legs[0] + legs[1], legs[0] + legs[2], legs[1] + legs[2])
        worst = max(worst, abs(linear_variation(s, [a, b, c, m]).value - two_leg))
    elapsed = time.perf_counter() - start
    # the same formulas through the command line, for a few of the samples
    sp = tmp_path / "triod.json"
    sp.write_text(json.dumps({"kind": "tree", "n": 4, "edges": [[0, 3], [1, 3], [2, 3]]}))
    cli_ok = True
    for i, v in enumerate(samples[:5]):
        fp = tmp_path / f"f{i}.json"
        fp.write_text(json.dumps({"values": v}))
        a, b, c, m = v
        _, out = _cli(capsys, "--digits", "17", "var", str(sp), str(fp))
        cli_ok &= abs(float(out) - (abs(a - m) + abs(b - m) + abs(c - m))) <= TOL
    ok = worst <= TOL and elapsed < 1.0 and cli_ok
    report(1, "triod var = leg sum, linvar = max two-leg sum", ok,
           f"100 functions, max error {worst:.1e}, {elapsed:.3f}s")


def test_criterion_02_monotonicity_counterexample(report, capsys, tmp_path):
    s, f = triod(), triod_function()
    whole = total_variation(s, f).value
    relaxed = variation_on(s, f, [0, 1, 2], relaxed=True).value
    sp, fp = tmp_path / "t.json", tmp_path / "f.json"
    sp.write_text(json.dumps({"kind": "tree", "n": 4, "edges": [[0, 3], [1, 3], [2, 3]],
                              "labels": ["a", "b", "c", "m"]}))
    fp.write_text(json.dumps({"values": list(f.values)}))
    cli = (_cli(capsys, "var", str(sp), str(fp))[1], _cli(capsys, "var", str(sp), str(fp), "--sigma", "a,b,c", "--relaxed")[1])
    ok = whole == 1.0 and relaxed == 2.0 and cli == ("1\n", "2\n")
    report(2, "triod function: variation 1 on X, relaxed 2 on {a,b,c}", ok, f"got {whole} and {relaxed}")


def test_criterion_03_star_fixture(report, capsys):
    bad = []
    for N in range(3, 13):
        star = Structure.star(N)
        hub = star_hub_indicator(N)
        for n in range(1, N):
            if variation_on(star, hub, range(n + 1)).value != n:
                bad.append(("sigma", N, n))
        if linear_variation(star, hub).value != 2.0:
            bad.append(("linear", N))
    probe = limit_probe("hub", 12, min_n=3)
    code, out = _cli(capsys, "limit-probe", "star", "hub", "--max", "12")
    ok = not bad and probe.strictly_increasing and probe.trend == "diverging" and "trend: diverging" in out and code == 0
    report(3, "star hub indicator: variation n on {0..n}, linear variation 2, diverging probe", ok,
           f"N = 3..12, probe values {[int(v) for v in probe.values]}" + (f", mismatches {bad[:3]}" if bad else ""))


def test_criterion_04_no_jordan_decomposition(report):
    rng = random.Random(7)
    accepted = rejected_wide = 0
    violations = []
    for N in range(3, 13):
        star = Structure.star(N)
        taken = 0
        while taken < 60:
            # proposal: hub value plus a random set of deviating leaves
            base = rng.uniform(0, 1)
            vals = [base] * N
            for k in range(1, N):
                if rng.random() < 2.5 / (N - 1):
                    vals[k] = rng.uniform(0, 1)
            support = len(deviation_support(star, vals))
            if is_monotone_function(star, vals):
                taken += 1
                if support > 2:
                    violations.append((N, vals))
            elif support > 2:
                rejected_wide += 1
        accepted += taken
    geo_ok = True
    for N in range(3, 13):
        star = Structure.star(N)
        f = star_geometric(N)
        exact = math.fsum(2.0 ** -k for k in range(1, N))
        value = total_variation(star, f).value
        geo_ok &= value == exact and abs(value - (1 - 2.0 ** -(N - 1))) <= TOL
        geo_ok &= len(deviation_support(star, f)) == N - 1
        if N >= 6:
            # g - h deviates from its hub value only where g or h does: at most 2 + 2 leaves
            geo_ok &= N - 1 > 4
    ok = accepted >= 500 and not violations and geo_ok
    report(4, "monotone g on star_N deviate on <= 2 leaves; 2^-k deviates on N-1", ok,
           f"{accepted} accepted monotone samples, {rejected_wide} wide proposals rejected")


def test_criterion_05_grid_separation(report):
    bad = []
    start = time.perf_counter()
    with caps.override(subalgebras=24):
        for k in range(1, 13):
            g, chi = grid_right_column(k)
            mono = is_monotone([int(v) for v in chi.values], g, Structure.chain(2))
            value = enumerate_total_variation(g, chi).value
            if not mono or value != k:
                bad.append((k, mono, value))
    elapsed = time.perf_counter() - start
    report(5, "2 x k grid right column: monotone with variation k", not bad,
           f"k = 1..12 by subalgebra enumeration, {elapsed:.1f}s" + (f", mismatches {bad}" if bad else ""))


def test_criterion_06_chain_equivalence(report):
    rng = random.Random(6)
    bad = []
    for trial in range(200):
        n = rng.randint(1, 50)
        vals = [rng.uniform(-5, 5) for _ in range(n)]
        ch = Structure.chain(n)
        classical = math.fsum(abs(x - y) for x, y in zip(vals, vals[1:]))
        tv = total_variation(ch, vals).value
        lv = linear_variation(ch, vals).value
        if not (tv == lv == classical):
            bad.append((trial, n, tv, lv, classical))
        if n <= 10 and enumerate_total_variation(ch, vals).value != classical:
            bad.append((trial, "enumeration"))
    report(6, "chains: variation = linear variation = classical variation", not bad,
           "200 random chains, n <= 50" + (f", mismatches {bad[:2]}" if bad else ""))


def test_criterion_07_inequality_suites(report):
    start = time.perf_counter()
    results = run_suite("inequalities", seed=0, trials=500)
    elapsed = time.perf_counter() - start
    ok, detail = _suite_summary(results)
    report(7, "variation inequalities on random trees", ok and elapsed < 60, f"500 trials, {detail}, {elapsed:.1f}s")


def test_criterion_08_axiom_suites(report):
    ok, detail = _suite_summary(run_suite("axioms", seed=0, trials=200))
    report(8, "pretree and median axioms, grid B3 witness, relation round trip", ok, f"200 trials, {detail}")


def test_criterion_09_topology_suites(report):
    ok, detail = _suite_summary(run_suite("topology", seed=0, trials=500))
    report(9, "shadow topology laws, finite union lemma, witness iff not fragmented", ok, f"500 trials, {detail}")


def test_criterion_10_helly_suites(report):
    start = time.perf_counter()
    results = run_suite("helly", seed=0, trials=200)
    elapsed = time.perf_counter() - start
    ok, detail = _suite_summary(results)
    report(10, "selection bound, diagonal convergence, limit variation", ok and elapsed < 30,
           f"200 trials, {detail}, {elapsed:.1f}s")


def test_criterion_11_oracle_equivalences(report):
    ok, detail = _suite_summary(run_suite("oracles", seed=0, trials=200))
    report(11, "fast paths equal their oracles", ok, f"all trees n <= 9 plus 200 trials, {detail}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
