"""Command-line front end.

Exit status: 0 on success, 1 when a checked property fails, 2 on bad input
(malformed files, unknown points, size caps, non-subalgebras).
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import io
from .convexity import convex_hull, interval, is_monotone, span
from .errors import InvalidInput, MedianBVError
from .helly import select_diagonal, select_finite
from .structures import check_median_axioms, check_pretree_axioms, induced_betweenness
from .suites import run_suite
from .topology import is_fragmented, shadow, shadow_topology, unfragmented_witness
from .variation import (
    adjacency_gaps,
    limit_probe,
    linear_variation,
    restricted_variation,
    total_variation,
    variation_on,
)

OK, VIOLATION, INPUT_ERROR = 0, 1, 2


def fmt(x: float, digits: int = 9) -> str:
    return format(float(x), f".{digits}g")


class _Printer:
    def __init__(self, digits: int):
        self.digits = digits

    def num(self, x: float) -> str:
        return fmt(x, self.digits)

    def points(self, s, pts) -> str:
        return "{" + ", ".join(s.name(p) for p in sorted(pts)) + "}"


def _structure(path):
    return io.structure_from_dict(io.load_document(path))


def _function(s, path):
    f = io.function_from_dict(io.load_document(path))
    if len(f) != s.n:
        raise InvalidInput(f"function has {len(f)} values, structure has {s.n} points")
    return f


def _space(path):
    """A topology document as-is, or the shadow topology of a structure document."""
    doc = io.load_document(path)
    if io.is_topology_document(doc):
        return io.topology_from_dict(doc), None
    s = io.structure_from_dict(doc)
    return shadow_topology(s), s


# -- commands ---------------------------------------------------------------------------


def cmd_check(a, p):
    s = _structure(a.structure)
    r = induced_betweenness(s)
    med = check_median_axioms(s)
    pre = check_pretree_axioms(r)
    print(f"kind: {s.kind}")
    print(f"points: {s.n}")
    print(f"median axioms: {'pass' if med.passed else 'FAIL'}")
    for label, w in med.violations:
        print(f"  {label} {' '.join(s.name(x) for x in w)}")
    print(f"pretree axioms: {'pass' if pre.passed else 'FAIL'}")
    for label, w in pre.violations:
        print(f"  {label} {' '.join(s.name(x) for x in w)}")
    print(f"median pretree: {'yes' if s.is_median_pretree else 'no'}")
    return OK if med.passed else VIOLATION


def cmd_median(a, p):
    s = _structure(a.structure)
    x, y, z = io.parse_points(s, [a.x, a.y, a.z])
    print(s.name(s.median(x, y, z)))
    return OK


def cmd_interval(a, p):
    s = _structure(a.structure)
    x, y = io.parse_points(s, [a.a, a.b])
    print(p.points(s, interval(s, x, y)))
    return OK


def cmd_hull(a, p):
    s = _structure(a.structure)
    print(p.points(s, convex_hull(s, io.parse_points(s, a.points))))
    return OK


def cmd_span(a, p):
    s = _structure(a.structure)
    print(p.points(s, span(s, io.parse_points(s, a.points))))
    return OK


def cmd_gaps(a, p):
    s = _structure(a.structure)
    pts = io.parse_points(s, a.points) if a.points else None
    for x, y in sorted(adjacency_gaps(s, pts)):
        print(f"{s.name(x)} {s.name(y)}")
    return OK


def cmd_var(a, p):
    s = _structure(a.structure)
    f = _function(s, a.function)
    if a.sigma is None:
        report = total_variation(s, f)
    else:
        report = variation_on(s, f, io.parse_points(s, a.sigma), relaxed=a.relaxed)
    print(p.num(report.value))
    if a.verbose:
        print(f"witness: {p.points(s, report.witness)}")
        for (x, y), c in sorted(report.contributions.items()):
            print(f"  {s.name(x)} {s.name(y)} {p.num(c)}")
    return OK


def cmd_linvar(a, p):
    s = _structure(a.structure)
    report = linear_variation(s, _function(s, a.function))
    print(p.num(report.value))
    if a.verbose:
        print(f"witness: {p.points(s, report.witness)}")
    return OK


def cmd_restricted_var(a, p):
    s = _structure(a.structure)
    f = _function(s, a.function)
    sigma = io.parse_points(s, a.sigma) if a.sigma else None
    print(p.num(restricted_variation(s, f, sigma, io.parse_points(s, a.within))))
    return OK


def cmd_monotone(a, p):
    src, dst = _structure(a.src), _structure(a.dst)
    h = io.map_from_dict(io.load_document(a.map), dst)
    ok = is_monotone(h, src, dst)
    print("monotone" if ok else "not monotone")
    return OK if ok else VIOLATION


def cmd_shadow(a, p):
    s = _structure(a.structure)
    u, v = io.parse_points(s, [a.u, a.v])
    print(p.points(s, shadow(s, u, v)))
    return OK


def cmd_topology(a, p):
    s = _structure(a.structure)
    print(shadow_topology(s).dump())
    return OK


def cmd_fragmented(a, p):
    t, _ = _space(a.space)
    vals = io.function_from_dict(io.load_document(a.function)).values
    ok = is_fragmented(t, vals)
    print("fragmented" if ok else "not fragmented")
    return OK if ok else VIOLATION


def cmd_witness(a, p):
    t, s = _space(a.space)
    vals = io.function_from_dict(io.load_document(a.function)).values
    w = unfragmented_witness(t, vals)
    if w is None:
        print("none")
        return OK
    name = s.name if s is not None else str
    print("Y: {" + ", ".join(name(x) for x in sorted(w.Y)) + "}")
    print(f"alpha: {p.num(w.alpha)}")
    print(f"beta: {p.num(w.beta)}")
    return OK


def cmd_helly(a, p):
    s = _structure(a.structure)
    fs, rng = io.functions_from_dict(io.load_document(a.functions))
    if rng is None:
        flat = [v for f in fs for v in f]
        rng = (min(flat), max(flat))
    for i, f in enumerate(fs):
        if len(f) != s.n:
            raise InvalidInput(f"functions[{i}] has {len(f)} values, structure has {s.n} points")
    eps = a.eps
    if a.depth is None:
        res = select_finite(fs, rng, eps[-1])
    else:
        res = select_diagonal(iter(fs), s, rng, eps, a.depth)
    print("indices: " + " ".join(str(i) for i in res.indices))
    print(f"eps: {p.num(res.epsilon)}")
    print("limit: " + " ".join(p.num(v) for v in res.limit_estimate))
    return OK


def cmd_limit_probe(a, p):
    res = limit_probe(a.rule, a.max)
    for n, v in zip(res.sizes, res.values):
        print(f"{n} {p.num(v)}")
    print(f"strictly increasing: {'yes' if res.strictly_increasing else 'no'}")
    print(f"trend: {res.trend}")
    return OK


def cmd_proptest(a, p):
    results = run_suite(a.suite, a.seed, a.trials)
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} [{r.suite}] {r.name} ({r.checks - r.failures}/{r.checks})")
        if r.failures:
            failed += 1
            print(f"    first counterexample: {r.example}")
    print(f"{len(results) - failed}/{len(results)} properties passed")
    return VIOLATION if failed else OK


# -- parser ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="medianbv", description="Median algebras, pretrees, and variation of functions on them."
    )
    parser.add_argument("--digits", type=int, default=9, help="significant digits for reals (default 9)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(handler=fn)
        return sp

    sp = add("check", cmd_check, "check median and pretree axioms")
    sp.add_argument("structure")
    sp = add("median", cmd_median, "median of three points")
    sp.add_argument("structure")
    sp.add_argument("x")
    sp.add_argument("y")
    sp.add_argument("z")
    sp = add("interval", cmd_interval, "interval between two points")
    sp.add_argument("structure")
    sp.add_argument("a")
    sp.add_argument("b")
    for name, fn, text in (("hull", cmd_hull, "convex hull"), ("span", cmd_span, "generated subalgebra")):
        sp = add(name, fn, text)
        sp.add_argument("structure")
        sp.add_argument("points", nargs="+")
    sp = add("gaps", cmd_gaps, "adjacent doublets of a point set (default: all points)")
    sp.add_argument("structure")
    sp.add_argument("points", nargs="*")
    sp = add("var", cmd_var, "total variation, or variation on --sigma")
    sp.add_argument("structure")
    sp.add_argument("function")
    sp.add_argument("--sigma", nargs="+")
    sp.add_argument("--relaxed", action="store_true", help="allow a sigma that is not a subalgebra")
    sp.add_argument("-v", "--verbose", action="store_true")
    sp = add("linvar", cmd_linvar, "linear variation")
    sp.add_argument("structure")
    sp.add_argument("function")
    sp.add_argument("-v", "--verbose", action="store_true")
    sp = add("restricted-var", cmd_restricted_var, "variation of sigma counted inside a set")
    sp.add_argument("structure")
    sp.add_argument("function")
    sp.add_argument("--sigma", nargs="+")
    sp.add_argument("--in", dest="within", nargs="+", required=True)
    sp = add("monotone", cmd_monotone, "whether a point map is monotone")
    sp.add_argument("src")
    sp.add_argument("dst")
    sp.add_argument("map")
    sp = add("shadow", cmd_shadow, "shadow of u with light at v")
    sp.add_argument("structure")
    sp.add_argument("u")
    sp.add_argument("v")
    sp = add("topology", cmd_topology, "open sets of the shadow topology")
    sp.add_argument("structure")
    for name, fn, text in (
        ("fragmented", cmd_fragmented, "fragmentability of a function"),
        ("witness", cmd_witness, "oscillation witness of a non-fragmented function"),
    ):
        sp = add(name, fn, text)
        sp.add_argument("space", help="structure (shadow topology) or topology document")
        sp.add_argument("function")
    sp = add("helly", cmd_helly, "select a close subsequence")
    sp.add_argument("structure")
    sp.add_argument("functions")
    sp.add_argument("--eps", type=float, nargs="+", required=True,
                    help="tolerance, or a decreasing schedule with --depth")
    sp.add_argument("--depth", type=int)
    sp = add("limit-probe", cmd_limit_probe, "variation over growing star truncations")
    sp.add_argument("family", choices=["star"])
    sp.add_argument("rule", choices=["hub", "geometric"])
    sp.add_argument("--max", type=int, required=True)
    sp = add("proptest", cmd_proptest, "run a property suite")
    sp.add_argument("--suite", default="all")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=100)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    printer = _Printer(args.digits)
    try:
        return args.handler(args, printer)
    except MedianBVError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
