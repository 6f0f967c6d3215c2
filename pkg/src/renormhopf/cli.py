"""Batch command-line front end.

Every subcommand prints a report (text table or JSON) and exits with 0 when
its internal consistency checks pass, 1 when a property fails and 2 on bad
input.  The manual page is generated from the same argument parser.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Sequence

from . import algebra, laurent
from .diffeo import (FormalDiffeo, birkhoff_diffeo, birkhoff_diffeo_hopf, effective_coupling_toy)
from .graphs import GraphError, GraphInstance, UnsupportedGraph, catalog, get, graph_name
from .hopf import BPHZ, birkhoff, birkhoff_defects, toy_character, toy_graph_character
from .laurent import DEFAULT_ORDER, LaurentSeries, TruncationError
from .lie import as_combination, bracket, graph_bracket, infinitesimal_from, tree_bracket
from .resolvents import (DegenerateConfiguration, DepressedCubic, DepressedQuartic, cubic_residual,
                         perturbed_pentagon, quartic_residual, solve_cubic, solve_quartic, star_check)
from .rg import rg_report
from .trees import TREES, TreeSyntaxError, parse_forest

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

RESIDUAL_TOL = 1e-9


class InputError(ValueError):
    """Invalid command-line input (exit code 2)."""


# -- output helpers ---------------------------------------------------------------

def _table(rows: list[dict[str, str]]) -> str:
    if not rows:
        return "(no rows)"
    cols = list(rows[0])
    return "\n".join(" | ".join(f"{c}: {row[c]}" for c in cols) for row in rows)


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


def _instance(args):
    if args.instance == "graphs":
        seeds = None if args.catalog is None else list(catalog(args.catalog).values())
        inst = GraphInstance(seeds)
        return inst, toy_graph_character(inst, order=args.order)
    if args.instance == "trees":
        return TREES, toy_character(order=args.order)
    raise InputError(f"instance {args.instance!r} is not available for this command")


def _check_config(args) -> None:
    degree = getattr(args, "degree", None)
    if degree is not None and not (1 <= degree <= args.order):
        raise InputError(f"need 1 <= degree <= order, got degree {degree} and order {args.order}")


# -- subcommands ----------------------------------------------------------------------

def cmd_coproduct(args) -> int:
    text = args.input.strip()
    graph_names = catalog(args.catalog)
    if args.instance == "graphs" or (args.instance is None and text in graph_names):
        try:
            g = get(text, args.catalog)
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
        inst = GraphInstance([g])
        mono = (g,)
    else:
        inst = TREES
        mono = inst.mono(*parse_forest(text))
    tensor = inst.coproduct(mono)
    rendering = algebra.render_tensor(inst, tensor)
    terms = [{"left": inst.render_mono(a), "right": inst.render_mono(b), "coeff": str(c)}
             for (a, b), c in sorted(tensor.items(), key=lambda it: algebra._tensor_sort(inst, it))]
    _emit(args, {"input": text, "instance": inst.name, "coproduct": rendering, "terms": terms}, rendering)
    return EXIT_OK


def cmd_birkhoff(args) -> int:
    inst, phi = _instance(args)
    pair = birkhoff(phi)
    gens = inst.generators_upto(args.degree)
    rows = [{"generator": inst.render(g), "phi": str(phi.gen(g)),
             "phi_minus": str(pair.negative.gen(g)), "phi_plus": str(pair.positive.gen(g))} for g in gens]
    defects = birkhoff_defects(pair, gens)
    ok = not defects
    text = _table(rows) + "\n" + ("Birkhoff characterisation on all generators: " + ("PASS" if ok else "FAIL"))
    _emit(args, {"rows": rows, "failures": defects, "pass": ok}, text + "".join("\n" + d for d in defects))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bphz(args) -> int:
    inst, phi = _instance(args)
    pair = birkhoff(phi)
    scheme = BPHZ(phi)
    rows, failures = [], []
    for g in inst.generators_upto(args.degree):
        c, r = scheme.counterterm(g), scheme.renormalized(g)
        neg, pos = pair.negative.gen(g), pair.positive.gen(g)
        rows.append({"generator": inst.render(g), "phi": str(phi.gen(g)), "phi_minus": str(neg),
                     "phi_plus": str(pos), "C": str(c), "Rbar": str(scheme.prepared(g)), "R": str(r)})
        if c != neg or r != pos:
            failures.append({"generator": inst.render(g), "C": str(c), "phi_minus": str(neg),
                             "R": str(r), "phi_plus": str(pos)})
    ok = not failures
    verdict = "C = φ₋ and R = φ₊ on all generators: " + ("PASS" if ok else "FAIL")
    _emit(args, {"rows": rows, "failures": failures, "pass": ok}, _table(rows) + "\n" + verdict)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_rg_report(args) -> int:
    inst, phi = _instance(args)
    report = rg_report(phi, args.degree)
    rows = report.rows()
    ok = report.all_match and report.l_independence_witness == 0
    text = (_table(rows) + f"\nmax L-degree of φ₋: {report.l_independence_witness}"
            + "\nRG report: " + ("PASS" if ok else "FAIL"))
    failures = [r for r in rows if r["match"] != "yes"]
    _emit(args, {"rows": rows, "lIndependenceWitness": report.l_independence_witness,
                 "failures": failures, "pass": ok}, text)
    return EXIT_OK if ok else EXIT_FAIL


def _read_coefficient_table(path: str) -> FormalDiffeo:
    """Lines ``index<whitespace>laurent text``; missing indices are zero."""
    entries: dict[int, LaurentSeries] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            head, _, rest = line.partition(" ")
            try:
                idx = int(head)
            except ValueError:
                raise InputError(f"{path}:{lineno}: expected a coefficient index, got {head!r}") from None
            if idx < 1:
                raise InputError(f"{path}:{lineno}: coefficient index must be >= 1")
            try:
                entries[idx] = laurent.parse(rest)
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from None
    if not entries:
        raise InputError(f"{path}: no coefficients")
    n = max(entries)
    zero = LaurentSeries.zero(None)
    return FormalDiffeo(tuple(entries.get(k, zero) for k in range(1, n + 1)))


def cmd_diffeo_birkhoff(args) -> int:
    if args.input:
        loop = _read_coefficient_table(args.input)
    else:
        loop = effective_coupling_toy(toy_character(order=args.order), args.degree)
    direct = birkhoff_diffeo(loop)
    via_hopf = birkhoff_diffeo_hopf(loop)
    rows = []
    failures = []
    for k in range(1, loop.order + 1):
        neg, pos = direct.negative.a(k), direct.positive.a(k)
        rows.append({"index": str(k), "loop": str(loop.a(k)), "negative": str(neg), "positive": str(pos)})
        if not neg.is_pure_pole() or not pos.is_pole_free():
            failures.append({"index": k, "reason": "split is not pole/holomorphic"})
    if not direct.reconstruct().equals(loop):
        failures.append({"reason": "positive o negative^-1 does not reproduce the loop"})
    if not (direct.negative.equals(via_hopf.negative) and direct.positive.equals(via_hopf.positive)):
        failures.append({"reason": "direct and Hopf-algebra routes disagree"})
    ok = not failures
    renorm = direct.renormalized_coupling()
    text = (_table(rows) + f"\nrenormalised coupling at ε = 0: {renorm}"
            + "\ndiffeomorphism Birkhoff: " + ("PASS" if ok else "FAIL"))
    _emit(args, {"rows": rows, "renormalizedCoupling": [str(c) for c in renorm.coeffs],
                 "failures": failures, "pass": ok}, text)
    return EXIT_OK if ok else EXIT_FAIL


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a rational number: {text!r}") from None


def _fmt_complex(z: complex) -> list[float]:
    return [z.real, z.imag]


def cmd_resolvent(args) -> int:
    coeffs = [_rational(x) for x in args.coefficients]
    if args.kind == "cubic":
        if len(coeffs) != 2:
            raise InputError("cubic takes p q (for x^3 + 3px + 2q)")
        eq = DepressedCubic(*coeffs)
        sol = solve_cubic(eq)
        roots = sol.roots
        residuals = [cubic_residual(eq, x) for x in roots]
    else:
        if len(coeffs) != 3:
            raise InputError("quartic takes p q r (for X^4 + pX^2 + qX + r)")
        eq = DepressedQuartic(*coeffs)
        roots = solve_quartic(eq)
        residuals = [quartic_residual(eq, x) for x in roots]
    ok = max(residuals) < RESIDUAL_TOL
    lines = [f"{z.real:.12g} {z.imag:+.12g}i  residual {r:.3e}" for z, r in zip(roots, residuals)]
    lines.append("residuals below 1e-9: " + ("PASS" if ok else "FAIL"))
    _emit(args, {"kind": args.kind, "coefficients": [str(c) for c in coeffs],
                 "roots": [_fmt_complex(z) for z in roots], "residuals": residuals, "pass": ok},
          "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_star_check(args) -> int:
    if args.random is not None:
        if args.values:
            raise InputError("give either ten coordinates or --random, not both")
        rng = random.Random(args.seed)
        worst = None
        for _ in range(args.random):
            res = star_check(perturbed_pentagon(rng))
            if worst is None or res.max_deviation > worst.max_deviation:
                worst = res
        result = worst
        cases = args.random
    else:
        if len(args.values) != 10:
            raise InputError("star-check needs ten numbers (x y for five points)")
        try:
            xs = [float(v) for v in args.values]
        except ValueError:
            raise InputError("coordinates must be numbers") from None
        result = star_check([complex(xs[2 * i], xs[2 * i + 1]) for i in range(5)])
        cases = 1
    ok = result.max_deviation < RESIDUAL_TOL
    payload = dict(result.to_json(), cases=cases, tolerance=RESIDUAL_TOL)
    payload["pass"] = ok
    # the documented output of this command is JSON regardless of --format
    print(json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bracket(args) -> int:
    if args.instance == "graphs":
        inst = GraphInstance(None if args.catalog is None else list(catalog(args.catalog).values()))
        try:
            g1, g2 = get(args.first, args.catalog), get(args.second, args.catalog)
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
        combo = graph_bracket(g1, g2, inst)
        check = as_combination(bracket(infinitesimal_from(inst, {g1: 1}), infinitesimal_from(inst, {g2: 1})),
                               inst.generators(g1.loops + g2.loops))
        ok = combo == check
        render = graph_name
        text = algebra.render_element(inst, {(g,): c for g, c in combo.items()})
    else:
        t1, t2 = (parse_forest(x) for x in (args.first, args.second))
        if len(t1) != 1 or len(t2) != 1:
            raise InputError("bracket takes two single trees")
        combo = tree_bracket(t1[0], t2[0])
        anti = tree_bracket(t2[0], t1[0])
        ok = all(combo.get(t, 0) == -anti.get(t, 0) for t in set(combo) | set(anti))
        render = str
        text = algebra.render_element(TREES, {(t,): c for t, c in combo.items()})
    items = sorted(combo.items(), key=lambda kv: kv[0])
    _emit(args, {"first": args.first, "second": args.second,
                 "bracket": [{"term": render(g), "coeff": str(c)} for g, c in items], "pass": ok},
          f"[{args.first}, {args.second}] = {text}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_manpage(args) -> int:
    print(manpage())
    return EXIT_OK


# -- parser -------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, instances=("trees", "graphs"), default="trees", degree=3) -> None:
    p.add_argument("--order", type=int, default=DEFAULT_ORDER, help="truncation order N in eps (default %(default)s)")
    p.add_argument("--degree", type=int, default=degree, help="degree bound D (default %(default)s)")
    p.add_argument("--instance", choices=instances, default=default, help="Hopf algebra (default %(default)s)")
    p.add_argument("--format", choices=("text", "json"), default="text", help="output format")
    p.add_argument("--seed", type=int, default=0, help="random seed (default %(default)s)")
    p.add_argument("--catalog", default=None, help="directory of graph JSON files replacing the shipped catalog")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="renormhopf",
        description="Hopf-algebraic renormalisation toolkit: coproducts, Birkhoff and BPHZ, "
                    "renormalisation-group data, diffeomorphism loops and resolvents.",
        epilog="Exit status: 0 all checks pass, 1 a property check failed, 2 invalid input.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("coproduct", help="coproduct of a forest (tree syntax) or a catalog graph")
    p.add_argument("input", help='forest such as "B[o o] o", or a catalog graph name such as nested2')
    _common(p)
    p.set_defaults(func=cmd_coproduct, instance=None)

    p = sub.add_parser("birkhoff", help="Birkhoff decomposition of the toy character")
    _common(p)
    p.set_defaults(func=cmd_birkhoff)

    p = sub.add_parser("bphz", help="BPHZ counterterms compared with the Birkhoff decomposition")
    _common(p)
    p.set_defaults(func=cmd_bphz)

    p = sub.add_parser("rg-report", help="residue, beta and the negative part rebuilt from beta")
    _common(p)
    p.set_defaults(func=cmd_rg_report)

    p = sub.add_parser("diffeo-birkhoff", help="opposed Birkhoff decomposition of a diffeomorphism loop")
    p.add_argument("input", nargs="?", help="coefficient table: lines 'index laurent-text' "
                                            "(default: toy effective coupling up to --degree loops)")
    _common(p, instances=("diffeo",), default="diffeo")
    p.set_defaults(func=cmd_diffeo_birkhoff)

    p = sub.add_parser("resolvent", help="solve a depressed cubic or quartic by resolvents")
    p.add_argument("kind", choices=("cubic", "quartic"))
    p.add_argument("coefficients", nargs="+", help="cubic: p q for x^3+3px+2q; quartic: p q r for X^4+pX^2+qX+r")
    _common(p)
    p.set_defaults(func=cmd_resolvent)

    p = sub.add_parser("star-check", help="concyclicity of the five circle meeting points of a pentagram")
    p.add_argument("values", nargs="*", help="ten coordinates x1 y1 ... x5 y5")
    p.add_argument("--random", type=int, default=None, metavar="N", help="check N random perturbed pentagons")
    _common(p)
    p.set_defaults(func=cmd_star_check)

    p = sub.add_parser("bracket", help="Lie bracket of two trees or two catalog graphs")
    p.add_argument("first")
    p.add_argument("second")
    _common(p)
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("manpage", help="print the manual page")
    p.set_defaults(func=cmd_manpage, format="text", order=DEFAULT_ORDER)
    return parser


def manpage() -> str:
    """Manual page text built from the parser itself."""
    parser = build_parser()
    parts = [parser.format_help()]
    for action in parser._subparsers._group_actions:
        for name, sp in action.choices.items():
            parts.append(f"\n=== {name} ===\n{sp.format_help()}")
    return "".join(parts)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        _check_config(args)
        return args.func(args)
    except (InputError, TreeSyntaxError, GraphError, DegenerateConfiguration, UnsupportedGraph,
            TruncationError, OSError) as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(record, sort_keys=True), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
