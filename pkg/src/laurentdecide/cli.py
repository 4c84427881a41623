"""Command-line entry point.

    decide --field p=3 "exists X. X*X = 1 + t"

Exit codes: 0 = decided (sat or unsat), 2 = usage/parse error, 3 = unknown.
Output is deterministic for identical inputs and configuration regardless of
the --threads value.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys

from .ff import FqContext
from .frontend import ParseError, _term_to_poly, decide, parse_term_text
from .hensel import PerturbBudget, certify_liftable
from .poly import PolyRing, RationalFunctionField, clear_denominators
from .resolve import AffineSystem, RunConfig, decide_existential
from .series import (
    TruncatedSeries,
    evaluate,
    series_point,
    val_exact,
    val_ge,
    valuation,
    witness_to_json,
)
from .verdict import Verdict

SCHEMA = "laurent-decide/1"
VERIFY_TUPLE_CAP = 1 << 16


def parse_field_spec(text: str) -> FqContext:
    """Field spec string: "p=<p> n=<n> [modulus=<coeffs low-to-high>]"."""
    p = None
    n = 1
    modulus = None
    for part in text.split():
        if "=" not in part:
            raise ValueError(f"malformed field component {part!r}")
        key, value = part.split("=", 1)
        if key == "p":
            p = int(value)
        elif key == "n":
            n = int(value)
        elif key == "modulus":
            modulus = tuple(int(c) for c in value.split(","))
        else:
            raise ValueError(f"unknown field component {key!r}")
    if p is None:
        raise ValueError("field spec needs p=<prime>")
    return FqContext(p, n, modulus)


def parse_budget(text: str) -> PerturbBudget:
    """Perturbation budget "directions x depth", e.g. "8x16"."""
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise ValueError(f"malformed perturb budget {text!r}, expected DxM")
    return PerturbBudget(int(parts[0]), int(parts[1]))


def load_system_file(path: str, ctx: FqContext) -> AffineSystem:
    """System file: header "vars X1 X2 ...", then "eq <poly>" lines and
    optional "neq <poly>" lines (merged into one product inequation)."""
    with open(path, "r", encoding="utf-8") as handle:
        lines = [ln.strip() for ln in handle if ln.strip() and not ln.strip().startswith("#")]
    if not lines or not lines[0].startswith("vars"):
        raise ValueError("system file must start with a 'vars' header")
    names = lines[0].split()[1:]
    rring = PolyRing(RationalFunctionField(ctx), tuple(names))
    ring = PolyRing(ctx, tuple(names) + ("t",))
    var_index = {name: i for i, name in enumerate(names)}
    eqs_rat = []
    ineq_factors = []
    for line in lines[1:]:
        kind, _, rest = line.partition(" ")
        term = parse_term_text(rest)
        poly = _term_to_poly(term, rring, var_index)
        if kind == "eq":
            eqs_rat.append(poly)
        elif kind == "neq":
            ineq_factors.append(poly)
        else:
            raise ValueError(f"unknown system line kind {kind!r}")
    equations = clear_denominators(eqs_rat) if eqs_rat else []
    g = None
    if ineq_factors:
        product = ineq_factors[0]
        for h in ineq_factors[1:]:
            product = product * h
        (g,) = clear_denominators([product])
    return AffineSystem(ring, equations, g)


def _branch_summary(branch: Verdict) -> dict:
    out = {"status": branch.status}
    if branch.refuted_at is not None:
        out["refuted_at"] = branch.refuted_at
    if branch.radical is not None:
        out["evidence"] = "radical-membership"
    if branch.is_unknown and branch.reason:
        out["reason"] = branch.reason
    if branch.branches:
        out["branches"] = [_branch_summary(b) for b in branch.branches]
    return out


def verdict_to_report(verdict: Verdict, include_trace: bool) -> dict:
    report = {"schema": SCHEMA, "status": verdict.status}
    if verdict.is_sat:
        wjson = witness_to_json(verdict.witness)
        report["witness"] = wjson["coords"]
        report["precision"] = (
            wjson["precision"] if wjson["precision"] is not None else verdict.certificate.precision
        )
        report["certificate"] = verdict.certificate.to_json()
        if verdict.inequation_valuation is not None:
            report["inequation_valuation"] = verdict.inequation_valuation
    elif verdict.is_unsat:
        if verdict.refuted_at is not None:
            report["refuted_at"] = verdict.refuted_at
        if verdict.radical is not None:
            report["evidence"] = "radical-membership"
        if verdict.branches:
            report["disjuncts"] = [_branch_summary(b) for b in verdict.branches]
    else:
        report["reason"] = verdict.reason or "unknown"
    if include_trace:
        report["trace"] = list(verdict.trace)
    return report


def _verify_sat(verdict: Verdict) -> list:
    problems = []
    system = verdict.system
    if system is None:
        return ["no system attached to the verdict"]
    witness = list(verdict.witness)
    precision = witness[0].precision if witness else verdict.certificate.precision
    for f in system.equations:
        res = evaluate(f, series_point(system.ring, witness, precision)) if witness else None
        if witness and not val_ge(valuation(res), precision):
            problems.append(f"residual of {f!r} below witness precision")
    if system.inequation is not None and witness:
        gval = valuation(
            evaluate(system.inequation, series_point(system.ring, witness, precision))
        )
        if not val_exact(gval):
            problems.append("inequation value not exactly valued at the witness")
    fresh = certify_liftable(system.equations, witness, precision=precision)
    if fresh is None:
        problems.append("independent re-certification failed")
    return problems


def _verify_unsat(verdict: Verdict) -> list:
    problems = []
    if verdict.radical is not None and not verdict.radical.verify():
        problems.append("radical certificate does not recompose to 1")
    system = verdict.system
    if verdict.refuted_at is not None and system is not None:
        n = verdict.refuted_at
        ctx = system.ring.field
        m = len(system.xnames)
        total = ctx.q ** (n * m)
        if total <= VERIFY_TUPLE_CAP:
            elems = list(ctx.elements())
            for digits in itertools.product(elems, repeat=n * m):
                point = [
                    TruncatedSeries(ctx, list(digits[j * n : (j + 1) * n]), n)
                    for j in range(m)
                ]
                pt = series_point(system.ring, point, n)
                if all(not evaluate(f, pt) for f in system.equations):
                    problems.append(f"refutation level {n} admits a mod-t^{n} solution")
                    break
    if verdict.branches:
        for b in verdict.branches:
            problems.extend(_verify_unsat(b) if b.is_unsat else [])
    return problems


def verify_verdict(verdict: Verdict) -> list:
    if verdict.is_sat:
        return _verify_sat(verdict)
    if verdict.is_unsat:
        return _verify_unsat(verdict)
    return []


def format_text(report: dict) -> str:
    lines = [f"status: {report['status']}"]
    for key in ("precision", "refuted_at", "reason", "inequation_valuation", "evidence"):
        if key in report:
            lines.append(f"{key}: {report[key]}")
    if "witness" in report:
        lines.append(f"witness: {report['witness']}")
    if "certificate" in report:
        lines.append(f"certificate: {report['certificate']}")
    if "verified" in report:
        lines.append(f"verified: {report['verified']}")
    for line in report.get("trace", []):
        lines.append(f"  | {line}")
    return "\n".join(lines)


def build_arg_parser():
    ap = argparse.ArgumentParser(
        prog="decide",
        description="Decide existential sentences over the Laurent series field F_q((t)).",
    )
    ap.add_argument("sentence", nargs="?", help="sentence text (or use --sentence/--system-file)")
    ap.add_argument("--field", default="p=2", help='field spec, e.g. "p=3" or "p=2 n=2 modulus=1,1,1"')
    ap.add_argument("--sentence", dest="sentence_opt", help="sentence text")
    ap.add_argument("--system-file", help="path to a system file (vars/eq/neq lines)")
    ap.add_argument("--max-precision", type=int, default=64)
    ap.add_argument("--perturb-budget", default="8x16", help="directions x depth, e.g. 8x16")
    ap.add_argument("--candidate-cap", type=int, default=256)
    ap.add_argument("--format", choices=("json", "text"), default="json")
    ap.add_argument("--threads", type=int, default=1, help="worker count (reserved; execution is deterministic)")
    ap.add_argument("--verify", action="store_true", help="independently re-check the verdict")
    ap.add_argument("--trace", action="store_true", help="include the decision trace")
    return ap


def run(argv=None) -> int:
    ap = build_arg_parser()
    args = ap.parse_args(argv)
    try:
        ctx = parse_field_spec(args.field)
        budget = parse_budget(args.perturb_budget)
        if args.max_precision < 1 or args.candidate_cap < 1 or args.threads < 1:
            raise ValueError("budgets must be >= 1")
        config = RunConfig(
            max_precision=args.max_precision,
            perturb_budget=budget,
            candidate_cap=args.candidate_cap,
        )
        text = args.sentence_opt or args.sentence
        if args.system_file and text:
            raise ValueError("give either a sentence or --system-file, not both")
        if args.system_file:
            system = load_system_file(args.system_file, ctx)
            verdict = decide_existential(system, config)
            verdict.system = system
        elif text:
            verdict = decide(text, ctx, config)
        else:
            raise ValueError("nothing to decide: give a sentence or --system-file")
    except (ParseError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2

    report = verdict_to_report(verdict, args.trace)
    if args.verify:
        problems = verify_verdict(verdict)
        report["verified"] = not problems
        if problems:
            report["verify_problems"] = problems
    out = (
        json.dumps(report, sort_keys=True)
        if args.format == "json"
        else format_text(report)
    )
    print(out)
    if args.verify and not report.get("verified", True):
        return 2
    return 0 if verdict.status in ("sat", "unsat") else 3


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
