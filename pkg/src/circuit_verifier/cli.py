"""``circuit-verifier`` command line.

Exit status: 0 when the requested check passes (or a plain computation
finishes), 1 when a verification fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from . import bounds, identities, verify
from .dynamics import DEFAULT_BOUND, DEFAULT_MAX_STEPS, CircuitParams, Sign, circuit_max_element, search_cycles
from .report import render
from .residues import (
    OutOfRegime,
    UnsupportedGrading,
    circuit_inputs,
    closed_form_residues,
    engine_a,
    engine_b,
    engine_c,
)

log = logging.getLogger("circuit_verifier")

FORMATS = ("human", "json", "csv")


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _sign(text: str) -> Sign:
    try:
        return Sign.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="human", help="output format (default: human)")
    common.add_argument("--output", type=Path, help="write the result here instead of stdout")
    common.add_argument("--parallelism", type=_positive, default=1, help="worker processes for sweeps")
    common.add_argument(
        "--precision",
        type=_positive,
        default=None,
        help=f"decimal digits for interval bounds (default: ${bounds.PRECISION_ENV} or {bounds.DEFAULT_DIGITS})",
    )
    common.add_argument("-q", "--quiet", action="store_true", help="suppress progress messages")

    parser = argparse.ArgumentParser(
        prog="circuit-verifier",
        description="Exact verification of 1-cycles (circuits) in the accelerated 3x+1 and 3x-1 maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("verify", parents=[common], help="sweep the circuit residue checks for 3x+1 or 3x-1")
    p.add_argument("system", choices=("plus", "minus"))
    p.add_argument("--tau-max", type=_positive, default=40)
    p.add_argument("--e-max", type=_positive, default=None, help="default 80 for plus, 40 for minus")
    p.add_argument("--search-bound", "--bound", dest="bound", type=_positive, default=DEFAULT_BOUND)
    p.add_argument("--max-steps", type=_positive, default=DEFAULT_MAX_STEPS)

    p = sub.add_parser("search", parents=[common], help="brute-force cycle search over odd starts")
    p.add_argument("--sign", type=_sign, default=Sign.PLUS, help="plus or minus")
    p.add_argument("--bound", type=_positive, default=DEFAULT_BOUND)
    p.add_argument("--max-steps", type=_positive, default=DEFAULT_MAX_STEPS)

    p = sub.add_parser("ratio-scan", parents=[common], help="integrality scan of (2^a-1)/(2^(a+b)-3^b)")
    p.add_argument("--a-max", type=_positive, default=60)
    p.add_argument("--b-max", type=_positive, default=60)

    p = sub.add_parser("bounds", parents=[common], help="threshold, hypothesis window and bound chain")
    p.add_argument("--tau-max", type=_positive, default=2000, help="range of the bound-chain scan")
    p.add_argument("--tau", type=_positive, help="also evaluate the bounds at this tau")
    p.add_argument("--s", type=_positive, help="exponent sum for --tau (default: least s with 2^s > 3^tau)")
    p.add_argument("--e", type=_positive, help="also evaluate the 3x-1 bound at (e, --tau)")

    p = sub.add_parser("identities", parents=[common], help="run the combinatorial identity suites")
    p.add_argument("--suite", default="all", choices=("all", *identities.SUITES))

    p = sub.add_parser("residues", parents=[common], help="compare residue engines on one circuit")
    p.add_argument("--tau", type=_positive, required=True)
    p.add_argument("--e", type=_positive, required=True)
    p.add_argument("--sign", type=_sign, default=Sign.PLUS)
    p.add_argument("--engine", choices=("a", "b", "c", "closed", "all"), default="all")
    return parser


def _emit(text: str, output: Path | None):
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)
        log.info("wrote %s", output)


def _ctx(args) -> bounds.PrecisionContext:
    if args.precision is not None:
        return bounds.PrecisionContext(args.precision)
    return bounds.PrecisionContext.from_env()


def _cmd_verify(args) -> tuple[str, bool]:
    if args.system == "plus":
        e_max = args.e_max or 80
        log.info("verifying 3x+1 circuits: tau <= %d, e <= %d", args.tau_max, e_max)
        if args.tau_max < 2:
            raise UsageError("--tau-max must be >= 2")
        report = verify.verify_steiner_circuits(args.tau_max, e_max, parallelism=args.parallelism)
    else:
        e_max = args.e_max or 40
        if args.tau_max < 2 or e_max < 2:
            raise UsageError("--tau-max and --e-max must be >= 2")
        if args.bound < 100:
            raise UsageError("--search-bound must be >= 100")
        log.info("verifying 3x-1 circuits: tau <= %d, e <= %d, search to %d", args.tau_max, e_max, args.bound)
        report = verify.verify_minus_circuits(
            args.tau_max, e_max, args.bound, parallelism=args.parallelism, max_steps=args.max_steps
        )
    return render(report, args.format), report.passed


def _cmd_ratio_scan(args) -> tuple[str, bool]:
    report = verify.steiner_ratio_scan(args.a_max, args.b_max)
    return render(report, args.format), report.passed


def _cmd_search(args) -> tuple[str, bool]:
    log.info("searching %s cycles from odd starts <= %d", args.sign.label, args.bound)
    result = search_cycles(args.bound, args.sign, args.max_steps, args.parallelism)
    cycles = [c.as_dict() for c in result.cycles]
    if args.format == "json":
        payload = {
            "system": args.sign.label,
            "bound": args.bound,
            "max_steps": args.max_steps,
            "cycles": cycles,
            "circuits": len(result.circuits),
            "budget_exceeded": [ex.start for ex in result.exceeded],
        }
        return json.dumps(payload, indent=2) + "\n", True
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("min_element", "length", "descents", "circuit_tau", "circuit_e", "iterates", "grading"))
        for c in cycles:
            circ = c["circuit"] or {}
            w.writerow(
                (
                    c["min_element"],
                    c["length"],
                    c["descents"],
                    circ.get("tau", ""),
                    circ.get("e", ""),
                    " ".join(map(str, c["iterates"])),
                    " ".join(map(str, c["grading"])),
                )
            )
        return buf.getvalue(), True
    lines = [f"{args.sign.label}: {len(cycles)} cycle(s), {len(result.circuits)} circuit(s) from odd starts <= {args.bound}"]
    for c in cycles:
        circ = c["circuit"]
        tag = "not a circuit"
        if circ:
            tag = f"circuit tau={circ['tau']} e={circ['e']}" + (" (degenerate)" if circ["degenerate"] else "")
        lines.append(f"  min {c['min_element']}: length {c['length']}, descents {c['descents']}, {tag}")
        lines.append(f"    iterates {c['iterates']}")
        lines.append(f"    grading  {c['grading']}")
    if result.exceeded:
        lines.append(f"  {len(result.exceeded)} start(s) exceeded {args.max_steps} steps")
    return "\n".join(lines) + "\n", True


def _cmd_bounds(args) -> tuple[str, bool]:
    ctx = _ctx(args)
    log.info("evaluating bound chain at %d digits", ctx.working_digits)
    window = verify.hypothesis_window(ctx)
    chain = verify.verify_bound_chain(args.tau_max, ctx)
    point = {}
    if args.tau is not None:
        s = args.s or (3**args.tau).bit_length()
        bm = bounds.belaga_mignotte_bound(args.tau, s, ctx)
        point = {
            "tau": args.tau,
            "s": s,
            "iterate_bound": str(bm),
            "iterate_bound_below_3^tau": bm < 3**args.tau,
            "log_gap_holds": bounds.rhin_gap_check(args.tau, s, ctx),
        }
        if args.e is not None:
            mb = bounds.minus_system_bound(args.e, args.tau, ctx)
            point["minus"] = {
                "e": args.e,
                "finite": mb.finite,
                "rational_bound": str(mb.rational_bound),
                "log_form_bound": str(mb.rhin_bound),
                "below_2^(e+tau-1)": mb.below_two_power,
                "numerator_abs": mb.numerator_abs,
                "numerator_cap": mb.numerator_cap,
            }
    passed = window.passed and chain.passed
    if args.format == "json":
        payload = {"hypothesis_window": window.to_dict(), "bound_chain": chain.to_dict()}
        if point:
            payload["point"] = point
        return json.dumps(payload, indent=2, default=str) + "\n", passed
    if args.format == "csv":
        return window.to_csv(), passed
    text = window.to_text() + chain.to_text()
    if point:
        text += "point: " + json.dumps(point, default=str) + "\n"
    return text, passed


def _cmd_identities(args) -> tuple[str, bool]:
    results = identities.run_suite(args.suite)
    passed = all(r.passed for r in results)
    if args.format == "json":
        payload = {
            "suites": [
                {"suite": r.name, "range": r.range, "cases": r.cases, "failures": r.failures, "verdict": "pass" if r.passed else "fail"}
                for r in results
            ],
            "verdict": "pass" if passed else "fail",
        }
        return json.dumps(payload, indent=2, default=str) + "\n", passed
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("suite", "range", "cases", "failures", "status"))
        for r in results:
            w.writerow((r.name, r.range, r.cases, len(r.failures), "pass" if r.passed else "fail"))
        return buf.getvalue(), passed
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name:<14} {r.cases:>5} cases  ({r.range})" for r in results]
    return "\n".join(lines) + "\n", passed


def _cmd_residues(args) -> tuple[str, bool]:
    p = CircuitParams(args.tau, args.e, args.sign)
    g, a = circuit_inputs(p)
    wanted = ("a", "b", "c", "closed") if args.engine == "all" else (args.engine,)
    results: dict[str, dict] = {}
    table = None
    for name in wanted:
        try:
            if name == "a":
                pair = engine_a(g, a)
            elif name == "b":
                pair = engine_b(g, a)
            elif name == "c":
                table, pair = engine_c(p)
            else:
                pair = closed_form_residues(p)
            results[name] = {"mu": pair.mu.value, "lambda": pair.lam.value}
        except (UnsupportedGrading, OutOfRegime) as exc:
            results[name] = {"unavailable": str(exc)}
    x = circuit_max_element(p)
    computed = [(r["mu"], r["lambda"]) for r in results.values() if "mu" in r]
    agree = len(set(computed)) <= 1
    info = {
        "tau": p.tau,
        "e": p.e,
        "sign": int(p.sign),
        "moduli": {"mu": 3**p.tau, "lambda": 2 ** g.s(p.tau)},
        "max_element": str(x),
        "integral": x.denominator == 1,
        "in_regime": p.in_regime,
        "engines": results,
        "agree": agree,
    }
    if table is not None:
        info["digit_table"] = table.rows()
    if args.format == "json":
        return json.dumps(info, indent=2) + "\n", agree
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("engine", "mu", "lambda", "note"))
        for name, r in results.items():
            w.writerow((name, r.get("mu", ""), r.get("lambda", ""), r.get("unavailable", "")))
        return buf.getvalue(), agree
    lines = [
        f"circuit tau={p.tau} e={p.e} sign={int(p.sign):+d}: max element {x}"
        + ("" if p.in_regime else "  (outside the D-sign regime)"),
        f"  moduli: 3^{p.tau} = {3**p.tau}, 2^{g.s(p.tau)} = {2 ** g.s(p.tau)}",
    ]
    for name, r in results.items():
        if "mu" in r:
            lines.append(f"  {name:<7} mu = {r['mu']:<12} lambda = {r['lambda']}")
        else:
            lines.append(f"  {name:<7} unavailable: {r['unavailable']}")
    lines.append(f"  engines agree: {'yes' if agree else 'NO'}")
    if table is not None:
        lines.append("  digit table (row v: 3-adic digits | graded 2-adic digits, by level u)")
        for row in table.rows():
            lines.append(f"    v={row['v']:<3} {' '.join(map(str, row['madic']))} | {' '.join(map(str, row['ladic']))}")
    return "\n".join(lines) + "\n", agree


COMMANDS = {
    "verify": _cmd_verify,
    "search": _cmd_search,
    "ratio-scan": _cmd_ratio_scan,
    "bounds": _cmd_bounds,
    "identities": _cmd_identities,
    "residues": _cmd_residues,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(message)s", stream=sys.stderr)
    try:
        text, passed = COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    _emit(text, args.output)
    return 0 if passed else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
