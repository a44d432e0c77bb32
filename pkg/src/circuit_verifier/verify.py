"""Sweeps that turn engines, case tables, lemmas and the orbit oracle into verdicts.

Every sweep case is independent. With ``parallelism > 1`` cases are spread
over worker processes; results are merged in (tau, e) order, so reports do
not depend on the schedule.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import bounds
from .dynamics import CircuitParams, Sign, circuit_max_element, is_circuit, search_cycles, steiner_ratio
from .report import VerificationReport
from .residues import circuit_inputs, closed_form_residues, engine_a, engine_b, engine_c

# Branch labels for the 3x+1 exclusion taxonomy.
PLUS_E_ODD = "mu even, lambda odd [e odd]"
PLUS_BOTH_EVEN = "mu even, lambda odd [tau even, e even]"
PLUS_LEMMA = "Lemma parity [tau odd, e even, e > 2]"
PLUS_LEMMA_E2 = "Lemma e = 2 [tau odd]"
TAU1_NEGATIVE = "tau = 1: no positive solution [e = 1]"
TAU1_TRIVIAL = "tau = 1: trivial cycle (1) [e = 2]"
TAU1_BELOW_ONE = "tau = 1: max element < 1 [e > 2]"

# Branch labels for the 3x-1 taxonomy.
MINUS_DEGENERATE = "equal: degenerate fixed point 1 [e = 1]"
MINUS_FIVE_SEVEN = "equal: circuit (5, 7) [tau = e = 2]"
MINUS_E_ODD = "lambda = (2^e+1)/3 > 1 = mu [e odd, e > 1]"
MINUS_GERSONIDES = "Gersonides [tau even, e even]"
MINUS_PARITY = "mu even, lambda odd [tau odd, e even]"


def _map(fn, items, parallelism: int):
    items = list(items)
    if parallelism <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * parallelism))))


def lemma_plus_condition(tau: int, e: int) -> bool:
    """True iff ``2(3^tau - 1) != (2^tau - 1) 2^e``, i.e. mu and lambda differ."""
    if tau < 3 or tau % 2 == 0:
        raise ValueError(f"tau must be odd and >= 3, got {tau}")
    if e < 2 or e % 2:
        raise ValueError(f"e must be even and >= 2, got {e}")
    return 2 * (3**tau - 1) != (2**tau - 1) * 2**e


def _lemma_argument(tau: int, e: int) -> bool:
    """The parity argument itself, not just the integer comparison.

    (3^tau - 1)/2 = sum of tau odd powers of 3, so it is odd for odd tau.
    Equality would need 2^(e-2) (2^tau - 1) to equal it, forcing e = 2;
    at e = 2 it reads 3^tau - 1 = 2 (2^tau - 1), false for tau > 1.
    """
    half = (3**tau - 1) // 2
    if half % 2 != 1:
        return False
    if e > 2:
        return True
    return 3**tau - 1 != 2 * (2**tau - 1)


def _engine_pairs(p: CircuitParams) -> dict[str, tuple[int, int]]:
    g, a = circuit_inputs(p)
    out = {"a": engine_a(g, a).as_tuple(), "b": engine_b(g, a).as_tuple()}
    if p.sign is Sign.PLUS:
        out["c"] = engine_c(p)[1].as_tuple()
    out["closed"] = closed_form_residues(p).as_tuple()
    return out


def _plus_case(point: tuple[int, int]) -> dict:
    tau, e = point
    p = CircuitParams(tau, e, Sign.PLUS)
    base = {"tau": tau, "e": e, "sign": "+1"}
    failures = []

    if tau == 1:
        x = circuit_max_element(p)
        if e == 1:
            branch, ok = TAU1_NEGATIVE, x < 0
        elif e == 2:
            branch, ok = TAU1_TRIVIAL, x == 1
        else:
            branch, ok = TAU1_BELOW_ONE, x < 1
        if not ok:
            failures.append(("tau1-bound", "<= 1 (= 1 only at e = 2)", str(x)))
        row = dict(base, mu="", **{"lambda": ""}, branch=branch, status="pass" if ok else "fail")
        return {"row": row, "failures": failures, "skipped": None}

    if not p.in_regime:
        return {"row": None, "failures": [], "skipped": dict(base, reason="skipped: hypothesis fails (D <= 0)")}

    pairs = _engine_pairs(p)
    mu, lam = pairs["closed"]
    if len(set(pairs.values())) != 1:
        failures.append(("engine-disagreement", "all engines equal", pairs))

    if e % 2 == 1:
        branch = PLUS_E_ODD
        ok = mu % 2 == 0 and lam % 2 == 1
    elif tau % 2 == 0:
        branch = PLUS_BOTH_EVEN
        ok = mu % 2 == 0 and lam % 2 == 1
    else:
        branch = PLUS_LEMMA if e > 2 else PLUS_LEMMA_E2
        ok = lemma_plus_condition(tau, e) and _lemma_argument(tau, e)
    if not ok:
        failures.append(("branch-argument", branch, {"mu": mu, "lambda": lam}))
    if any(m == l for m, l in pairs.values()):
        failures.append(("mu-equals-lambda", "mu != lambda", pairs))

    row = dict(base, mu=mu, **{"lambda": lam}, branch=branch, status="fail" if failures else "pass")
    return {"row": row, "failures": failures, "skipped": None}


def _collect(report: VerificationReport, results: list[dict]):
    for r in results:
        if r["skipped"] is not None:
            report.skipped.append(r["skipped"])
            continue
        row = r["row"]
        report.cases_checked += 1
        report.rows.append(row)
        params = {k: row[k] for k in ("tau", "e", "sign")}
        for kind, expected, actual in r["failures"]:
            report.fail(kind, params, expected, actual)
    # Engine disagreement is the most severe failure class; list it first.
    report.failures.sort(key=lambda f: (f["kind"] != "engine-disagreement",))


def _branch_counts(rows: list[dict]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for row in rows:
        counts[row["branch"]] = counts.get(row["branch"], 0) + 1
    return dict(sorted(counts.items()))


def verify_steiner_circuits(tau_max: int, e_max: int, parallelism: int = 1) -> VerificationReport:
    """No nontrivial 3x+1 circuit for tau <= tau_max, e <= e_max.

    Each in-regime case must agree across all engines and fall into exactly
    one exclusion branch that shows mu != lambda.
    """
    if tau_max < 2 or e_max < 1:
        raise ValueError("need tau_max >= 2 and e_max >= 1")
    report = VerificationReport(
        claim_id="plus-circuits",
        parameter_range=f"1 <= tau <= {tau_max}, 1 <= e <= {e_max}, sign +1, D > 0",
        anchors=["plus-residue-table", "plus-parity-lemma", "tau1-degenerate-ratio", "steiner-one-cycle"],
    )
    points = [(tau, e) for tau in range(1, tau_max + 1) for e in range(1, e_max + 1)]
    _collect(report, _map(_plus_case, points, parallelism))
    report.details["branches"] = _branch_counts(report.rows)
    report.details["engines"] = ["a", "b", "c", "closed"]
    return report


def _minus_case(point: tuple[int, int]) -> dict:
    tau, e = point
    p = CircuitParams(tau, e, Sign.MINUS)
    base = {"tau": tau, "e": e, "sign": "-1"}
    if not p.in_regime:
        return {"row": None, "failures": [], "skipped": dict(base, reason="skipped: hypothesis fails (D >= 0)")}

    failures = []
    pairs = _engine_pairs(p)
    mu, lam = pairs["closed"]
    if len(set(pairs.values())) != 1:
        failures.append(("engine-disagreement", "all engines equal", pairs))

    expect_equal = e == 1 or (tau, e) == (2, 2)
    if e == 1:
        branch, ok = MINUS_DEGENERATE, mu == lam == 1
    elif (tau, e) == (2, 2):
        branch, ok = MINUS_FIVE_SEVEN, mu == lam == 7
    elif e % 2 == 1:
        branch, ok = MINUS_E_ODD, mu == 1 and lam == (2**e + 1) // 3 > 1
    elif tau % 2 == 0:
        branch = MINUS_GERSONIDES
        if e > 2:
            # 3^tau + 1 = 9^(tau/2) + 1 is 2 mod 4, so 2^(e-1) cannot divide it.
            ok = (3**tau + 1) % 4 == 2
        else:
            ok = 3**tau != 2 ** (tau + 1) + 1
    else:
        branch, ok = MINUS_PARITY, mu % 2 == 0 and lam % 2 == 1
    if not ok:
        failures.append(("branch-argument", branch, {"mu": mu, "lambda": lam}))
    if (mu == lam) != expect_equal:
        failures.append(("iff-condition", "mu == lambda" if expect_equal else "mu != lambda", {"mu": mu, "lambda": lam}))

    hyp = bounds.minus_system_bound(e, tau)
    row = dict(base, mu=mu, **{"lambda": lam}, branch=branch, status="fail" if failures else "pass")
    return {
        "row": row,
        "failures": failures,
        "skipped": None,
        "hypothesis": hyp.below_two_power,
        "bound": str(hyp.rational_bound),
    }


def gersonides_solutions(tau_max: int = 1000) -> list[int]:
    return [tau for tau in range(1, tau_max + 1) if 3**tau == 2 ** (tau + 1) + 1]


def verify_minus_circuits(
    tau_max: int,
    e_max: int,
    search_bound: int,
    parallelism: int = 1,
    max_steps: int = 10**5,
) -> VerificationReport:
    """The 3x-1 circuits are exactly (1) and (5, 7), by tables and by brute force."""
    if tau_max < 2 or e_max < 2:
        raise ValueError("need tau_max >= 2 and e_max >= 2")
    if search_bound < 100:
        raise ValueError("search_bound must be >= 100")
    report = VerificationReport(
        claim_id="minus-circuits",
        parameter_range=f"2 <= tau <= {tau_max}, 1 <= e <= {e_max}, sign -1, D < 0; orbit search to {search_bound}",
        anchors=["minus-residue-table", "minus-iff-lemma", "gersonides-step", "minus-circuit-conclusion"],
    )

    # (a) closed-form iff, with engines A and B cross-checked.
    points = [(tau, e) for tau in range(2, tau_max + 1) for e in range(1, e_max + 1)]
    results = _map(_minus_case, points, parallelism)
    _collect(report, results)
    unestablished = [
        {"tau": r["row"]["tau"], "e": r["row"]["e"], "bound": r["bound"]}
        for r in results
        if r["skipped"] is None and not r["hypothesis"]
    ]
    report.details["branches"] = _branch_counts(report.rows)
    report.details["engines"] = ["a", "b", "closed"]
    report.details["hypothesis_not_established"] = unestablished

    # (b) the two realized solution families.
    report.cases_checked += 1
    x = circuit_max_element(CircuitParams(2, 2, Sign.MINUS))
    if x != 7:
        report.fail("realized-circuit", {"tau": 2, "e": 2, "sign": "-1"}, 7, str(x))
    for tau in range(1, tau_max + 1):
        report.cases_checked += 1
        p = CircuitParams(tau, 1, Sign.MINUS)
        x = circuit_max_element(p)
        if x != 1 or not p.degenerate:
            report.fail("degenerate-circuit", {"tau": tau, "e": 1, "sign": "-1"}, 1, str(x))

    # (c) orbit oracle; uses only the dynamics, never the residue engines.
    found = search_cycles(search_bound, Sign.MINUS, max_steps=max_steps, parallelism=parallelism)
    report.cases_checked += 1
    circuit_mins = [c.min_element for c in found.circuits]
    if circuit_mins != [1, 5]:
        report.fail("oracle-circuits", {"bound": search_bound}, [1, 5], circuit_mins)
    report.details["oracle_cycles"] = [c.as_dict() for c in found.cycles]
    report.details["oracle_budget_exceeded"] = [ex.start for ex in found.exceeded]

    # (d) 3^tau = 2^(tau+1) + 1 only at tau = 2.
    report.cases_checked += 1
    sols = gersonides_solutions(1000)
    if sols != [2]:
        report.fail("gersonides-scan", {"tau_max": 1000}, [2], sols)
    report.details["gersonides_solutions"] = sols
    return report


def steiner_ratio_scan(a_max: int, b_max: int) -> VerificationReport:
    if a_max < 1 or b_max < 1:
        raise ValueError("a_max and b_max must be positive")
    report = VerificationReport(
        claim_id="steiner-ratio",
        parameter_range=f"1 <= a <= {a_max}, 1 <= b <= {b_max}",
        anchors=["steiner-ratio-integrality"],
    )
    hits = []
    for a in range(1, a_max + 1):
        for b in range(1, b_max + 1):
            r = steiner_ratio(a, b)
            report.cases_checked += 1
            if r > 0 and r.denominator == 1:
                hits.append({"a": a, "b": b, "value": int(r)})
                if (a, b) != (1, 1):
                    report.fail("integral-ratio", {"a": a, "b": b}, "non-integer or non-positive", str(r))
    report.details["positive_integer_hits"] = hits
    return report


def hypothesis_window(
    ctx: bounds.PrecisionContext | None = None,
    threshold_override: int | None = None,
) -> VerificationReport:
    """The regime x_max >= 3^tau is empty: it needs tau < threshold, but Garner forces tau >= 17700.

    ``threshold_override`` replaces the computed threshold; it exists so the
    harness can confirm that a bad threshold makes the check fail.
    """
    ctx = ctx or bounds.PrecisionContext()
    report = VerificationReport(
        claim_id="hypothesis-window",
        parameter_range=f"threshold scan tau <= {bounds.THRESHOLD_SCAN_LIMIT} at {ctx.working_digits} digits",
        anchors=["iterate-bound-threshold", "eliahou-ratio", "garner-floor"],
    )
    threshold = bounds.tau_threshold_plus(ctx)
    doubled = bounds.tau_threshold_plus(ctx.doubled())
    report.cases_checked += 1
    if doubled != threshold:
        report.fail("precision-stability", {"digits": ctx.doubled().working_digits}, threshold, doubled)
    if threshold_override is not None:
        threshold = threshold_override

    ratio = bounds.eliahou_ratio_bound(1, ctx)
    floor_s = bounds.garner_floor()
    tau_floor = -(-Fraction(floor_s) // ratio)
    report.cases_checked += 1
    if not tau_floor > threshold:
        report.fail("window", {"tau_floor": int(tau_floor), "threshold": threshold}, "tau_floor > threshold", "not greater")
    report.details.update(
        {
            "tau_threshold": threshold,
            "tau_threshold_doubled_precision": doubled,
            "ratio_bound": str(ratio),
            "garner_floor": floor_s,
            "tau_floor": int(tau_floor),
            "garner_note": bounds.GARNER_NOTE,
        }
    )
    return report


def verify_bound_chain(tau_max: int = 2000, ctx: bounds.PrecisionContext | None = None) -> VerificationReport:
    """For each tau, with s the least exponent making 2^s > 3^tau, the iterate bound is finite and the log gap holds."""
    ctx = ctx or bounds.PrecisionContext()
    report = VerificationReport(
        claim_id="bound-chain",
        parameter_range=f"2 <= tau <= {tau_max}, s = ceil(tau log2 3)",
        anchors=["iterate-upper-bound", "log-linear-form-gap"],
    )
    tightest = None
    for tau in range(2, tau_max + 1):
        s = (3**tau).bit_length()
        report.cases_checked += 1
        bm = bounds.belaga_mignotte_bound(tau, s, ctx)
        gap_ok = bounds.rhin_gap_check(tau, s, ctx)
        if bm == bounds.INF or not gap_ok:
            report.fail("bound-chain", {"tau": tau, "s": s}, "finite bound and gap holds", {"finite": bm != bounds.INF, "gap": gap_ok})
        ratio = Fraction(2**s, 3**tau)
        if tightest is None or ratio < tightest[0]:
            tightest = (ratio, tau, s)
    if tightest is not None:
        report.details["closest_approach"] = {"tau": tightest[1], "s": tightest[2]}
    return report
