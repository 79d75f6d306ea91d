"""Command line entry point: ``multipivot <command> [options]``.

Every command writes one JSON document (default) or one CSV table. Exit codes:
0 success, 1 a verification check failed, 2 invalid usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from math import factorial

from multipivot import asymptotic, constants, engine, indicial, num_core, oracle
from multipivot.oracle import TollModel

SCHEMA_VERSION = 1

# CSV column sets; changing one means bumping SCHEMA_VERSION
COLUMNS = {
    "roots": ["k", "index", "re", "im", "residual"],
    "identities": ["k", "family", "identity", "lhs", "rhs", "ok"],
    "constants": ["k", "index", "root_re", "root_im", "s_re", "s_im"],
    "analyze": ["k", "n", "oracle", "theorem", "series", "gap", "predicted_limit"],
    "verify": ["check", "measured", "tolerance", "passed"],
    "simulate": ["mode", "n", "k", "trials", "seed", "mean", "variance", "std_error"],
    "fit-toll": ["k", "strategy", "size", "mean", "residual", "a_bar", "b_bar"],
}


class UsageError(ValueError):
    pass


def fmt(value):
    """Serialize without losing exactness: Fractions become "p/q" strings."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return value


def _toll(args) -> TollModel:
    try:
        return TollModel.parse(args.a_bar, args.b_bar)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"toll must be given as p/q rationals: {exc}") from exc


def _need_k(k, cap=indicial.K_CAP):
    if k is None or not 1 <= k <= cap:
        raise UsageError(f"--k must lie in [1, {cap}]")
    return k


# ---------------------------------------------------------------- commands


def cmd_roots(args):
    k = _need_k(args.k)
    poly = indicial.build_indicial(k)
    roots = indicial.find_roots(poly)
    scale = factorial(k + 1)
    rows = [
        {"k": k, "index": i, "re": r.real, "im": r.imag, "residual": abs(poly.value(r)) / scale}
        for i, r in enumerate(roots)
    ]
    ident = indicial.derivative_identities(k)
    doc = {
        "k": k,
        "coefficients": poly.coeffs,
        "roots": rows,
        "identities": [
            {"identity": c.name, "lhs": fmt(c.lhs), "rhs": fmt(c.rhs), "ok": c.ok} for c in ident.checks
        ],
    }
    return doc, rows, 0


def cmd_identities(args):
    k_max = args.k_max if args.k_max is not None else num_core.STIRLING_CAP
    if not 2 <= k_max <= num_core.STIRLING_CAP:
        raise UsageError(f"--k-max must lie in [2, {num_core.STIRLING_CAP}]")
    rows = []
    for k in range(2, k_max + 1):
        for c in num_core.check_stirling_identities(k).checks:
            rows.append({"k": k, "family": "stirling", "identity": c.name,
                         "lhs": fmt(c.lhs), "rhs": fmt(c.rhs), "ok": c.ok})
    for k in range(1, min(k_max, indicial.K_CAP) + 1):
        for c in indicial.derivative_identities(k).checks:
            rows.append({"k": k, "family": "indicial", "identity": c.name,
                         "lhs": fmt(c.lhs), "rhs": fmt(c.rhs), "ok": c.ok})
    ok = all(r["ok"] for r in rows)
    return {"k_max": k_max, "all_ok": ok, "rows": rows}, rows, 0 if ok else 1


def cmd_constants(args):
    k = _need_k(args.k)
    toll = _toll(args)
    roots = indicial.indicial_roots(k)
    sol = constants.solve_constants(k, toll, roots)
    rows = [
        {"k": k, "index": i, "root_re": r.real, "root_im": r.imag, "s_re": s.real, "s_im": s.imag}
        for i, (r, s) in enumerate(sol.entries)
    ]
    doc = {
        "k": k,
        "a_bar": fmt(toll.a_bar),
        "b_bar": fmt(toll.b_bar),
        "rhs": [fmt(v) for v in constants.rhs_vector(k, toll)],
        "constants": rows,
        "closed_form_s_minus2": fmt(constants.closed_form_s_minus2(k, toll)),
        "lu_residual": constants.lu_residual(roots),
    }
    return doc, rows, 0


def cmd_analyze(args):
    k = _need_k(args.k)
    toll = _toll(args)
    points = sorted(set(args.n or [k + 1]))
    if points[0] <= k:
        raise UsageError(f"every --n must exceed k={k}")
    arithmetic = oracle.Arithmetic(args.arithmetic)
    if arithmetic is oracle.Arithmetic.RATIONAL and points[-1] > oracle.RATIONAL_CAP:
        raise UsageError(f"rational arithmetic limited to n <= {oracle.RATIONAL_CAP}")
    table = oracle.exact_cost_table(k, toll, points[-1], arithmetic, args.convention)
    series = asymptotic.series_reconstruct(points[-1], k, toll)
    est = asymptotic.asymptotic_estimate(k, toll)
    limit = asymptotic.predicted_limit(k, toll)
    rows = []
    for n in points:
        f = table[n]
        t = est(n)
        gap = f - t if isinstance(f, Fraction) else f - float(t)
        rows.append({
            "k": k, "n": n, "oracle": fmt(f), "theorem": fmt(t) if isinstance(f, Fraction) else float(t),
            "series": series[n], "gap": fmt(gap), "predicted_limit": fmt(limit),
        })
    doc = {
        "k": k, "a_bar": fmt(toll.a_bar), "b_bar": fmt(toll.b_bar),
        "convention": table.convention.value, "arithmetic": arithmetic.value,
        "leading_coeff": fmt(est.leading_coeff), "linear_coeff": fmt(est.linear_coeff),
        "rows": rows,
    }
    return doc, rows, 0


def cmd_verify(args):
    from multipivot.verify import run_checks

    k_max = args.k_max if args.k_max is not None else 6
    n_max = args.n_max if args.n_max is not None else 100
    if args.identities_only:
        if not 2 <= k_max <= num_core.STIRLING_CAP:
            raise UsageError(f"--k-max must lie in [2, {num_core.STIRLING_CAP}]")
    elif not 1 <= k_max <= 10:
        raise UsageError("--k-max must lie in [1, 10] for the full suite")
    if not k_max < n_max <= oracle.RATIONAL_CAP:
        raise UsageError(f"--n-max must lie in ({k_max}, {oracle.RATIONAL_CAP}]")
    checks = run_checks(k_max, n_max, identities_only=args.identities_only)
    rows = [c.as_row() for c in checks]
    ok = all(c.passed for c in checks)
    _echo_checks(checks)
    return {"k_max": k_max, "n_max": n_max, "all_passed": ok, "checks": rows}, rows, 0 if ok else 1


def cmd_simulate(args):
    if args.k is None or args.k < 1 or args.n is None or len(args.n) != 1:
        raise UsageError("simulate needs --k >= 1 and a single --n")
    n = args.n[0]
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if args.mode == "synthetic":
        if n < 0:
            raise UsageError("--n must be >= 0")
        report = engine.mc_synthetic(n, args.k, _toll(args), args.trials, args.seed, args.convention)
    else:
        if n < 1:
            raise UsageError("--n must be >= 1")
        report = engine.mc_comparisons(n, args.k, args.trials, args.seed, args.strategy)
    doc = report.to_dict()
    row = {c: doc[c] for c in COLUMNS["simulate"]}
    return doc, [row], 0


def cmd_fit_toll(args):
    if args.k is None or args.k < 1:
        raise UsageError("--k must be >= 1")
    sizes = args.n or []
    try:
        fit = engine.fit_toll(args.k, args.strategy, sizes, args.trials, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = [
        {"k": args.k, "strategy": args.strategy, "size": s, "mean": m, "residual": r,
         "a_bar": fit.toll.a_bar, "b_bar": fit.toll.b_bar}
        for s, m, r in zip(fit.sizes, fit.means, fit.residuals)
    ]
    doc = {"k": args.k, "strategy": args.strategy, "trials": fit.trials, "seed": fit.seed,
           "a_bar": fit.toll.a_bar, "b_bar": fit.toll.b_bar, "rows": rows}
    return doc, rows, 0


COMMANDS = {
    "roots": cmd_roots,
    "identities": cmd_identities,
    "constants": cmd_constants,
    "analyze": cmd_analyze,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "fit-toll": cmd_fit_toll,
}


# ---------------------------------------------------------------- plumbing


def _echo_checks(checks) -> None:
    color = sys.stderr.isatty() and "NO_COLOR" not in os.environ
    for c in checks:
        tag = "PASS" if c.passed else "FAIL"
        if color:
            tag = f"\x1b[{32 if c.passed else 31}m{tag}\x1b[0m"
        print(f"{tag} {c.name}: measured {c.measured:.3e} (tol {c.tolerance:.1e})", file=sys.stderr)


def render(command: str, doc: dict, rows: list[dict], fmt_name: str) -> str:
    if fmt_name == "json":
        body = {"schema_version": SCHEMA_VERSION, "command": command}
        body.update(doc)
        return json.dumps(body, indent=2, default=str) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS[command], extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: fmt(v) for key, v in row.items()})
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int)
    common.add_argument("--k-max", type=int)
    common.add_argument("--n", type=int, nargs="+")
    common.add_argument("--n-max", type=int)
    common.add_argument("--a-bar", default="1", help="toll slope as p/q")
    common.add_argument("--b-bar", default="-1", help="toll constant as p/q")
    common.add_argument("--trials", type=int, default=1000)
    common.add_argument("--seed", type=int, default=engine.DEFAULT_SEED)
    common.add_argument("--strategy", choices=[s.value for s in engine.Strategy], default="sequential")
    common.add_argument("--convention", choices=[c.value for c in oracle.Convention], default="paper")
    common.add_argument("--arithmetic", choices=[a.value for a in oracle.Arithmetic], default="rational")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", help="write to PATH instead of standard output")

    parser = argparse.ArgumentParser(prog="multipivot", description="k-pivot Quicksort cost analysis")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "verify":
            p.add_argument("--identities-only", action="store_true")
        if name == "simulate":
            p.add_argument("--mode", choices=[m.value for m in engine.Mode], default="synthetic")
    return parser


def _glue_rationals(argv: list[str]) -> list[str]:
    # argparse reads "-2/7" as an option; attach toll values to their flag
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--a-bar", "--b-bar") and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_rationals(argv))
    try:
        doc, rows, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"multipivot {args.command}: {exc}", file=sys.stderr)
        return 2
    text = render(args.command, doc, rows, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
