"""Self-check suite behind ``multipivot verify``.

Each check records what it measured and the tolerance it was held to. Exact
checks use tolerance 0 and measure |lhs - rhs|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from multipivot import asymptotic, constants, indicial, num_core, oracle
from multipivot.oracle import TollModel

TOLLS = (TollModel(1, -1), TollModel(1, 0), TollModel(2, 1))
REMAINDER_POINTS = (512, 1024, 2048)


@dataclass
class Check:
    name: str
    measured: float
    tolerance: float

    @property
    def passed(self) -> bool:
        if self.tolerance == 0:
            return self.measured == 0
        return self.measured < self.tolerance

    def as_row(self) -> dict:
        return {"check": self.name, "measured": self.measured,
                "tolerance": self.tolerance, "passed": self.passed}


def _exact(name: str, report) -> Check:
    worst = max(abs(c.lhs - c.rhs) for c in report.checks)
    return Check(name, float(worst), 0.0)


def identity_checks(k_max: int) -> list[Check]:
    out = [_exact(f"stirling_identities[k={k}]", num_core.check_stirling_identities(k))
           for k in range(2, max(k_max, 2) + 1)]
    out += [_exact(f"indicial_identities[k={k}]", indicial.derivative_identities(k))
            for k in range(1, min(k_max, indicial.K_CAP) + 1)]
    return out


def _toll_tag(t: TollModel) -> str:
    return f"{t.a_bar},{t.b_bar}"


def analytic_checks(k: int, n_max: int) -> list[Check]:
    poly = indicial.build_indicial(k)
    roots = indicial.find_roots(poly)
    out = [
        Check(f"root_residual[k={k}]", indicial.max_residual(poly), indicial.RESIDUAL_TOL),
        Check(f"vandermonde_lu_residual[k={k}]", constants.lu_residual(roots), 1e-9),
    ]
    for toll in TOLLS:
        tag = f"k={k},toll={_toll_tag(toll)}"
        sol = constants.solve_constants(k, toll, roots)
        lu = constants.solve_constants_lu(k, toll, roots)
        out.append(Check(f"lu_vs_direct[{tag}]", float(np.max(np.abs(lu - np.array(sol.values)))), 1e-9))
        closed = float(constants.closed_form_s_minus2(k, toll))
        out.append(Check(f"closed_form_s_minus2[{tag}]", abs(sol.s_minus2 - closed), 1e-8))

        table = oracle.exact_cost_table(k, toll, n_max)
        series = asymptotic.series_reconstruct(n_max, k, toll, roots, sol)
        worst = 0.0
        for n in range(n_max + 1):
            f = float(table[n])
            err = abs(series[n] - f)
            # relative error where |f| >= 1, scaled so 1e-8 absolute maps onto 1e-6
            worst = max(worst, err / abs(f) if abs(f) >= 1 else err * 100)
        out.append(Check(f"series_vs_oracle[{tag}]", worst, 1e-6))
        out.append(Check(f"boundary_values[{tag}]", max(abs(series[n]) for n in range(k)), 1e-8))
        out.append(remainder_check(k, toll, series_points=REMAINDER_POINTS, roots=roots, sol=sol))
    if k <= 2:
        out.append(exact_gap_check(k, n_max))
    return out


def remainder_check(k, toll, series_points, roots, sol) -> Check:
    """gap(n) - (a-b)/k must equal the summed non-(-2) root terms.

    This pins the estimate's o(n) remainder to the decaying homogeneous terms
    rather than asking for a fixed decay rate.
    """
    top = max(series_points)
    table = oracle.exact_cost_table(k, toll, top, oracle.Arithmetic.FLOAT)
    est = asymptotic.asymptotic_estimate(k, toll)
    limit = float(est.constant_term)
    worst = 0.0
    for n in series_points:
        rest = 0j
        for r, s in sol.entries:
            if abs(r + 2) > 1e-6:
                rest += s * asymptotic.binom_complex(r, n)
        gap = table[n] - float(est(n))
        worst = max(worst, abs(gap - limit - rest.real) / max(1.0, abs(table[n])))
    return Check(f"remainder_is_root_terms[k={k},toll={_toll_tag(toll)}]", worst, 1e-9)


def exact_gap_check(k: int, n_max: int) -> Check:
    """For k <= 2 every non-(-2) root term vanishes once n > k, so the gap is exact."""
    toll = TOLLS[0]
    table = oracle.exact_cost_table(k, toll, n_max)
    est = asymptotic.asymptotic_estimate(k, toll)
    start = 2 if k == 1 else 4
    worst = max(abs(table[n] - est(n) - est.constant_term) for n in range(start, n_max + 1))
    return Check(f"gap_equals_limit_exactly[k={k}]", float(worst), 0.0)


def run_checks(k_max: int, n_max: int, identities_only: bool = False) -> list[Check]:
    checks = identity_checks(k_max)
    if not identities_only:
        for k in range(1, k_max + 1):
            checks.extend(analytic_checks(k, n_max))
    return checks

