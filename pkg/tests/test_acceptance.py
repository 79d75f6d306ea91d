"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""

import math
import random
import time
from fractions import Fraction
from itertools import permutations

from multipivot.asymptotic import asymptotic_estimate, series_reconstruct
from multipivot.constants import (
    closed_form_s_minus2,
    lu_residual,
    solve_constants,
    solve_constants_lu,
)
from multipivot.engine import mc_comparisons, mc_synthetic, multipivot_sort
from multipivot.indicial import derivative_identities, indicial_roots
from multipivot.num_core import check_stirling_identities, harmonic
from multipivot.oracle import TollModel, exact_cost_table

TOLLS = [TollModel(1, -1), TollModel(1, 0), TollModel(2, 1)]


def test_criterion_1_classical_anchor(criterion):
    t0 = time.perf_counter()
    table = exact_cost_table(1, TollModel(1, -1), 200)
    bad = [n for n in range(2, 201) if table[n] != 2 * (n + 1) * harmonic(n) - 4 * n]
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 5
    criterion(ok, f"{len(bad)} mismatches for 2<=n<=200, {elapsed:.2f}s (limit 5s)")
    assert ok


def test_criterion_2_series_equals_oracle(criterion):
    t0 = time.perf_counter()
    worst_rel = worst_abs = 0.0
    failures = []
    for k in range(1, 7):
        for toll in TOLLS:
            table = exact_cost_table(k, toll, 100)
            series = series_reconstruct(100, k, toll)
            for n in range(101):
                f = float(table[n])
                err = abs(series[n] - f)
                if abs(f) < 1:
                    worst_abs = max(worst_abs, err)
                    if err >= 1e-8:
                        failures.append((k, str(toll), n))
                else:
                    worst_rel = max(worst_rel, err / abs(f))
                    if err >= 1e-6 * abs(f):
                        failures.append((k, str(toll), n))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 30
    criterion(ok, f"max rel {worst_rel:.1e} (tol 1e-6), max abs {worst_abs:.1e} (tol 1e-8), "
                  f"{len(failures)} failures, {elapsed:.2f}s (limit 30s)")
    assert ok, failures[:10]


def test_criterion_3_theorem_remainder(criterion):
    t0 = time.perf_counter()
    failures = []
    worst = 0.0
    for k in range(1, 7):
        for toll in TOLLS:
            table = exact_cost_table(k, toll, 2048, arithmetic="float")
            est = asymptotic_estimate(k, toll)
            gap = {n: table[n] - float(est(n)) for n in (512, 1024, 2048)}
            bound = 0.01 * max(1, abs(float(toll.a_bar)))
            for n in (512, 1024):
                d = abs(gap[2 * n] - gap[n])
                worst = max(worst, d / bound)
                if d >= bound:
                    failures.append(f"k={k} toll=({toll.a_bar},{toll.b_bar}) n={n}: {d:.4f} >= {bound}")
    exact = exact_cost_table(1, TollModel(1, -1), 300)
    est1 = asymptotic_estimate(1, TollModel(1, -1))
    if any(exact[n] - est1(n) != 2 for n in range(2, 301)):
        failures.append("k=1 gap not identically 2")
    exact2 = exact_cost_table(2, TollModel(1, -1), 300)
    est2 = asymptotic_estimate(2, TollModel(1, -1))
    if any(exact2[n] - est2(n) != 1 for n in range(4, 301)):
        failures.append("k=2 gap not identically 1 for n>=4")
    elapsed = time.perf_counter() - t0
    if elapsed >= 60:
        failures.append(f"runtime {elapsed:.1f}s")
    ok = not failures
    criterion(ok, f"worst |gap(2n)-gap(n)|/bound = {worst:.2f}, {elapsed:.2f}s (limit 60s)"
                  + ("" if ok else "; " + "; ".join(failures)))
    assert ok, failures


def test_criterion_4_closed_form_identities(criterion):
    t0 = time.perf_counter()
    bad = [k for k in range(1, 13) if not derivative_identities(k).ok]
    bad += [k for k in range(2, 21) if not check_stirling_identities(k).ok]
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 5
    criterion(ok, f"indicial k<=12 and Stirling k<=20 exact, {len(bad)} failures, {elapsed:.2f}s (limit 5s)")
    assert ok


def test_criterion_5_vandermonde(criterion):
    t0 = time.perf_counter()
    rng = random.Random(2024)
    worst_res = worst_lu = worst_closed = 0.0
    for k in range(1, 11):
        roots = indicial_roots(k)
        worst_res = max(worst_res, lu_residual(roots))
        for _ in range(20):
            toll = TollModel(Fraction(rng.randint(-30, 30), rng.randint(1, 12)),
                             Fraction(rng.randint(-30, 30), rng.randint(1, 12)))
            sol = solve_constants(k, toll, roots)
            lu = solve_constants_lu(k, toll, roots)
            worst_lu = max(worst_lu, max(abs(a - b) for a, b in zip(lu, sol.values)))
            worst_closed = max(worst_closed, abs(sol.s_minus2 - float(closed_form_s_minus2(k, toll))))
    elapsed = time.perf_counter() - t0
    ok = worst_res < 1e-9 and worst_lu < 1e-9 and worst_closed < 1e-8 and elapsed < 10
    criterion(ok, f"||ULV-I|| {worst_res:.1e} (1e-9), LU vs direct {worst_lu:.1e} (1e-9), "
                  f"closed form {worst_closed:.1e} (1e-8), {elapsed:.2f}s (limit 10s)")
    assert ok


def test_criterion_6_monte_carlo(criterion):
    t0 = time.perf_counter()
    toll = TollModel(1, -1)
    parts = []
    ok = True
    for n, k in [(100, 2), (500, 3), (500, 5)]:
        f = float(exact_cost_table(k, toll, n)[n])
        rep = mc_synthetic(n, k, toll, 100_000, seed=20130101)
        z = (rep.mean - f) / rep.std_error
        parts.append(f"(n={n},k={k}) z={z:+.2f}")
        ok &= abs(z) < 4
    again = mc_synthetic(100, 2, toll, 100_000, seed=20130101)
    first = mc_synthetic(100, 2, toll, 100_000, seed=20130101)
    ok &= again == first
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 120
    criterion(ok, ", ".join(parts) + f", deterministic={again == first}, {elapsed:.1f}s (limit 120s)")
    assert ok


def test_criterion_7_sorter(criterion):
    t0 = time.perf_counter()
    rng = random.Random(7)
    wrong = 0
    for k in (1, 2, 3):
        for strategy in ("sequential", "binary"):
            for n in range(9):
                target = list(range(n))
                for p in permutations(target):
                    wrong += multipivot_sort(p, k, strategy, rng)[0] != target
    n = 10_000
    rep = mc_comparisons(n, 1, 200)
    ratio = rep.mean / (2 * n * math.log(n))
    exact_ratio = float(2 * (n + 1) * harmonic(n) - 4 * n) / (2 * n * math.log(n))
    elapsed = time.perf_counter() - t0
    ok = wrong == 0 and 0.93 <= ratio <= 1.02 and elapsed < 120
    criterion(ok, f"{wrong} incorrect sorts; k=1 mean/(2n ln n) = {ratio:.4f} (band [0.93, 1.02]; "
                  f"exact expectation gives {exact_ratio:.4f}), {elapsed:.1f}s (limit 120s)")
    assert wrong == 0
    assert 0.93 <= ratio <= 1.02
    assert elapsed < 120
