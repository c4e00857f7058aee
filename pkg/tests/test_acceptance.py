"""Acceptance criteria 1-11, each at its stated tolerance and time budget.

Every criterion prints one PASS/FAIL line; the lines are repeated in the
terminal summary.
"""

import random
import time
from fractions import Fraction
from unittest import mock

import mpmath
from mpmath import mpc, mpf

from besselmoments import integrand as integrand_mod
from besselmoments import modular as M
from besselmoments import verify as V
from besselmoments.eichler import ContourPath, EichlerSpec, eichler_vertical
from besselmoments.moments import ikm, jym, memo_disabled
from besselmoments.specfun import DEFAULT_CTX, PrecisionContext, bessel

from conftest import ACCEPTANCE_LINES

ctx = DEFAULT_CTX
T32 = mpf(10) ** -32
T30 = mpf(10) ** -30
T15 = mpf(10) ** -15


def report(n, title, checks, budget=None, per_item_budget=None):
    """checks: list of (label, ok, detail, seconds)."""
    total = sum(c[3] for c in checks)
    bad = [c for c in checks if not c[1]]
    slow = []
    if per_item_budget is not None:
        slow = [c for c in checks if c[3] > per_item_budget]
    over = budget is not None and total > budget
    ok = not bad and not slow and not over
    line = f"criterion {n:>2} {'PASS' if ok else 'FAIL'}  {title}: {len(checks) - len(bad)}/{len(checks)} checks, {total:.1f}s"
    if bad:
        line += "; failed: " + ", ".join(f"{c[0]} ({c[2]})" for c in bad)
    if slow:
        line += "; over time: " + ", ".join(f"{c[0]} {c[3]:.0f}s" for c in slow)
    if over:
        line += f"; total over {budget}s"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def records(ids, tol, context=ctx):
    out = []
    for id in ids:
        r = V._safe_run(id, context, tol)
        detail = r.error or f"residual {mpmath.nstr(r.abs_residual, 3)}"
        out.append((id, r.passed, detail, r.seconds))
    return out


def timed(label, fn):
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # noqa: BLE001 - reported as a failed check
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return (label, ok, detail, time.perf_counter() - t0)


def test_criterion_01_bologna():
    checks = records(["B1_bologna"], T32) + records(["B2_bologna_jym"], T15)
    report(1, "Bologna constant and the five-step random walk", checks, per_item_budget=60)


def test_criterion_02_matrix():
    ids = ["B1_bologna", "B_closed_143", "B_closed_231", "B_closed_233", "B_closed_145", "B_closed_235"]
    checks = records(ids, T32) + records(["B_determinant"], T30)
    report(2, "moment matrix, determinant and higher moments", checks)


def test_criterion_03_table1():
    ids = [r.id for r in V.registry() if r.id.startswith("B_table1_")]
    assert len(ids) == 10
    report(3, "X63 and Z63 derivatives at the CM point", records(ids, T30), budget=120)


def test_criterion_04_lvalues():
    ids = ["L1_sunrise4_ikm151_331", "L2_ikm331_L2", "E7_ikm241_eichler_cusp0", "L5_ikm241_L3", "L7_ikm441_L3",
           "L9_sunrise6_ikm171_351", "L10_ikm351_L4", "L11_ikm261_L5", "L12_ratio_4_7"]
    checks = records(ids, T30)

    def sum_rule():
        r = V.run("L8_sumrule_441_261", ctx)
        bound = T30 * ikm(2, 6, 1, ctx).value
        return r.abs_residual < bound, f"residual {mpmath.nstr(r.abs_residual, 3)} vs {mpmath.nstr(bound, 3)}"

    checks.append(timed("L8_sumrule_441_261", sum_rule))
    report(4, "critical L-values of f46 and f66", checks, per_item_budget=600)


def test_criterion_05_broadhurst():
    checks = records(["E12_broadhurst_G_243", "E13_broadhurst_G_153", "L13_bm_determinant"], T30)
    report(5, "Broadhurst integrals and determinant", checks)


def test_criterion_06_eichler():
    ids = ["E1_id240", "E2_calE_value", "E3_calE1_value", "E4_calE2_value", "E5_calE3_value", "E6_calE4_value",
           "E18_2arc_sum0", "E17_z4_plus_2_7_z2"]
    report(6, "Eichler integral special values", records(ids, T30))


def test_criterion_07_sum_rules():
    sums = ["S_sumrule_31_even", "S_sumrule_51_even", "S_sumrule_41_odd", "S_sumrule_30_odd"]
    bm = [f"S_bm_sequence_{m}{n}" for m in (1, 2, 3) for n in (1, 2)]
    report(7, "vanishing sum rules and near-integer sequence", records(sums, T30) + records(bm, mpf(10) ** -20))


def test_criterion_08_qseries():
    def recipes():
        a = M.quotient_qseries(M.F66, 200, recipe=0)
        b = M.quotient_qseries(M.F66, 200, recipe=1)
        return a.lead == b.lead and a.coeffs == b.coeffs and len(a) == 200, "200 coefficients compared"

    def hecke():
        f = M.quotient_qseries(M.F46, 10)
        return f.coefficient(6) == f.coefficient(2) * f.coefficient(3), f"a(6) = {f.coefficient(6)}"

    report(8, "exact q-series", [timed("f66 recipes", recipes), timed("f46 a(6) = a(2)a(3)", hecke)])


def test_criterion_09_parametrizations():
    ids = [r.id for r in V.registry() if r.suite == "H"]
    report(9, "Hankel, Y- and K-transform parametrizations", records(ids, T15), per_item_budget=300)


def test_criterion_10_properties():
    rng = random.Random(20240)
    c = PrecisionContext(30)
    checks = []

    def wronskian():
        worst = mpf(0)
        for _ in range(10):
            t = Fraction(rng.randint(10, 2000), 100)
            w = bessel("I0", t, ctx) * bessel("K1", t, ctx) + bessel("I1", t, ctx) * bessel("K0", t, ctx)
            worst = max(worst, abs(w - mpf(t.denominator) / t.numerator))
        return worst < mpf(10) ** (-ctx.digits + 4), f"max {mpmath.nstr(worst, 3)}"

    def upper_points():
        return [mpc(rng.uniform(-1, 1), rng.uniform(0.2, 2)) for _ in range(10)]

    def eta_inversion():
        worst = max(abs(M.eta(-1 / z, ctx) - mpmath.sqrt(z / 1j) * M.eta(z, ctx)) / abs(M.eta(-1 / z, ctx)) for z in upper_points())
        return worst < ctx.tight, f"max {mpmath.nstr(worst, 3)}"

    def fricke_w2():
        worst = mpf(0)
        for z in upper_points():
            f = M.eval_form(M.F66, z, ctx)
            worst = max(worst, abs(M.eval_form(M.F66, -1 / (6 * z), ctx) + 216 * z**6 * f) / abs(216 * z**6 * f))
            j = (6 * z - 2) / mpmath.sqrt(2)
            g = M.eval_form(M.F46, z, ctx)
            worst = max(worst, abs(M.eval_form(M.F46, M.w2(z), ctx) - j**4 * g) / abs(j**4 * g))
            x = M.eval_form(M.X62, z, ctx)
            worst = max(worst, abs(M.eval_form(M.X62, M.w2(z), ctx) - x) / max(1, abs(x)))
        return worst < ctx.tight, f"max {mpmath.nstr(worst, 3)}"

    def split_point():
        worst = mpf(0)
        with memo_disabled():
            for args in ((1, 4, 1), (2, 4, 1), (0, 3, 2)):
                a, b = ikm(*args, c).value, ikm(*args, c, shift=5).value
                worst = max(worst, abs(a - b) / abs(a))
        spec = EichlerSpec(M.F66, [0, 0, 1], ContourPath.vertical(0))
        a = eichler_vertical(spec, c, split_sq=Fraction(1, 6))
        b = eichler_vertical(spec, c, split_sq=Fraction(5, 24))
        worst = max(worst, abs(a - b) / abs(a))
        return worst < c.tight, f"max {mpmath.nstr(worst, 3)}"

    def segment_doubling():
        orig = integrand_mod.panel_edges

        def doubled(*a, **k):
            e = orig(*a, **k)
            out = [e[0]]
            for x, y in zip(e, e[1:]):
                out += [(x + y) / 2, y]
            return out

        ok = True
        with memo_disabled():
            for fn, args in ((ikm, (1, 4, 1)), (jym, (5, 0, 1))):
                r1 = fn(*args, c)
                with mock.patch.object(integrand_mod, "panel_edges", doubled):
                    r2 = fn(*args, c)
                ok &= abs(r1.value - r2.value) <= max(r1.abs_error_estimate, r2.abs_error_estimate)
        return ok, "ikm(1,4,1), jym(5,0,1)"

    def precision_monotone():
        exact = mpmath.pi**2 / 16
        errs = [abs(ikm(1, 3, 1, PrecisionContext(d)).value - exact) for d in (20, 30, 40)]
        return errs[0] >= errs[1] >= errs[2], ", ".join(mpmath.nstr(e, 2) for e in errs)

    for label, fn in (("Wronskian", wronskian), ("eta inversion", eta_inversion), ("Fricke and W2 laws", fricke_w2),
                      ("split-point independence", split_point), ("segment doubling", segment_doubling),
                      ("precision monotonicity", precision_monotone)):
        checks.append(timed(label, fn))
    report(10, "property suites", checks)


def test_criterion_11_oscillatory():
    ids = ["W_parseval_ikm241", "W_parseval_ikm261", "W_parseval_jym601", "W_hilbert_cancel"]
    c24 = PrecisionContext(24)
    report(11, "Parseval fusions and Hilbert cancelation at 24 digits", records(ids, mpf(10) ** -12, c24), per_item_budget=1800)
