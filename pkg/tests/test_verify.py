from dataclasses import replace
from unittest import mock

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mpf

from besselmoments import verify as V
from besselmoments.moments import memo_disabled
from besselmoments.specfun import PrecisionContext


def test_registry_size_and_shape():
    recs = V.registry()
    assert len(recs) >= 35
    assert len({r.id for r in recs}) == len(recs)
    assert all(r.anchor.strip() for r in recs)
    assert all(r.description.strip() for r in recs)
    assert {r.suite for r in recs} == set(V.SUITES)
    assert all(r.tolerance_class in ("tight", "loose") for r in recs)


def test_get_unknown():
    with pytest.raises(KeyError):
        V.get("no_such_record")


def test_bologna_record(ctx):
    r = V.run("B1_bologna", ctx)
    assert r.passed
    assert r.abs_residual < ctx.tight
    assert r.error is None


def test_sum_rule_record(ctx):
    assert V.run("L8_sumrule_441_261", ctx).passed


def test_id240_record(ctx):
    r = V.run("E1_id240", ctx)
    assert r.passed
    assert abs(r.lhs - 1) < ctx.tight and abs(r.rhs - 1) < ctx.tight


def test_unknown_suite_is_empty(ctx):
    assert V.run_suite("nonexistent", ctx) == []
    assert V.select("nonexistent") == []


def test_select_by_id():
    assert [r.id for r in V.select("B1_bologna")] == ["B1_bologna"]


def test_suite_b(ctx):
    results = V.run_suite("B", ctx)
    assert [r.id for r in results] == sorted(r.id for r in results)
    assert all(r.passed for r in results), [r.id for r in results if not r.passed]


def test_suite_s_at_lower_precision():
    c24 = PrecisionContext(24)
    results = V.run_suite("S", c24)
    assert all(r.passed for r in results)
    assert all(r.digits == 24 for r in results)


def test_parallel_run_matches_serial(ctx30):
    ids = ["B_closed_143", "B_closed_231", "S_zeta3_routes"]
    with mock.patch.object(V, "select", lambda s: [V.get(i) for i in ids]):
        serial = V.run_suite("x", ctx30)
        par = V.run_suite("x", ctx30, parallelism=2)
    assert [r.id for r in serial] == [r.id for r in par] == sorted(ids)
    assert [r.passed for r in serial] == [r.passed for r in par]
    assert [r.lhs for r in serial] == [r.lhs for r in par]


def test_tolerance_override(ctx30):
    r = V.run_suite("B_closed_143", ctx30, tolerance_overrides={"B_closed_143": mpf(0)})
    assert len(r) == 1 and not r[0].passed
    assert r[0].tolerance == 0


def test_no_panic_contract(ctx30):
    def boom(c):
        raise RuntimeError("deliberate")

    bad = replace(V.get("B_closed_143"), id="Z_broken", lhs=boom)
    recs = V.registry() + [bad]
    with mock.patch.object(V, "registry", lambda: recs):
        results = V.run_suite("Z_broken", ctx30)
    assert len(results) == 1
    r = results[0]
    assert not r.passed
    assert "deliberate" in r.error
    d = r.to_dict()
    assert d["pass"] is False and d["lhs"] == ""


def test_fixed_precision_records():
    rec = V.get("W_parseval_ikm241")
    assert rec.context(PrecisionContext(40)).digits == V.OSCILLATORY_DIGITS
    assert rec.tolerance(PrecisionContext(40)) == V.OSCILLATORY_TOL


def test_independence_audit(ctx30):
    cached = V.run("B_closed_233", ctx30)
    with memo_disabled():
        fresh = V.run("B_closed_233", ctx30)
    assert abs(cached.lhs - fresh.lhs) <= cached.tolerance * abs(cached.lhs)
    assert abs(cached.rhs - fresh.rhs) <= cached.tolerance * abs(cached.rhs)


@pytest.mark.parametrize("id", ["B_closed_143", "E1_id240", "L_explicit_f46_2"])
def test_monotone_residuals(id):
    lo = V.run(id, PrecisionContext(30))
    hi = V.run(id, PrecisionContext(40))
    assert hi.abs_residual / hi.tolerance <= max(lo.abs_residual / lo.tolerance, mpf(10) ** -8)


def test_result_serialization(ctx30):
    d = V.run("B_closed_143", ctx30).to_dict()
    assert set(d) == {"id", "description", "anchor", "lhs", "rhs", "abs_residual", "rel_residual", "tolerance", "pass", "seconds"}
    assert all(isinstance(d[k], str) for k in ("lhs", "rhs", "abs_residual", "tolerance", "seconds"))
    assert len(d["lhs"].replace("-", "").replace(".", "")) >= 30


finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


@given(finite, finite, st.floats(min_value=0, max_value=1))
def test_pass_criterion(a, b, tol):
    res, rel, ok = V.passes(mpf(a), mpf(b), mpf(tol))
    assert ok == (abs(mpf(a) - mpf(b)) <= mpf(tol) * max(1, abs(a), abs(b)))
    assert res == abs(mpf(a) - mpf(b))
