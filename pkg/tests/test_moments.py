from fractions import Fraction
from unittest import mock

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mpf

from besselmoments import integrand as integrand_mod
from besselmoments.integrand import Integrand
from besselmoments.moments import (
    MomentSpec,
    bm_sequence,
    ikm,
    jym,
    memo_disabled,
    sum_rule,
    transform,
    wick_check,
)
from besselmoments.specfun import DivergenceError, DomainError, PrecisionContext, zeta_int

pi = mpmath.pi


def close(a, b, tol):
    return abs(a - b) <= tol * max(1, abs(a), abs(b))


# closed forms


def test_ikm_121(ctx):
    assert close(ikm(1, 2, 1, ctx).value, pi / (3 * mpmath.sqrt(3)), ctx.tight)


def test_ikm_131(ctx):
    assert close(ikm(1, 3, 1, ctx).value, pi**2 / 16, ctx.tight)


def test_ikm_041(ctx):
    assert close(ikm(0, 4, 1, ctx).value, 7 * zeta_int(3, ctx) / 8, ctx.tight)


def test_ikm_141_report(ctx):
    r = ikm(1, 4, 1, ctx)
    g = mpmath.gamma
    closed = g(mpf(1) / 15) * g(mpf(2) / 15) * g(mpf(4) / 15) * g(mpf(8) / 15) / (240 * mpmath.sqrt(5))
    assert close(r.value, closed, ctx.tight)
    assert r.abs_error_estimate < ctx.tight * r.value
    assert r.segments > 0 and not r.accelerated


def test_jym_501_bologna(ctx):
    assert close(jym(5, 0, 1, ctx).value, 30 / pi**4 * ikm(1, 4, 1, ctx).value, ctx.loose)


def test_jym_300(ctx):
    assert close(jym(3, 0, 0, ctx).value, 4 / pi**3 * ikm(0, 3, 0, ctx).value, ctx.loose)


def test_jym_400(ctx):
    assert close(jym(4, 0, 0, ctx).value, 4 / pi**3 * ikm(1, 3, 0, ctx).value, ctx.loose)


def test_jym_wynn_tail_agrees(ctx30):
    a = jym(5, 0, 1, ctx30).value
    b = jym(5, 0, 1, ctx30, tail="wynn").value
    assert close(a, b, ctx30.loose)


def test_recursion_for_k0_cubed(ctx):
    c = {k: ikm(0, 3, k, ctx).value for k in range(6)}
    for k in (0, 1):
        res = (k + 1) ** 4 * c[k] - 2 * (5 * k**2 + 20 * k + 21) * c[k + 2] + 9 * c[k + 4]
        assert abs(res) < ctx.tight * c[k]


@pytest.mark.parametrize("a,b,n", [(0, 1, 0), (1, 2, 1), (2, 3, 1), (1, 4, 3), (2, 2, 0)])
def test_positivity(a, b, n, ctx30):
    assert ikm(a, b, n, ctx30).value > 0


# sum rules and the integer sequence


@pytest.mark.parametrize("m,n,branch", [(3, 1, "even_combination"), (2, 0, "even_combination"), (4, 1, "odd_combination")])
def test_sum_rules_vanish(m, n, branch, ctx):
    scale = ikm(1, 2 * m - 1, n, ctx).value
    assert abs(sum_rule(m, n, branch, ctx)) < ctx.tight * max(1, scale)


def test_sum_rule_conditions():
    with pytest.raises(ValueError):
        sum_rule(1, 0, "even_combination")
    with pytest.raises(ValueError):
        sum_rule(3, 2, "odd_combination")
    with pytest.raises(ValueError):
        sum_rule(3, 1, "neither")


def test_bm_sequence_first_value(ctx):
    # bm(1,1) reduces to 4/pi^2 * int K0^2 = 4/pi^2 * pi^2/4
    assert close(bm_sequence(1, 1, ctx), 1, ctx.tight)


@pytest.mark.parametrize("m", [2, 3])
def test_bm_sequence_near_integer(m, ctx):
    v = bm_sequence(m, 1, ctx)
    assert v > 0
    assert abs(v - mpmath.nint(v)) < ctx.tight * max(1, v)


# transforms


def test_transform_of_j0_cubed_vanishes_beyond_support(ctx):
    assert abs(transform("J", Fraction(7, 2), Integrand.product({"J0": 3}), ctx)) < ctx.loose


def test_transform_of_j0_fourth_vanishes_beyond_support(ctx):
    assert abs(transform("J", Fraction(9, 2), Integrand.product({"J0": 4}), ctx)) < ctx.loose


def test_transform_domain(ctx):
    with pytest.raises(DomainError):
        transform("K", 0, Integrand.product({"I0": 1, "K0": 2}), ctx)
    with pytest.raises(ValueError):
        transform("H", 1, Integrand.product({"I0": 1, "K0": 2}), ctx)


@pytest.mark.parametrize("identity,x", [("IIKK_JJJJ", Fraction(1, 2)), ("IKM261_Wick", None), ("JY_1_10_5", None)])
def test_wick_rotations(identity, x, ctx):
    lhs, rhs = wick_check(identity, x, ctx)
    assert close(lhs, rhs, ctx.loose)


def test_wick_domain(ctx):
    with pytest.raises(DomainError):
        wick_check("IIKK_JJJJ", Fraction(3, 2), ctx)
    with pytest.raises(KeyError):
        wick_check("no_such_identity", None, ctx)


# convergence predicate


@pytest.mark.parametrize("args", [("IKM", 2, 2, 1), ("IKM", 3, 1, 1), ("JYM", 2, 0, 1), ("JYM", 0, 0, 0)])
def test_divergent_moments_raise(args):
    with pytest.raises(DivergenceError) as info:
        MomentSpec(*args).check()
    assert f"({args[1]},{args[2]};{args[3]})" in str(info.value)


def test_divergent_ikm_call():
    with pytest.raises(DivergenceError):
        ikm(2, 1, 1)


def test_moment_spec_validation():
    with pytest.raises(ValueError):
        MomentSpec("XYZ", 1, 1, 1)
    with pytest.raises(ValueError):
        MomentSpec("IKM", -1, 1, 1)


# numerical stability


@given(st.sampled_from([(1, 2, 1), (0, 3, 2), (1, 4, 1), (2, 4, 3)]))
def test_split_point_independence(args):
    c = PrecisionContext(24)
    with memo_disabled():
        a = ikm(*args, c).value
        b = ikm(*args, c, shift=5).value
    assert close(a, b, c.tight)


def test_split_point_independence_oscillatory(ctx30):
    with memo_disabled():
        a = jym(5, 0, 1, ctx30).value
        b = jym(5, 0, 1, ctx30, shift=5).value
    assert close(a, b, ctx30.loose)


def _doubled_edges(*args, **kw):
    edges = _orig_edges(*args, **kw)
    out = [edges[0]]
    for x, y in zip(edges, edges[1:]):
        out += [(x + y) / 2, y]
    return out


_orig_edges = integrand_mod.panel_edges


@pytest.mark.parametrize("fn,args", [(ikm, (1, 4, 1)), (ikm, (2, 4, 1)), (jym, (5, 0, 1))])
def test_segment_doubling(fn, args, ctx30):
    with memo_disabled():
        r1 = fn(*args, ctx30)
        with mock.patch.object(integrand_mod, "panel_edges", _doubled_edges):
            r2 = fn(*args, ctx30)
    assert r2.segments > r1.segments
    assert abs(r1.value - r2.value) <= max(r1.abs_error_estimate, r2.abs_error_estimate)


def test_tail_order_stability():
    a = PrecisionContext(30, tail_order=24)
    b = PrecisionContext(30, tail_order=28)
    with memo_disabled():
        d = abs(jym(5, 0, 1, a).value - jym(5, 0, 1, b).value)
    assert d < mpf(10) ** -30


def test_memo_does_not_change_values(ctx30):
    cached = ikm(1, 3, 3, ctx30).value
    with memo_disabled():
        fresh = ikm(1, 3, 3, ctx30).value
    assert cached == fresh


def test_precision_monotone_against_closed_form():
    exact = pi**2 / 16
    errs = [abs(ikm(1, 3, 1, PrecisionContext(d)).value - exact) for d in (20, 30, 40)]
    assert errs[0] >= errs[1] >= errs[2]
