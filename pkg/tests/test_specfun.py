from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mpf

from besselmoments.moments import ikm
from besselmoments.specfun import (
    DomainError,
    PrecisionContext,
    bessel,
    bessel_scaled,
    domb,
    gamma,
    hankel1_0,
    hyp_pfq,
    principal_power,
    zeta3_routes,
    zeta_int,
)


def close(a, b, tol):
    return abs(a - b) <= tol * max(1, abs(b))


def test_context_validation():
    with pytest.raises(ValueError):
        PrecisionContext(15)
    with pytest.raises(ValueError):
        PrecisionContext(40, series_guard=3)
    with pytest.raises(ValueError):
        PrecisionContext(40, tail_order=3)
    c = PrecisionContext(40)
    assert c.tight == mpf(10) ** -32
    assert c.with_digits(24).digits == 24


def test_gamma_trivial_values(ctx):
    assert gamma(1, ctx) == 1
    assert close(gamma(Fraction(1, 2), ctx), mpmath.sqrt(mpmath.pi), ctx.eps)


def test_gamma_product_is_bologna_moment(ctx):
    g = [gamma(Fraction(k, 15), ctx) for k in (1, 2, 4, 8)]
    expected = g[0] * g[1] * g[2] * g[3] / (240 * mpmath.sqrt(5))
    assert close(ikm(1, 4, 1, ctx).value, expected, ctx.tight)


def test_zeta_values(ctx):
    assert close(zeta_int(2, ctx), mpmath.pi**2 / 6, ctx.eps)
    a, b = zeta3_routes(ctx)
    assert abs(a - b) < ctx.eps
    assert close(zeta_int(3, ctx), a, ctx.eps)
    assert close(7 * zeta_int(3, ctx) / 8, ikm(0, 4, 1, ctx).value, ctx.tight)


def test_zeta_domain():
    with pytest.raises(DomainError):
        zeta_int(1)


def test_i0_at_zero(ctx):
    assert bessel("I0", 0, ctx) == 1


def test_wronskian_fixed_point(ctx):
    t = Fraction(5, 4)
    w = bessel("I0", t, ctx) * bessel("K1", t, ctx) + bessel("I1", t, ctx) * bessel("K0", t, ctx)
    assert close(w, mpf(4) / 5, ctx.eps * 100)


@given(st.fractions(min_value=Fraction(1, 10), max_value=20, max_denominator=1000))
def test_wronskian_property(t):
    c = PrecisionContext(30)
    w = bessel("I0", t, c) * bessel("K1", t, c) + bessel("I1", t, c) * bessel("K0", t, c)
    assert abs(w - 1 / mpmath.mpf(Fraction(t).numerator) * Fraction(t).denominator) < mpf(10) ** (-c.digits + 4)


def test_k0_asymptotic_normalization(ctx):
    v = bessel("K0", 30, ctx) * mpmath.exp(30) * mpmath.sqrt(mpf(60) / mpmath.pi)
    assert abs(v - 1) < mpf(1) / 30


@pytest.mark.parametrize("kind", ["J0", "Y0", "I0", "K0", "J1", "I1", "K1"])
def test_regime_consistency(kind, ctx):
    t = ctx.crossover
    s, _ = bessel_scaled(kind, t, ctx, regime="series")
    a, _ = bessel_scaled(kind, t, ctx, regime="asymptotic")
    assert close(s, a, mpf(10) ** (-ctx.digits + 2))


@pytest.mark.parametrize("kind", ["J0", "Y0", "K0"])
def test_against_mpmath(kind, ctx):
    ref = {"J0": mpmath.besselj, "Y0": mpmath.bessely, "K0": mpmath.besselk}[kind]
    for t in (Fraction(1, 3), Fraction(7, 2), Fraction(50)):
        x = mpf(t.numerator) / t.denominator
        assert close(bessel(kind, t, ctx), ref(0, x), ctx.eps * 10)


def test_domain_errors(ctx):
    with pytest.raises(DomainError):
        bessel("K0", 0, ctx)
    with pytest.raises(DomainError):
        bessel("J0", -1, ctx)
    with pytest.raises(DomainError):
        bessel("H0", 1, ctx)
    with pytest.raises(DomainError):
        hankel1_0(0, ctx)


def test_determinism(ctx):
    assert bessel("Y0", Fraction(17, 3), ctx) == bessel("Y0", Fraction(17, 3), ctx)
    assert ikm(1, 3, 1, ctx).value == ikm(1, 3, 1, ctx).value


def test_precision_monotone():
    exact = mpmath.besselk(0, mpf(7) / 3)
    errs = [abs(bessel("K0", Fraction(7, 3), PrecisionContext(d)) - exact) for d in (20, 30, 40)]
    assert errs[0] >= errs[1] >= errs[2]


@pytest.mark.parametrize("x", [Fraction(1, 2), Fraction(5), Fraction(120)])
def test_hankel1_parts(x, ctx):
    h = hankel1_0(x, ctx)
    assert close(h.real, bessel("J0", x, ctx), ctx.eps * 10)
    assert close(h.imag, bessel("Y0", x, ctx), ctx.eps * 10)


def test_hankel1_modulus(ctx):
    for x in (100, 1000):
        h = hankel1_0(x, ctx)
        assert abs(abs(h) ** 2 * mpmath.pi * x / 2 - 1) < mpf(1) / x


def test_principal_power():
    w = mpmath.mpc(-1, 1e-30)
    assert principal_power(w, mpf(1) / 2).imag > 0
    w = mpmath.mpc(-1, -1e-30)
    assert principal_power(w, mpf(1) / 2).imag < 0


def test_hyp_pfq(ctx):
    assert hyp_pfq([Fraction(1, 3)], [1], 0, ctx) == 1
    a, b, c, x = Fraction(1, 3), Fraction(2, 3), 1, Fraction(3, 10)
    assert close(hyp_pfq([a, b], [c], x, ctx), mpmath.hyp2f1(mpf(1) / 3, mpf(2) / 3, 1, mpf(3) / 10), ctx.eps * 10)


def test_domb_numbers():
    assert [domb(n) for n in range(6)] == [1, 4, 28, 256, 2716, 31504]


def test_rogers_domb_identity(ctx):
    u = Fraction(1, 10)
    arg = 27 * u**2 / (4 * (1 - u) ** 3)
    lhs = hyp_pfq([Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)], [1, 1], arg, ctx)
    rhs = mpf(0)
    n = 0
    while True:
        term = domb(n) * (mpf(1) / 40) ** n
        rhs += term
        if abs(term) < ctx.work_eps:
            break
        n += 1
    assert close(lhs, mpf(9) / 10 * rhs, ctx.eps * 10)


def test_hankel_transform_hypergeometric(ctx):
    from besselmoments.moments import transform
    from besselmoments.verify import IKK

    x = mpf(1) / 2
    closed = mpmath.pi / mpmath.sqrt(3) / (3 + x**2) * hyp_pfq(
        [Fraction(1, 3), Fraction(2, 3)], [1], Fraction(1, 2) ** 4 * (9 + Fraction(1, 4)) / (3 + Fraction(1, 4)) ** 3, ctx
    )
    assert close(transform("J", Fraction(1, 2), IKK, ctx), closed, ctx.tight)
