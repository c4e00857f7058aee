from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mpc, mpf

from besselmoments import modular as M
from besselmoments.modular import QSeries
from besselmoments.specfun import PrecisionContext, to_mpf

C24 = PrecisionContext(24)


def close(a, b, tol):
    return abs(a - b) <= tol * max(1, abs(a), abs(b))


points = st.builds(
    lambda x, y: mpc(mpf(x.numerator) / x.denominator, mpf(y.numerator) / y.denominator),
    st.fractions(min_value=-1, max_value=1, max_denominator=50),
    st.fractions(min_value=Fraction(1, 5), max_value=2, max_denominator=50),
)


# exact q-series


def test_eta_leading_terms():
    e = M.eta_qseries(30)
    assert e.lead == Fraction(1, 24)
    assert e.coefficient(Fraction(1, 24)) == 1
    assert [e[k] for k in (1, 2, 5, 7)] == [-1, -1, 1, 1]


def test_eta_matches_direct_product():
    assert list(M.eta_qseries(60).coeffs) == M.euler_product_direct(60)


def test_eta_24th_power():
    d = M.eta_qseries(10) ** 24
    assert d.lead == 1
    assert d.coefficient(2) == -24
    assert d.coefficient(3) == 252


def test_qseries_arithmetic():
    a = QSeries(0, [1, 2, 3, 4])
    b = QSeries(0, [1, -1, 0])
    assert (a * b).N == 3
    assert (a * a.inverse()).coeffs == (1, 0, 0, 0)
    assert (a + b).N == 3
    assert (a**-2 * a**2).coeffs == (1, 0, 0, 0)
    assert (a - a).coeffs == (0, 0, 0, 0)
    with pytest.raises(ValueError):
        QSeries(Fraction(1, 5), [1])


def test_qseries_negative_power_needs_unit():
    with pytest.raises((ValueError, ZeroDivisionError)):
        QSeries(0, [0, 1]).inverse()


def test_f46_coefficients():
    f = M.quotient_qseries(M.F46, 20)
    a = [f.coefficient(n) for n in range(1, 8)]
    assert a == [1, -2, -3, 4, 6, 6, -16]
    assert f.coefficient(6) == f.coefficient(2) * f.coefficient(3)


def test_f66_recipes_agree_exactly():
    a = M.quotient_qseries(M.F66, 200, recipe=0)
    b = M.quotient_qseries(M.F66, 200, recipe=1)
    assert a.lead == b.lead
    assert a.coeffs == b.coeffs
    assert all(isinstance(c, (int, Fraction)) for c in a.coeffs)


@pytest.mark.parametrize("name", ["X63", "Z63", "X62", "Z62", "f46", "f66"])
def test_leading_exponent_rule(name):
    spec = M.get_form(name)
    qs = M.quotient_qseries(spec, 10)
    assert qs.lead == min(spec.leading_exponents())


def test_unknown_form():
    with pytest.raises(KeyError):
        M.get_form("nope")


def test_upper_half_plane_enforced():
    with pytest.raises(ValueError):
        M.UpperHalfPoint(mpc(0, -1))
    with pytest.raises(ValueError):
        M.eval_form(M.X63, mpc(0.3, 0))


def test_qseries_csv_round_trip():
    text = M.quotient_qseries(M.F46, 5).to_csv()
    rows = [line.split(",") for line in text.strip().splitlines()]
    assert len(rows) >= 5


# numeric values


def test_cm_values(ctx):
    z = M.cm_point(ctx)
    c = M.bologna_c(ctx)
    assert close(M.eval_form(M.X63, z, ctx), mpf(-1) / 64, ctx.tight)
    assert close(M.eval_form(M.Z63, z, ctx), 8 * mpmath.sqrt(3) * c / mpmath.pi, ctx.tight)


def test_x63_on_imaginary_axis(ctx):
    vals = [M.eval_form(M.X63, mpc(0, y), ctx) for y in (mpf("0.4"), mpf("0.8"), mpf("1.6"))]
    assert all(abs(v.imag) < ctx.tight for v in vals)
    assert all(v.real > 0 for v in vals)
    assert vals[0].real > vals[1].real > vals[2].real


def test_eta_ratio_sqrt2(ctx):
    assert close(M.eta(mpc(0, 0.5), ctx) / M.eta(mpc(0, 2), ctx), mpmath.sqrt(2), ctx.tight)


def test_theta_routes(ctx):
    z = mpc(mpf(1) / 7, mpf(3) / 5)
    assert close(M.theta(z, ctx), M.theta_series(z, ctx), ctx.tight)


def test_eisenstein_values(ctx):
    z = mpc(0, mpf("1.1"))
    e4 = M.eisenstein("E4", z, ctx)
    e6 = M.eisenstein("E6", z, ctx)
    assert abs(e4.imag) < ctx.tight
    assert close(e4**3 - e6**2, 1728 * M.eta(z, ctx) ** 24, ctx.tight)
    assert close(M.eisenstein("E2star", mpc(0, 1), ctx), 3 / mpmath.pi, ctx.tight)
    assert abs(M.eisenstein("E2", mpc(0, 1), ctx)) < ctx.tight


def test_qseries_and_eta_routes(ctx):
    z = mpc(mpf(1) / 3, mpf(7) / 10)
    for spec in (M.F46, M.F66, M.X63, M.SIGMA4):
        assert close(M.eval_form(spec, z, ctx, method="qseries"), M.eval_form(spec, z, ctx), ctx.tight)


def test_weight4_identity(ctx):
    z = mpc(mpf(1) / 2, mpf(9) / 10)
    assert close(M.weight4_closed_form(z, ctx), M.eval_form(M.SIGMA4, z, ctx), ctx.tight)


@pytest.mark.parametrize("x", [Fraction(0), Fraction(1, 2)])
def test_reality_on_symmetric_lines(x, ctx):
    for y in (Fraction(3, 10), Fraction(1), Fraction(2)):
        z = mpc(to_mpf(x), to_mpf(y))
        for spec in (M.F46, M.F66):
            v = M.eval_form(spec, z, ctx)
            assert abs(v.imag) < ctx.tight * max(1, abs(v))


def test_table1(ctx):
    num = M.cm_derivative_table(None, 4, ctx)
    closed = M.table1_closed_forms(ctx)
    assert set(num) == set(closed) and len(closed) == 10
    for k in closed:
        assert close(num[k], closed[k], mpf(10) ** -30), k


def test_table1_selected_entries(ctx):
    c = M.bologna_c(ctx)
    t = M.table1_closed_forms(ctx)
    assert close(t[("X63", 1)], 3 * mpmath.sqrt(15) * c / (32 * 1j), ctx.tight)
    assert close(t[("Z63", 2)], -48 * mpmath.sqrt(3) * c * (62 * c**2 - 18 * c + 3) / (5 * mpmath.pi), ctx.tight)


def test_jacobian_route(ctx):
    z = M.cm_point(ctx)
    cauchy = M.cauchy_derivatives(lambda w: M.eval_form(M.X63, w, ctx), z, 1, ctx)[1]
    assert close(cauchy, M.x63_derivative_jacobian(z, ctx), mpf(10) ** -30)


def test_cauchy_radius_guard(ctx):
    with pytest.raises(ValueError):
        M.cauchy_derivatives(lambda w: w, mpc(0, 0.01), 1, ctx)


# transformation laws


@given(points)
def test_eta_inversion(z):
    lhs = M.eta(-1 / z, C24)
    rhs = mpmath.sqrt(z / 1j) * M.eta(z, C24)
    assert close(lhs, rhs, C24.tight)


@given(points)
def test_f66_fricke_law(z):
    lhs = M.eval_form(M.F66, -1 / (6 * z), C24)
    rhs = -216 * z**6 * M.eval_form(M.F66, z, C24)
    assert close(lhs, rhs, C24.tight)


@given(points)
def test_f46_fricke_law(z):
    assert close(M.fricke_factor(M.F46, z, C24), 36, C24.tight)


@given(points)
def test_w2_laws(z):
    w = M.w2(z)
    j = (6 * z - 2) / mpmath.sqrt(2)
    assert close(M.eval_form(M.X62, w, C24), M.eval_form(M.X62, z, C24), C24.tight)
    assert close(M.eval_form(M.Z62, w, C24), -(j**2) * M.eval_form(M.Z62, z, C24), C24.tight)
    assert close(M.eval_form(M.F46, w, C24), j**4 * M.eval_form(M.F46, z, C24), C24.tight)
    assert close(M.eval_form(M.F66, w, C24), -(j**6) * M.eval_form(M.F66, z, C24), C24.tight)


@given(points)
def test_periodicity(z):
    for spec in (M.F46, M.F66, M.X63):
        assert close(M.eval_form(spec, z + 1, C24), M.eval_form(spec, z, C24), C24.tight)
