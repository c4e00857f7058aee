"""Identity registry: each record pairs two independent computations of one exact statement."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath
from mpmath import mpc, mpf

from . import eichler as E
from . import modular as M
from .eichler import ContourPath, EichlerSpec
from .integrand import Integrand
from .moments import ikm, jym, moment, parseval_fuse, sum_rule, bm_sequence, transform, wick_check
from .specfun import DEFAULT_CTX, DivergenceError, PrecisionContext, gamma, hyp_pfq, to_mpf, zeta3_routes, zeta_int

SUITES = ("S", "B", "L", "H", "E", "W")

#: records whose outer integrals are doubly oscillatory run at this precision
OSCILLATORY_DIGITS = 24
OSCILLATORY_TOL = mpf(10) ** -12


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    suite: str
    description: str
    anchor: str
    lhs: Callable
    rhs: Callable
    tolerance_class: str = "tight"
    independence: str = ""
    fixed_digits: int | None = None
    fixed_tolerance: object = None

    def tolerance(self, ctx: PrecisionContext):
        if self.fixed_tolerance is not None:
            return mpf(self.fixed_tolerance)
        return ctx.tight if self.tolerance_class == "tight" else ctx.loose

    def context(self, ctx: PrecisionContext) -> PrecisionContext:
        if self.fixed_digits is None:
            return ctx
        return ctx.with_digits(self.fixed_digits)


@dataclass
class VerificationResult:
    id: str
    description: str
    anchor: str
    lhs: object
    rhs: object
    abs_residual: object
    rel_residual: object
    tolerance: object
    passed: bool
    seconds: float
    digits: int = 40
    error: str | None = None

    def to_dict(self) -> dict:
        d = self.digits + 5
        return {
            "id": self.id,
            "description": self.description,
            "anchor": self.anchor,
            "lhs": _num_str(self.lhs, d),
            "rhs": _num_str(self.rhs, d),
            "abs_residual": _num_str(self.abs_residual, 6),
            "rel_residual": _num_str(self.rel_residual, 6),
            "tolerance": _num_str(self.tolerance, 6),
            "pass": self.passed,
            "seconds": f"{self.seconds:.3f}",
            **({"error": self.error} if self.error else {}),
        }


def _num_str(v, digits: int) -> str:
    if v is None:
        return ""
    v = mpmath.mpmathify(v)
    if isinstance(v, mpc):
        if v.imag == 0:
            v = v.real
        else:
            return f"{mpmath.nstr(v.real, digits)}{'+' if v.imag >= 0 else '-'}{mpmath.nstr(abs(v.imag), digits)}j"
    return mpmath.nstr(v, digits)


def passes(lhs, rhs, tol) -> tuple:
    """(abs residual, rel residual, pass) with pass iff |lhs - rhs| <= tol max(1, |lhs|, |rhs|)."""
    lhs = mpmath.mpmathify(lhs)
    rhs = mpmath.mpmathify(rhs)
    res = abs(lhs - rhs)
    scale = max(mpf(1), abs(lhs), abs(rhs))
    rel = res / max(abs(lhs), abs(rhs)) if max(abs(lhs), abs(rhs)) > 0 else res
    return res, rel, bool(res <= tol * scale)


# ----------------------------------------------------------------------
# shared building blocks


def _v(report):
    return report.value


def P(exps: dict, power: int = 0, coeff=1) -> Integrand:
    return Integrand.product(exps, power, coeff)


IKK = P({"I0": 1, "K0": 2})
IKKK = P({"I0": 1, "K0": 3})
KKK = P({"K0": 3})
KKKK = P({"K0": 4})
IIKK = P({"I0": 2, "K0": 2})
J3 = P({"J0": 3})
J4 = P({"J0": 4})
JJY = P({"J0": 2, "Y0": 1})
JJYY = P({"J0": 2, "Y0": 2})
JJJY = P({"J0": 3, "Y0": 1})

I = mpc(0, 1)


def _pi():
    return +mpmath.pi


def _bigC(ctx):
    """Gamma(1/15)Gamma(2/15)Gamma(4/15)Gamma(8/15)/(240 sqrt5 pi^2)."""
    with mpmath.workprec(ctx.work_bits + 20):
        g = gamma(Fraction(1, 15), ctx) * gamma(Fraction(2, 15), ctx) * gamma(Fraction(4, 15), ctx) * gamma(Fraction(8, 15), ctx)
        return g / (240 * mpmath.sqrt(5) * mpmath.pi**2)


def _gamma_product(ctx):
    return _bigC(ctx) * mpmath.pi**2


def _eta_ratio3(z, ctx):
    """[2 eta(2z) eta(6z)/(eta(z) eta(3z))]^3."""
    with mpmath.workprec(ctx.work_bits + 20):
        e = lambda m: M.eta(m * z, ctx)
        return (2 * e(2) * e(6) / (e(1) * e(3))) ** 3


def _positive(v, ctx, what: str):
    v = mpmath.mpmathify(v)
    if abs(v.imag) > abs(v) * mpf(10) ** (-ctx.digits + 5) or v.real <= 0:
        raise E.ContourError(f"{what} is not a positive real number: {mpmath.nstr(v, 10)}")
    return +v.real


def _real_abs(v, ctx, what: str):
    v = mpmath.mpmathify(v)
    if abs(v.imag) > abs(v) * mpf(10) ** (-ctx.digits + 5):
        raise E.ContourError(f"{what} is not real: {mpmath.nstr(v, 10)}")
    return abs(v.real)


def x63(z, ctx, pref):
    """|pref [...]^3| = 8 sqrt|X63|; the prefactor only certifies the value is real."""
    return _real_abs(pref * _eta_ratio3(z, ctx), ctx, "modular argument")


def x_theta(w, ctx, pref):
    with mpmath.workprec(ctx.work_bits + 20):
        v = pref * (M.theta(1 - 1 / (3 * w), ctx) / M.theta(3 - 1 / w, ctx)) ** 2
    return _positive(v, ctx, "theta argument")


def eta_q(w, ctx):
    """eta(3w) eta(2w)^6 / (eta(w)^3 eta(6w)^2)."""
    with mpmath.workprec(ctx.work_bits + 20):
        e = lambda m: M.eta(m * w, ctx)
        return e(3) * e(2) ** 6 / (e(1) ** 3 * e(6) ** 2)


def z63(z, ctx):
    return M.eval_form(M.Z63, z, ctx)


def half_line(y):
    return mpc(mpf(1) / 2, to_mpf(y))


def axis(y):
    return mpc(0, to_mpf(y))


def arc3(phi):
    """1/2 + (i/(2 sqrt3)) exp(i phi), phi in units of pi."""
    return mpf(1) / 2 + I / (2 * mpmath.sqrt(3)) * mpmath.expjpi(to_mpf(phi))


def arc2(psi):
    """(1 + exp(i psi))/6, psi in units of pi."""
    return (1 + mpmath.expjpi(to_mpf(psi))) / 6


def shifted_line(y):
    return mpc(-mpf(1) / 2, to_mpf(y))


Y_SAMPLES = (Fraction(3, 10), Fraction(3, 5), Fraction(1))
PHI_SAMPLES = (Fraction(1, 12), Fraction(1, 6), Fraction(1, 4))
PSI_SAMPLES = (Fraction(1, 2), Fraction(2, 3), Fraction(5, 6))


def _ei(form, poly, path, center=Fraction(0)):
    return lambda c: E.eichler(EichlerSpec(form, poly, path, center), c)


def vline(x0=0, y_from=None, y_from_sq=None):
    return ContourPath.vertical(x0, y_from, y_from_sq)


CM_TOP = Fraction(5, 12)  # |Im z*|^2


# ----------------------------------------------------------------------
# registry


def _records() -> list:
    pi = _pi
    R: list = []

    def add(id, suite, description, anchor, lhs, rhs, cls="tight", independence="", **kw):
        R.append(IdentityRecord(id, suite, description, anchor, lhs, rhs, cls, independence, **kw))

    # --- S: sum rules and near-integer sequence
    for m, n, br in ((3, 1, "even"), (5, 1, "even"), (4, 1, "odd"), (3, 0, "odd")):
        add(
            f"S_sumrule_{m}{n}_{br}",
            "S",
            f"({br} combination) int of (pi I0 +- i K0)^{m} K0^{m} t^{n} vanishes",
            f"the {'real' if br == 'even' else 'imaginary'} part of (pi I0 + i K0)^m K0^m t^n integrates to zero",
            lambda c, m=m, n=n, br=br: sum_rule(m, n, br + "_combination", c),
            lambda c: mpf(0),
            independence="quadrature against an exact zero",
        )
    for m in (1, 2, 3):
        for n in (1, 2):
            add(
                f"S_bm_sequence_{m}{n}",
                "S",
                f"normalized moment sequence at (m, n) = ({m}, {n}) is an integer",
                "the normalized imaginary-part moments are positive integers",
                lambda c, m=m, n=n: bm_sequence(m, n, c),
                lambda c, m=m, n=n: mpmath.nint(bm_sequence(m, n, c)),
                fixed_tolerance=mpf(10) ** -20,
                independence="distance to the nearest integer",
            )
    add(
        "S_zeta3_routes",
        "S",
        "zeta(3) from two accelerated series",
        "zeta(3) enters the value of the E function at the cusp",
        lambda c: zeta3_routes(c)[0],
        lambda c: zeta3_routes(c)[1],
        independence="two unrelated series",
    )

    # --- B: Bologna constant, matrix, small closed forms, Table 1
    add(
        "B1_bologna",
        "B",
        "IKM(1,4;1) equals the Gamma product",
        "int I0 K0^4 t dt = Gamma(1/15)Gamma(2/15)Gamma(4/15)Gamma(8/15)/(240 sqrt5)",
        lambda c: _v(ikm(1, 4, 1, c)),
        _gamma_product,
        independence="quadrature against Gamma values",
    )
    add(
        "B2_bologna_jym",
        "B",
        "IKM(1,4;1) equals pi^4/30 JYM(5,0;1)",
        "int I0 K0^4 t dt = (pi^4/30) int J0^5 x dx",
        lambda c: _v(ikm(1, 4, 1, c)),
        lambda c: pi() ** 4 / 30 * _v(jym(5, 0, 1, c)),
        cls="loose",
        independence="non-oscillatory against oscillatory quadrature",
    )
    mat = {
        (1, 4, 1): lambda C, p: p**2 * C,
        (1, 4, 3): lambda C, p: p**2 * (mpf(2) / 15) ** 2 * (13 * C - 1 / (10 * C)),
        (1, 4, 5): lambda C, p: p**2 * (mpf(4) / 15) ** 3 * (43 * C - 19 / (40 * C)),
        (2, 3, 1): lambda C, p: mpmath.sqrt(15) * p / 2 * C,
        (2, 3, 3): lambda C, p: mpmath.sqrt(15) * p / 2 * (mpf(2) / 15) ** 2 * (13 * C + 1 / (10 * C)),
        (2, 3, 5): lambda C, p: mpmath.sqrt(15) * p / 2 * (mpf(4) / 15) ** 3 * (43 * C + 19 / (40 * C)),
    }
    for (a, b, n), fn in mat.items():
        if (a, b, n) == (1, 4, 1):
            continue
        add(
            f"B_closed_{a}{b}{n}",
            "B",
            f"IKM({a},{b};{n}) in terms of the Bologna constant C",
            f"IKM({a},{b};{n}) is a rational combination of C and 1/C times {'pi^2' if a == 1 else 'sqrt15 pi/2'}",
            lambda c, a=a, b=b, n=n: _v(ikm(a, b, n, c)),
            lambda c, fn=fn: _with(c, lambda: fn(_bigC(c), mpmath.pi)),
            independence="quadrature against Gamma values",
        )
    add(
        "B_determinant",
        "B",
        "det [[IKM(1,4;1), IKM(1,4;3)], [IKM(2,3;1), IKM(2,3;3)]]",
        "the 2x2 moment determinant equals 2 pi^3/sqrt(3^3 5^5)",
        lambda c: _v(ikm(1, 4, 1, c)) * _v(ikm(2, 3, 3, c)) - _v(ikm(2, 3, 1, c)) * _v(ikm(1, 4, 3, c)),
        lambda c: 2 * pi() ** 3 / mpmath.sqrt(mpf(3) ** 3 * mpf(5) ** 5),
        independence="quadratures against a closed form",
    )
    add(
        "B_ikm033",
        "B",
        "IKM(0,3;3) = 2[2 IKM(0,3;1) - 1]/3",
        "int K0^3 t^3 dt = (2/3)(2 int K0^3 t dt - 1)",
        lambda c: _v(ikm(0, 3, 3, c)),
        lambda c: 2 * (2 * _v(ikm(0, 3, 1, c)) - 1) / 3,
        independence="two quadratures",
    )
    add(
        "B_i1k04t2",
        "B",
        "int I1 K0^4 t^2 dt = (2/5)[2 IKM(0,3;1) - IKM(1,4;1)]",
        "the x-derivative of the I-transform of K0^4 at x = 1",
        lambda c: _v(moment(P({"I1": 1, "K0": 4}, 2), c)),
        lambda c: mpf(2) / 5 * (2 * _v(ikm(0, 3, 1, c)) - _v(ikm(1, 4, 1, c))),
        independence="three quadratures",
    )
    for name in ("X63", "Z63"):
        for k in range(5):
            add(
                f"B_table1_{name}_{k}",
                "B",
                f"derivative {k} of {name} at the CM point 1/2 + i sqrt5/(2 sqrt3)",
                f"{name}^({k}) at the CM point in closed form",
                lambda c, name=name, k=k: M.cm_derivative_table(None, 4, c)[(name, k)],
                lambda c, name=name, k=k: M.table1_closed_forms(c)[(name, k)],
                independence="Cauchy-circle differentiation of eta products against closed forms in c",
            )

    # --- L: critical L-values
    L = E.lvalue
    F46, F66 = M.F46, M.F66

    add("L1_sunrise4_ikm151_331", "L", "3/pi^2 IKM(1,5;1) = IKM(3,3;1)",
        "4-loop sunrise: 3/pi^2 IKM(1,5;1) = IKM(3,3;1)",
        lambda c: 3 / pi() ** 2 * _v(ikm(1, 5, 1, c)), lambda c: _v(ikm(3, 3, 1, c)), independence="two quadratures")
    add("L2_ikm331_L2", "L", "IKM(3,3;1) = (3/2) L(f46,2)", "IKM(3,3;1) = (3/2) L(f46, 2)",
        lambda c: _v(ikm(3, 3, 1, c)), lambda c: mpf(3) / 2 * L(F46, 2, c), independence="quadrature against q-series")
    add("L3_ikm331_eichler", "L", "IKM(3,3;1) = -6 pi^2 int_0^{i inf} f46(z) z dz",
        "IKM(3,3;1) = -6 pi^2 int_0^{i inf} f46 z dz",
        lambda c: _v(ikm(3, 3, 1, c)), lambda c: -6 * pi() ** 2 * _ei(F46, [0, 1], vline(0))(c), independence="quadrature against q-series")
    add("L4_ikm241_L1", "L", "IKM(2,4;1) = (pi^2/2) L(f46,1)", "IKM(2,4;1) = (pi^2/2) L(f46, 1)",
        lambda c: _v(ikm(2, 4, 1, c)), lambda c: pi() ** 2 / 2 * L(F46, 1, c), independence="quadrature against q-series")
    add("L5_ikm241_L3", "L", "IKM(2,4;1) = (3/2) L(f46,3)", "IKM(2,4;1) = (3/2) L(f46, 3)",
        lambda c: _v(ikm(2, 4, 1, c)), lambda c: mpf(3) / 2 * L(F46, 3, c), independence="quadrature against q-series")
    add("L6_ikm241_eichler_z2", "L", "IKM(2,4;1) = 6 pi^3 i int_0^{i inf} f46 z^2 dz", "IKM(2,4;1) = 6 pi^3 i int f46 z^2",
        lambda c: _v(ikm(2, 4, 1, c)), lambda c: 6 * pi() ** 3 * I * _ei(F46, [0, 0, 1], vline(0))(c), independence="quadrature against q-series")
    add("L7_ikm441_L3", "L", "IKM(4,4;1) = L(f66,3)", "IKM(4,4;1) = L(f66, 3)",
        lambda c: _v(ikm(4, 4, 1, c)), lambda c: L(F66, 3, c), independence="quadrature against q-series")
    add("L8_sumrule_441_261", "L", "9 pi^2 IKM(4,4;1) - 14 IKM(2,6;1) = 0", "9 pi^2 IKM(4,4;1) - 14 IKM(2,6;1) = 0",
        lambda c: 9 * pi() ** 2 * _v(ikm(4, 4, 1, c)), lambda c: 14 * _v(ikm(2, 6, 1, c)), independence="two quadratures")
    add("L9_sunrise6_ikm171_351", "L", "IKM(1,7;1)/pi^2 = IKM(3,5;1)", "6-loop sunrise: IKM(1,7;1) = pi^2 IKM(3,5;1)",
        lambda c: _v(ikm(1, 7, 1, c)) / pi() ** 2, lambda c: _v(ikm(3, 5, 1, c)), independence="two quadratures")
    add("L10_ikm351_L4", "L", "IKM(3,5;1) = (9/4) L(f66,4)", "IKM(3,5;1) = (9/4) L(f66, 4)",
        lambda c: _v(ikm(3, 5, 1, c)), lambda c: mpf(9) / 4 * L(F66, 4, c), independence="quadrature against q-series")
    add("L11_ikm261_L5", "L", "IKM(2,6;1) = (27/4) L(f66,5)", "IKM(2,6;1) = (27/4) L(f66, 5)",
        lambda c: _v(ikm(2, 6, 1, c)), lambda c: mpf(27) / 4 * L(F66, 5, c), independence="quadrature against q-series")
    add("L12_ratio_4_7", "L", "L(f66,5) / (zeta(2) L(f66,3)) = 4/7", "L(f66,5)/(zeta(2) L(f66,3)) = 4/7",
        lambda c: L(F66, 5, c) / (zeta_int(2, c) * L(F66, 3, c)), lambda c: mpf(4) / 7, independence="q-series against a rational")
    add("L13_bm_determinant", "L", "IKM(1,5;1) IKM(2,4;3) - IKM(2,4;1) IKM(1,5;3) = pi^4/(2^6 3^2)",
        "the 2x2 determinant of IKM(1,5;1), IKM(1,5;3), IKM(2,4;1), IKM(2,4;3) is pi^4/576",
        lambda c: _v(ikm(1, 5, 1, c)) * _v(ikm(2, 4, 3, c)) - _v(ikm(2, 4, 1, c)) * _v(ikm(1, 5, 3, c)),
        lambda c: pi() ** 4 / 576, independence="quadratures against a closed form")
    add("L14_sunrise6_eichler", "L", "IKM(1,7;1) = -pi^6 int_0^{i inf} f66 z dz", "IKM(1,7;1) = -pi^6 int f66 z dz",
        lambda c: _v(ikm(1, 7, 1, c)), lambda c: -pi() ** 6 * _ei(F66, [0, 1], vline(0))(c), independence="quadrature against q-series")
    add("L15_ikm261_eichler", "L", "IKM(2,6;1) = (pi^5/(4i)) int_0^{i inf} f66 dz", "IKM(2,6;1) = (pi^5/(4i)) int f66",
        lambda c: _v(ikm(2, 6, 1, c)), lambda c: pi() ** 5 / (4 * I) * _ei(F66, [1], vline(0))(c), independence="quadrature against q-series")
    for form, s in ((F46, 2), (F46, 3), (F66, 3), (F66, 5)):
        add(f"L_explicit_{form.name}_{s}", "L", f"closed exponential sum for L({form.name},{s})",
            f"L({form.name},{s}) as a single exponentially weighted sum",
            lambda c, form=form, s=s: L(form, s, c, route="explicit"), lambda c, form=form, s=s: L(form, s, c),
            independence="one sum against the Fricke-split Eichler integral")
    for form, s in ((F46, 2), (F66, 4)):
        add(f"L_quadrature_{form.name}_{s}", "L", f"L({form.name},{s}) by q-series and by quadrature",
            f"Mellin transform of {form.name} along the imaginary axis",
            lambda c, form=form, s=s: L(form, s, c, route="quadrature"), lambda c, form=form, s=s: L(form, s, c),
            independence="tanh-sinh on eta products against q-series")

    # --- E: Eichler integrals and the E family
    zstar = lambda: mpc(mpf(1) / 2, mpmath.sqrt(mpf(5) / 12))
    add("E1_id240", "E", "240 int_{z*}^{i inf} sigma4(z)(2z - 1) dz = 1", "240 int from the CM point of sigma4 (2z - 1) equals 1",
        lambda c: 240 * _ei(M.SIGMA4, [-1, 2], vline(Fraction(1, 2), y_from_sq=CM_TOP))(c), lambda c: mpf(1),
        independence="q-series against an integer")
    def cal(k):
        return lambda c: E.eichler_E(k, zstar(), c)
    add("E2_calE_value", "E", "E(z*) = pi^3/(8 sqrt15)", "E at the CM point equals pi^3/(8 sqrt15)",
        cal(0), lambda c: pi() ** 3 / (8 * mpmath.sqrt(15)), independence="q-series and zeta(3) against a closed form")
    add("E3_calE1_value", "E", "E'(z*) = pi^3/(20i) - 3 pi IKM(0,3;1)/(2 sqrt5 i)", "E' at the CM point",
        cal(1), lambda c: pi() ** 3 / (20 * I) - 3 * pi() * _v(ikm(0, 3, 1, c)) / (2 * mpmath.sqrt(5) * I),
        independence="q-series against quadrature")
    add("E4_calE2_value", "E", "E''(z*) = (3 sqrt3 pi/5) IKM(0,3;1)", "E'' at the CM point",
        cal(2), lambda c: 3 * mpmath.sqrt(3) * pi() / 5 * _v(ikm(0, 3, 1, c)), independence="q-series against quadrature")
    add("E5_calE3_value", "E", "E'''(z*) = 27 i sqrt5 pi c^2", "E''' at the CM point",
        cal(3), lambda c: 27 * I * mpmath.sqrt(5) * pi() * M.bologna_c(c) ** 2, independence="eta products against Gamma values")
    add("E6_calE4_value", "E", "E''''(z*) = -108 sqrt3 pi c^2 (3c + 1)", "E'''' at the CM point",
        cal(4), lambda c: _with(c, lambda: -108 * mpmath.sqrt(3) * mpmath.pi * M.bologna_c(c) ** 2 * (3 * M.bologna_c(c) + 1)),
        independence="Cauchy differentiation against Gamma values")
    add("E7_ikm241_eichler_cusp0", "E", "IKM(2,4;1) = (pi^3/i) int_0^{i inf} f46 dz", "IKM(2,4;1) = (pi^3/i) int f46",
        lambda c: _v(ikm(2, 4, 1, c)), lambda c: pi() ** 3 / I * _ei(F46, [1], vline(0))(c), independence="quadrature against q-series")
    add("E8_ikm241_eichler_half", "E", "IKM(2,4;1) = (pi^3 i/3) int_{-1/2}^{-1/2+i inf} f46 dw",
        "IKM(2,4;1) as an Eichler integral along Re w = -1/2",
        lambda c: _v(ikm(2, 4, 1, c)), lambda c: pi() ** 3 * I / 3 * _ei(F46, [1], vline(Fraction(-1, 2)))(c),
        independence="quadrature against q-series and cusp quadrature")
    add("E9_jym601_eichler", "E", "JYM(6,0;1) = (12/(pi i)) int_0 f46 - (6/(pi i)) int_{1/2} f46",
        "JYM(6,0;1) from Eichler integrals along Re z = 0 and Re z = 1/2",
        lambda c: _v(jym(6, 0, 1, c)),
        lambda c: 12 / (pi() * I) * _ei(F46, [1], vline(0))(c) - 6 / (pi() * I) * _ei(F46, [1], vline(Fraction(1, 2)))(c),
        cls="loose", independence="oscillatory quadrature against q-series")
    add("E10_ikm151_eichler", "E", "IKM(1,5;1) = (pi^4/2) int_{-1/2} f46 (1 + 2w) dw", "IKM(1,5;1) as an Eichler integral along Re w = -1/2",
        lambda c: _v(ikm(1, 5, 1, c)), lambda c: pi() ** 4 / 2 * _ei(F46, [1, 2], vline(Fraction(-1, 2)))(c),
        independence="quadrature against q-series")
    add("E11_jym511_eichler", "E", "JYM(5,1;1) = (8/pi) int_0 f46 w + (4/pi) int_{1/2} f46 (1 - 2z)",
        "JYM(5,1;1) from Eichler integrals along Re z = 0 and Re z = 1/2",
        lambda c: _v(jym(5, 1, 1, c)),
        lambda c: 8 / pi() * _ei(F46, [0, 1], vline(0))(c) + 4 / pi() * _ei(F46, [1, -2], vline(Fraction(1, 2)))(c),
        cls="loose", independence="oscillatory quadrature against q-series")
    add("E12_broadhurst_G_243", "E", "IKM(2,4;3) = (pi^3/i) int_{1/2} G/96", "IKM(2,4;3) as an integral of G/96 along Re z = 1/2",
        lambda c: _v(ikm(2, 4, 3, c)), lambda c: E.broadhurst_G(0, c), independence="quadrature against q-series")
    add("E13_broadhurst_G_153", "E", "IKM(1,5;3) = -3 pi^4 int_{1/2} (G/96)(z - 1/2)", "IKM(1,5;3) as an integral of G/96 (z - 1/2)",
        lambda c: _v(ikm(1, 5, 3, c)), lambda c: E.broadhurst_G(1, c), independence="quadrature against q-series")
    add("E14_jym801_L", "E", "JYM(8,0;1) = (70/(9 pi i)) int_0 f66", "JYM(8,0;1) as an Eichler integral of f66",
        lambda c: _v(jym(8, 0, 1, c)), lambda c: 70 / (9 * pi() * I) * _ei(F66, [1], vline(0))(c),
        cls="loose", independence="oscillatory quadrature against q-series")
    add("E15_jym801_z2_z4", "E", "-(80/(pi i)) int f66 z^2 = (280/(pi i)) int f66 z^4", "two moments of f66 giving JYM(8,0;1)",
        lambda c: -80 / (pi() * I) * _ei(F66, [0, 0, 1], vline(0))(c), lambda c: 280 / (pi() * I) * _ei(F66, [0, 0, 0, 0, 1], vline(0))(c),
        independence="different Fricke-folded polynomials")
    add("E16_jym801_z0_z2", "E", "(70/(9 pi i)) int f66 = -(80/(pi i)) int f66 z^2", "two moments of f66 giving JYM(8,0;1)",
        lambda c: 70 / (9 * pi() * I) * _ei(F66, [1], vline(0))(c), lambda c: -80 / (pi() * I) * _ei(F66, [0, 0, 1], vline(0))(c),
        independence="different Fricke-folded polynomials")
    add("E17_z4_plus_2_7_z2", "E", "int_0^{i inf} f66 (z^4 + (2/7) z^2) dz = 0", "the z^4 and z^2 moments of f66 are proportional",
        lambda c: _ei(F66, [0, 0, mpf(2) / 7, 0, 1], vline(0))(c), lambda c: mpf(0), independence="q-series against zero")
    w3_low = ContourPath.geodesic_w3(Fraction(1, 3), 0)
    w2_low = ContourPath.geodesic_w2(1, Fraction(1, 3))
    add("E18_2arc_sum0", "E", "int_{1/2+i/(2sqrt3)} f66 (1 - 2z)^2 + int_arc f66 (1 - 4z + 8z^2) = 0",
        "a vertical half-line and a geodesic arc cancel",
        lambda c: _ei(F66, [1, -4, 4], vline(Fraction(1, 2), y_from_sq=Fraction(1, 12)))(c) + _ei(F66, [1, -4, 8], w3_low)(c),
        lambda c: mpf(0), independence="q-series against Gauss-Legendre on the arc")
    add("E19_jym801_arcs", "E", "JYM(8,0;1) from a vertical half-line and a geodesic arc",
        "int J0^8 x dx = (36/(pi i)) int f66 (1-2z)^2 + (4/(pi i)) int_arc f66 (1 - 6z + 12z^2)^2",
        lambda c: _v(jym(8, 0, 1, c)),
        lambda c: 36 / (pi() * I) * _ei(F66, [1, -4, 4], vline(Fraction(1, 2), y_from_sq=Fraction(1, 12)))(c)
        + 4 / (pi() * I) * _ei(F66, _square([1, -6, 12]), w3_low)(c),
        cls="loose", independence="oscillatory quadrature against q-series and arc quadrature")
    add("E20_fricke_reflection", "E", "6 pi^3 i int_{i/sqrt6}^{i inf} f46 z^2 = -pi^3 i int_0^{i/sqrt6} f46",
        "the Fricke involution exchanges the two halves of the imaginary axis",
        lambda c: 6 * pi() ** 3 * I * _ei(F46, [0, 0, 1], vline(0, y_from_sq=Fraction(1, 6)))(c),
        lambda c: -pi() ** 3 * I * (_ei(F46, [1], vline(0))(c) - _ei(F46, [1], vline(0, y_from_sq=Fraction(1, 6)))(c)),
        independence="termwise sums with different start points")

    # --- H: modular parametrizations
    def hrec(name, pts, where, anchor, lhs_of, rhs_of, cls="loose"):
        for j, p in enumerate(pts):
            add(f"H_{name}_{j + 1}", "H", f"{name} at {where} = {p}", anchor,
                lambda c, p=p: lhs_of(p, c), lambda c, p=p: rhs_of(p, c), cls=cls,
                independence="Bessel quadrature against eta products")

    hrec("IKKK_Hankel", Y_SAMPLES, "z = iy, y", "int J0(x t) I0 K0^3 t dt = (pi^2/16) Z63 with x = [2 eta2 eta6/(eta1 eta3)]^3",
         lambda y, c: transform("J", x63(axis(y), c, 1), IKKK, c), lambda y, c: _pi() ** 2 / 16 * z63(axis(y), c))
    hrec("IKKK_I", Y_SAMPLES, "z = 1/2 + iy, y", "int I0(x t) I0 K0^3 t dt = (pi^2/16) Z63 with x = (1/i)[...]^3",
         lambda y, c: transform("I", x63(half_line(y), c, -I), IKKK, c), lambda y, c: _pi() ** 2 / 16 * z63(half_line(y), c))
    hrec("JJJJ_Hankel", Y_SAMPLES, "z = 1/2 + iy, y", "int J0(x t) J0^4 t dt = 3(2z - 1)/(4 pi i) Z63 with x = (1/i)[...]^3",
         lambda y, c: transform("J", x63(half_line(y), c, -I), J4, c),
         lambda y, c: 3 * (2 * half_line(y) - 1) / (4 * _pi() * I) * z63(half_line(y), c))
    hrec("JJJJ_Hankel_high", PHI_SAMPLES, "arc phi/pi", "int J0(x t) J0^4 t dt = (1 - 6z + 12z^2)/(4 pi i) Z63 for x in (2, 4)",
         lambda p, c: transform("J", x63(arc3(p), c, I), J4, c),
         lambda p, c: (1 - 6 * arc3(p) + 12 * arc3(p) ** 2) / (4 * _pi() * I) * z63(arc3(p), c))
    hrec("JJYY_Hankel_S", Y_SAMPLES, "z = 1/2 + iy, y", "int J0(x t) J0^2 Y0^2 t dt = (2z - 1)/(4 pi i) Z63",
         lambda y, c: transform("J", x63(half_line(y), c, I), JJYY, c),
         lambda y, c: (2 * half_line(y) - 1) / (4 * _pi() * I) * z63(half_line(y), c))
    hrec("JJYY_Hankel_M", PHI_SAMPLES, "arc phi/pi", "int J0(x t) J0^2 Y0^2 t dt = (2z - 1)/(4 pi i) Z63 on the arc",
         lambda p, c: transform("J", x63(arc3(p), c, I), JJYY, c),
         lambda p, c: (2 * arc3(p) - 1) / (4 * _pi() * I) * z63(arc3(p), c))
    hrec("JJYY_Hankel_L", PSI_SAMPLES, "arc psi/pi", "int J0(x t) J0^2 Y0^2 t dt = -z(1 - 3z)/(pi i) Z63 for x >= 4",
         lambda p, c: transform("J", x63(arc2(p), c, I), JJYY, c),
         lambda p, c: -arc2(p) * (1 - 3 * arc2(p)) / (_pi() * I) * z63(arc2(p), c))
    hrec("J3Y_Hankel_S", Y_SAMPLES, "z = 1/2 + iy, y", "int J0(x t) J0^3 Y0 t dt = -Z63/(4 pi) for x in (0, 2)",
         lambda y, c: transform("J", x63(half_line(y), c, I), JJJY, c), lambda y, c: -z63(half_line(y), c) / (4 * _pi()))
    hrec("J3Y_Hankel_M", PHI_SAMPLES, "arc phi/pi", "int J0(x t) J0^3 Y0 t dt = (1 - 6z + 6z^2) Z63/(4 pi) for x in [2, 4)",
         lambda p, c: transform("J", x63(arc3(p), c, I), JJJY, c),
         lambda p, c: (1 - 6 * arc3(p) + 6 * arc3(p) ** 2) * z63(arc3(p), c) / (4 * _pi()))
    hrec("J3Y_Hankel_L", PSI_SAMPLES, "arc psi/pi", "int J0(x t) J0^3 Y0 t dt = -3z^2 Z63/(2 pi) for x >= 4",
         lambda p, c: transform("J", x63(arc2(p), c, I), JJJY, c),
         lambda p, c: -3 * arc2(p) ** 2 * z63(arc2(p), c) / (2 * _pi()))
    hrec("JJJJ_vanish", (Fraction(9, 2), Fraction(5), Fraction(6)), "x", "int J0(x t) J0^4 t dt = 0 for x >= 4",
         lambda x, c: transform("J", x, J4, c), lambda x, c: mpf(0))
    hrec("p3_support", (Fraction(7, 2), Fraction(4), Fraction(5)), "x", "int J0(x t) J0^3 t dt = 0 for x > 3",
         lambda x, c: transform("J", x, J3, c), lambda x, c: mpf(0))
    hrec("IKKKK_Eichler", Y_SAMPLES, "z = 1/2 + iy, y", "int I0(8 sqrt(-X63) t) K0^4 t dt = Z63 E(z)",
         lambda y, c: transform("I", 8 * mpmath.sqrt(_positive(-M.eval_form(M.X63, half_line(y), c), c, "-X63")), KKKK, c),
         lambda y, c: z63(half_line(y), c) * E.eichler_E(0, half_line(y), c))
    hrec("IKKKK_KIKKK", Y_SAMPLES, "z = 1/2 + iy, y", "int I0(x t) K0^4 t dt + 4 int K0(x t) I0 K0^3 t dt = pi^3 (2z - 1)/(8i) Z63",
         lambda y, c: transform("I", x63(half_line(y), c, I), KKKK, c) + 4 * transform("K", x63(half_line(y), c, I), IKKK, c),
         lambda y, c: _pi() ** 3 * (2 * half_line(y) - 1) / (8 * I) * z63(half_line(y), c))
    hrec("JKKKK_YIKKK", Y_SAMPLES, "z = iy, y", "int J0(x t) K0^4 t dt - 2 pi int Y0(x t) I0 K0^3 t dt = pi^3 z/(4i) Z63",
         lambda y, c: transform("J", x63(axis(y), c, 1), KKKK, c) - 2 * _pi() * transform("Y", x63(axis(y), c, 1), IKKK, c),
         lambda y, c: _pi() ** 3 * axis(y) / (4 * I) * z63(axis(y), c))
    hrec("JIIKK", Y_SAMPLES, "z = iy, y", "int J0(x t) I0^2 K0^2 t dt = pi z/(4i) Z63",
         lambda y, c: transform("J", x63(axis(y), c, 1), IIKK, c), lambda y, c: _pi() * axis(y) / (4 * I) * z63(axis(y), c))
    hrec("IKK_Hankel_mod", Y_SAMPLES, "w = -1/2 + iy, y", "int J0(x t) I0 K0^2 t dt = pi/(3 sqrt3) eta-quotient, x = i[theta/theta]^2",
         lambda y, c: transform("J", x_theta(shifted_line(y), c, I), IKK, c),
         lambda y, c: _pi() / (3 * mpmath.sqrt(3)) * eta_q(shifted_line(y), c))
    hrec("JIKK_2F1", (Fraction(1, 2), Fraction(1), Fraction(2)), "x", "int J0(x t) I0 K0^2 t dt = pi/(sqrt3 (3 + x^2)) 2F1(1/3, 2/3; 1; x^4 (9 + x^2)/(3 + x^2)^3)",
         lambda x, c: transform("J", x, IKK, c),
         lambda x, c: _pi() / (mpmath.sqrt(3) * (3 + to_mpf(x) ** 2))
         * hyp_pfq([Fraction(1, 3), Fraction(2, 3)], [1], to_mpf(x) ** 4 * (9 + to_mpf(x) ** 2) / (3 + to_mpf(x) ** 2) ** 3, c))
    hrec("p3_small", Y_SAMPLES, "w = iy, y", "int J0(x t) J0^3 t dt = 2/(sqrt3 pi) eta-quotient for x in (0, 1)",
         lambda y, c: transform("J", x_theta(axis(y), c, 1), J3, c), lambda y, c: 2 / (mpmath.sqrt(3) * _pi()) * eta_q(axis(y), c))
    hrec("p3_medium", PSI_SAMPLES, "w = (1 + exp(i phi))/6, phi/pi", "int J0(x t) J0^3 t dt = 2(1 - 3w)/(sqrt3 pi) eta-quotient for x in (1, 3)",
         lambda p, c: transform("J", x_theta(arc2(p), c, 1), J3, c),
         lambda p, c: 2 * (1 - 3 * arc2(p)) / (mpmath.sqrt(3) * _pi()) * eta_q(arc2(p), c))
    hrec("JKKK_YIKK", Y_SAMPLES, "w = -1/2 + iy, y", "int J0(x t) K0^3 t dt - (3 pi/2) int Y0(x t) I0 K0^2 t dt = pi^2 (2w + 1)/(2 sqrt3 i) eta-quotient",
         lambda y, c: transform("J", x_theta(shifted_line(y), c, I), KKK, c) - 3 * _pi() / 2 * transform("Y", x_theta(shifted_line(y), c, I), IKK, c),
         lambda y, c: _pi() ** 2 * (2 * shifted_line(y) + 1) / (2 * mpmath.sqrt(3) * I) * eta_q(shifted_line(y), c))
    hrec("IKKK_KIKK", Y_SAMPLES, "w = iy, y", "int I0(x t) K0^3 t dt + 3 int K0(x t) I0 K0^2 t dt = pi^2 w/(sqrt3 i) eta-quotient",
         lambda y, c: transform("I", x_theta(axis(y), c, 1), KKK, c) + 3 * transform("K", x_theta(axis(y), c, 1), IKK, c),
         lambda y, c: _pi() ** 2 * axis(y) / (mpmath.sqrt(3) * I) * eta_q(axis(y), c))
    hrec("JJJY_YJJJ", Y_SAMPLES, "w = iy, y", "3 int J0(x t) J0^2 Y0 t dt + int Y0(x t) J0^3 t dt = -4w/(sqrt3 pi i) eta-quotient",
         lambda y, c: 3 * transform("J", x_theta(axis(y), c, 1), JJY, c) + transform("Y", x_theta(axis(y), c, 1), J3, c),
         lambda y, c: -4 * axis(y) / (mpmath.sqrt(3) * _pi() * I) * eta_q(axis(y), c))

    # --- W: Wick rotations and Parseval fusions
    wick_points = {"IIKK_JJJJ": Fraction(1, 2), "IKKK_JY": Fraction(1), "KIKK_JY": Fraction(2), "JJJJ_JJYY": Fraction(1), "IIKKK_JJJJY": Fraction(1)}
    from .moments import WICK_IDENTITIES

    for name in WICK_IDENTITIES:
        xs = wick_points.get(name)
        add(f"W_{name}", "W", f"Wick rotation {name}" + (f" at x = {xs}" if xs is not None else ""),
            "rotating the contour to the imaginary axis turns I0, K0 into J0, Y0 combinations",
            lambda c, name=name, xs=xs: wick_check(name, xs, c)[0], lambda c, name=name, xs=xs: wick_check(name, xs, c)[1],
            cls="loose", independence="non-oscillatory against oscillatory quadrature")
    osc = dict(fixed_digits=OSCILLATORY_DIGITS, fixed_tolerance=OSCILLATORY_TOL)
    add("W_parseval_ikm241", "W", "int (J-transform of I0 K0^2)^2 x dx = IKM(2,4;1)", "Parseval for Hankel transforms applied to I0 K0^2",
        lambda c: _v(parseval_fuse(IKK, IKK, c)), lambda c: _v(ikm(2, 4, 1, c)), cls="loose",
        independence="nested transform quadrature against direct quadrature", **osc)
    add("W_parseval_ikm261", "W", "int (J-transform of I0 K0^3)^2 x dx = IKM(2,6;1)", "Parseval for Hankel transforms applied to I0 K0^3",
        lambda c: _v(parseval_fuse(IKKK, IKKK, c)), lambda c: _v(ikm(2, 6, 1, c)), cls="loose",
        independence="nested transform quadrature against direct quadrature", **osc)
    add("W_parseval_jym601", "W", "int (J-transform of J0^3)^2 x dx = JYM(6,0;1)", "Parseval for Hankel transforms applied to J0^3",
        lambda c: _v(parseval_fuse(J3, J3, c)), lambda c: _v(jym(6, 0, 1, c)), cls="loose",
        independence="nested transform quadrature against direct quadrature", **osc)
    add("W_hilbert_cancel", "W", "int (J-transform)(Y-transform) of I0 K0^2 vanishes", "the Hilbert pair of the I0 K0^2 transform integrates to zero",
        lambda c: _v(parseval_fuse(IKK, IKK, c, kernels=("J", "Y"))), lambda c: mpf(0), cls="loose",
        independence="nested transform quadrature against zero", **osc)
    return R


def _square(p):
    out = [0] * (2 * len(p) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(p):
            out[i + j] += a * b
    return out


def _with(ctx, thunk):
    with mpmath.workprec(ctx.work_bits + 20):
        return thunk()


_REGISTRY: list | None = None


def registry() -> list:
    global _REGISTRY
    if _REGISTRY is None:
        recs = _records()
        ids = [r.id for r in recs]
        if len(set(ids)) != len(ids):
            raise RuntimeError("duplicate identity ids")
        _REGISTRY = recs
    return list(_REGISTRY)


def get(id: str) -> IdentityRecord:
    for r in registry():
        if r.id == id:
            return r
    raise KeyError(f"unknown identity {id!r}")


def run(id: str, ctx: PrecisionContext = DEFAULT_CTX, tolerance=None) -> VerificationResult:
    """Evaluate both sides of one identity.  Residual failures give pass = False."""
    rec = get(id)
    c = rec.context(ctx)
    tol = mpf(tolerance) if tolerance is not None else rec.tolerance(c)
    t0 = time.perf_counter()
    sides = []
    for label, fn in (("lhs", rec.lhs), ("rhs", rec.rhs)):
        try:
            with mpmath.workprec(c.work_bits + 20):
                sides.append(mpmath.mpmathify(fn(c)))
        except DivergenceError as exc:
            raise DivergenceError(f"{rec.id} {label}: {exc}") from exc
    lhs, rhs = sides
    with mpmath.workprec(c.work_bits + 20):
        res, rel, ok = passes(lhs, rhs, tol)
    return VerificationResult(rec.id, rec.description, rec.anchor, lhs, rhs, res, rel, tol, ok, time.perf_counter() - t0, c.digits)


def _safe_run(id: str, ctx: PrecisionContext, tolerance=None) -> VerificationResult:
    t0 = time.perf_counter()
    try:
        return run(id, ctx, tolerance)
    except Exception as exc:  # noqa: BLE001 - every failure becomes a structured result
        rec = get(id)
        return VerificationResult(rec.id, rec.description, rec.anchor, None, None, None, None, rec.tolerance(rec.context(ctx)),
                                  False, time.perf_counter() - t0, rec.context(ctx).digits, f"{type(exc).__name__}: {exc}")


def _worker(args) -> VerificationResult:
    id, digits, guard, order, tolerance = args
    mpmath.mp.dps = 15
    return _safe_run(id, PrecisionContext(digits, guard, order), tolerance)


def select(suite: str) -> list:
    if suite == "all":
        return registry()
    return [r for r in registry() if r.suite == suite or r.id == suite]


def run_suite(suite: str = "all", ctx: PrecisionContext = DEFAULT_CTX, parallelism: int = 1, tolerance_overrides: dict | None = None) -> list:
    """Run every record of a suite (or "all"); results are ordered by id."""
    recs = select(suite)
    overrides = tolerance_overrides or {}
    jobs = [(r.id, ctx.digits, ctx.series_guard, ctx.tail_order, overrides.get(r.id)) for r in recs]
    if parallelism <= 1 or len(jobs) <= 1:
        out = [_safe_run(j[0], ctx, j[4]) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            out = list(pool.map(_worker, jobs))
    return sorted(out, key=lambda r: r.id)
