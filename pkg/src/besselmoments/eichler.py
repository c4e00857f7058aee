"""Eichler integrals, the E-function family and critical L-values.

Vertical contours are integrated term by term from q-expansions: on
z = z1 + iu every term a(n) q^n (z - c)^j integrates to a finite sum of
j!/(2 pi n)^(j+1) pieces.  Segments reaching the cusp 0 are folded back
with the Fricke involution z -> -1/(6z); segments reaching another cusp
fall back to tanh-sinh on the numerically evaluated form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath import mpc, mpf

from . import modular
from .modular import F46, F66, G96, SIGMA4, ModularFormSpec, eval_form, quotient_qseries
from .quadrature import QuadratureError, adaptive_gl, tanh_sinh
from .specfun import DEFAULT_CTX, DomainError, PrecisionContext, to_mpf, zeta_int


class SplitError(ValueError):
    """A contour reaches a cusp but no transformation law is recorded for the form."""


class ContourError(ValueError):
    """The requested point is not on a supported contour."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class ContourPath:
    """A vertical half-line or a circular arc, oriented from start to end.

    vertical: z = x0 + iy for y from y_from up to infinity.  ``y_from_sq``
    holds y_from^2 exactly (so sqrt(5/12) is representable); None means the
    cusp y = 0+.
    arc: z = center + sqrt(radius_sq) exp(i pi theta), theta from theta_from
    to theta_to (multiples of pi).
    """

    kind: str
    x0: Fraction = Fraction(0)
    y_from_sq: Fraction | None = None
    center: Fraction = Fraction(0)
    radius_sq: Fraction = Fraction(0)
    theta_from: Fraction = Fraction(0)
    theta_to: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.kind not in ("vertical", "arc"):
            raise ValueError("kind must be 'vertical' or 'arc'")
        if self.kind == "vertical" and self.y_from_sq is not None and self.y_from_sq <= 0:
            raise ValueError("vertical contours must start in the upper half plane")
        if self.kind == "arc":
            if self.radius_sq <= 0:
                raise ValueError("arc radius must be positive")
            for th in (self.theta_from, self.theta_to):
                if not 0 <= th <= 1:
                    raise ValueError("arcs must stay in the closed upper half plane")

    @classmethod
    def vertical(cls, x0=0, y_from=None, y_from_sq=None) -> "ContourPath":
        if y_from is not None:
            y_from_sq = _frac(y_from) ** 2
        return cls("vertical", x0=_frac(x0), y_from_sq=None if y_from_sq is None else _frac(y_from_sq))

    @classmethod
    def geodesic_w3(cls, phi_from, phi_to) -> "ContourPath":
        """z = 1/2 + (i/(2 sqrt 3)) exp(i phi), phi given in units of pi."""
        return cls("arc", center=Fraction(1, 2), radius_sq=Fraction(1, 12), theta_from=_frac(phi_from) + Fraction(1, 2), theta_to=_frac(phi_to) + Fraction(1, 2))

    @classmethod
    def geodesic_w2(cls, psi_from, psi_to) -> "ContourPath":
        """z = (1 + exp(i psi))/6, psi given in units of pi."""
        return cls("arc", center=Fraction(1, 6), radius_sq=Fraction(1, 36), theta_from=_frac(psi_from), theta_to=_frac(psi_to))

    def start(self, ctx: PrecisionContext = DEFAULT_CTX):
        with mpmath.workprec(ctx.work_bits + 20):
            if self.kind == "vertical":
                y = mpf(0) if self.y_from_sq is None else mpmath.sqrt(to_mpf(self.y_from_sq))
                return mpc(to_mpf(self.x0), y)
            return self.point(self.theta_from)

    def point(self, theta):
        r = mpmath.sqrt(to_mpf(self.radius_sq))
        return to_mpf(self.center) + r * mpmath.expjpi(to_mpf(theta))


@dataclass(frozen=True)
class EichlerSpec:
    """form(z) * sum_k polynomial[k] (z - center)^k integrated along ``path``.

    ``center`` may be a Fraction or a complex number.
    """

    form: ModularFormSpec
    polynomial: tuple
    path: ContourPath
    center: object = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "polynomial", tuple(self.polynomial))

    @property
    def degree(self) -> int:
        d = len(self.polynomial) - 1
        while d > 0 and self.polynomial[d] == 0:
            d -= 1
        return d


def _num(c):
    if isinstance(c, Fraction):
        return to_mpf(c)
    return mpmath.mpmathify(c)


def _shift_poly(coeffs: Sequence, delta) -> list:
    """Coefficients of P(w + delta) in powers of w, for P given in powers of w."""
    n = len(coeffs)
    out = [mpc(0)] * n
    for k, a in enumerate(coeffs):
        a = _num(a)
        if a == 0:
            continue
        dk = mpc(1)
        for j in range(k, -1, -1):
            # term binom(k, j) w^j delta^(k-j)
            out[j] += a * mpmath.binomial(k, j) * dk
            dk *= delta
    return out


def _phase(n_plus_lead: Fraction, x0: Fraction) -> mpc:
    """exp(2 pi i m x0) with the rational phase reduced exactly mod 1."""
    t = (n_plus_lead * x0) % 1
    if t == 0:
        return mpc(1)
    if t == Fraction(1, 2):
        return mpc(-1)
    if t == Fraction(1, 4):
        return mpc(0, 1)
    if t == Fraction(3, 4):
        return mpc(0, -1)
    return mpmath.expjpi(2 * to_mpf(t))


def _terms_needed(y1: mpf, ctx: PrecisionContext, weight: int, degree: int) -> int:
    y = float(y1)
    budget = ctx.work_dps * math.log(10) + 10
    n = max(8, int(budget / (2 * math.pi * y)) + 2)
    for _ in range(6):
        n = int((budget + (weight + 1) * math.log(max(n, 2))) / (2 * math.pi * y)) + 4
    return n


def vertical_termwise(form: ModularFormSpec, coeffs: Sequence, center, x0: Fraction, y1: mpf, ctx: PrecisionContext) -> tuple:
    """int_{x0+i y1}^{x0+i inf} form(z) sum_k coeffs[k] (z - center)^k dz.

    Returns (value, remainder_estimate).
    """
    with mpmath.workprec(ctx.work_bits + 20):
        y1 = mpf(y1)
        z1 = mpc(to_mpf(x0), y1)
        # polynomial in u where z = z1 + i u
        p = _shift_poly(coeffs, z1 - _num(center))
        poly_u = [c * mpc(0, 1) ** j for j, c in enumerate(p)]
        deg = len(poly_u) - 1
        N = _terms_needed(y1, ctx, int(form.weight), deg)
        qs = quotient_qseries(form, N)
        lead = qs.lead
        fact = [mpmath.factorial(j) for j in range(deg + 1)]
        total = mpc(0)
        tail = []
        twopi = 2 * mpmath.pi
        for n, a in enumerate(qs.coeffs):
            if a == 0:
                continue
            m = lead + n
            if m <= 0:
                raise DomainError(f"{form.name} does not vanish at the cusp i*infinity")
            lam = twopi * to_mpf(m)
            inner = mpc(0)
            inv = 1 / lam
            pw = inv
            for j, c in enumerate(poly_u):
                if c != 0:
                    inner += c * fact[j] * pw
                pw *= inv
            term = to_mpf(a) * _phase(m, x0) * mpmath.exp(-lam * y1) * inner
            total += term
            tail.append(abs(term))
        total *= mpc(0, 1)
        r = mpmath.exp(-twopi * y1)
        est = (sum(tail[-2:]) if tail else mpf(0)) * r / (1 - r)
        return total, est


def _monomial(coeffs: Sequence, center) -> list:
    """Coefficients in powers of z for sum coeffs[k] (z - center)^k."""
    return _shift_poly(coeffs, -_num(center))


def _fricke_part(spec: EichlerSpec, y_split_sq: Fraction, ctx: PrecisionContext) -> tuple:
    """int_0^{i y_s} f(z) P(z) dz folded to int_{i/(6 y_s)}^{i inf} with w = -1/(6z).

    f(-1/(6w)) = eps w^k f(w) gives -(eps/6) int f(w) w^(k-2) P(-1/(6w)) dw.
    """
    form = spec.form
    eps = form.fricke_weight_factor
    if eps is None:
        raise SplitError(f"{form.name} has no recorded Fricke factor; cannot split at the cusp 0")
    k = form.weight
    if k.denominator != 1:
        raise SplitError("Fricke folding needs integral weight")
    k = int(k)
    mono = _monomial(spec.polynomial, spec.center)
    if len(mono) - 1 > k - 2 and any(c != 0 for c in mono[k - 1:]):
        raise SplitError("polynomial degree exceeds weight - 2; the folded integrand is not polynomial")
    with mpmath.workprec(ctx.work_bits + 20):
        q = [mpc(0)] * (k - 1)
        for j, c in enumerate(mono[: k - 1]):
            q[k - 2 - j] += c * (mpf(-1) / 6) ** j
        scale = -to_mpf(eps) / 6
        y_low_sq = Fraction(1, 36) / y_split_sq
        y_low = mpmath.sqrt(to_mpf(y_low_sq))
        val, est = vertical_termwise(form, q, Fraction(0), Fraction(0), y_low, ctx)
        return scale * val, abs(scale) * est


def _cusp_quadrature(spec: EichlerSpec, y1: mpf, ctx: PrecisionContext) -> tuple:
    """int_{x0}^{x0 + i y1} by tanh-sinh on the numerically evaluated form."""
    x0 = to_mpf(spec.path.x0)
    center = _num(spec.center)
    coeffs = [_num(c) for c in spec.polynomial]
    bits = ctx.work_bits + 10

    def f(y):
        if y <= 0:
            return mpc(0)
        z = mpc(x0, y)
        w = z - center
        pz = mpc(0)
        for c in reversed(coeffs):
            pz = pz * w + c
        return eval_form(spec.form, z, ctx) * pz

    with mpmath.workprec(bits):
        tol = mpf(10) ** (-(ctx.digits + 4))
        p = tanh_sinh(f, 0, y1, tol, bits, max_level=12, min_level=4)
        return p.value * mpc(0, 1), p.error


def eichler_vertical(spec: EichlerSpec, ctx: PrecisionContext = DEFAULT_CTX, split_sq: Fraction | None = None):
    """Integral along a vertical contour up to i*infinity.

    For contours from the cusp on an integral line the Fricke split point
    defaults to |z|^2 = 1/6; ``split_sq`` moves it.  Contours from a cusp on a
    non-integral line are split at y = 1/2 and the lower piece is done by
    quadrature.
    """
    path = spec.path
    if path.kind != "vertical":
        raise ContourError("eichler_vertical needs a vertical path")
    with mpmath.workprec(ctx.work_bits + 20):
        if path.y_from_sq is not None:
            y1 = mpmath.sqrt(to_mpf(path.y_from_sq))
            val, _ = vertical_termwise(spec.form, spec.polynomial, spec.center, path.x0, y1, ctx)
        elif path.x0.denominator == 1:
            s = Fraction(1, 6) if split_sq is None else _frac(split_sq)
            # translate to the imaginary axis; the form has period 1
            center = spec.center - path.x0 if isinstance(spec.center, Fraction) else _num(spec.center) - to_mpf(path.x0)
            shifted = EichlerSpec(spec.form, spec.polynomial, ContourPath.vertical(0), center)
            upper, _ = vertical_termwise(spec.form, spec.polynomial, center, Fraction(0), mpmath.sqrt(to_mpf(s)), ctx)
            lower, _ = _fricke_part(shifted, s, ctx)
            val = upper + lower
        else:
            y1 = mpf(1) / 2 if split_sq is None else mpmath.sqrt(to_mpf(split_sq))
            upper, _ = vertical_termwise(spec.form, spec.polynomial, spec.center, path.x0, y1, ctx)
            lower, _ = _cusp_quadrature(spec, y1, ctx)
            val = upper + lower
    with ctx.workdps():
        return +val


def eichler_arc(spec: EichlerSpec, ctx: PrecisionContext = DEFAULT_CTX, max_depth: int = 12):
    """Integral along a circular arc by adaptive Gauss-Legendre in the angle."""
    path = spec.path
    if path.kind != "arc":
        raise ContourError("eichler_arc needs an arc path")
    bits = ctx.work_bits + 10
    center = _num(spec.center)
    coeffs = [_num(c) for c in spec.polynomial]
    with mpmath.workprec(bits):
        r = mpmath.sqrt(to_mpf(path.radius_sq))
        c0 = to_mpf(path.center)

        def f(theta):
            e = mpmath.expjpi(theta)
            z = c0 + r * e
            if z.imag <= 0:
                return mpc(0)
            w = z - center
            pz = mpc(0)
            for c in reversed(coeffs):
                pz = pz * w + c
            # dz = i pi r e dtheta
            return eval_form(spec.form, z, ctx) * pz * (1j * mpmath.pi * r * e)

        a, b = to_mpf(path.theta_from), to_mpf(path.theta_to)
        tol = mpf(10) ** (-(ctx.digits + 4))
        n = int(0.6 * ctx.work_dps) + 4
        pieces = 8
        total = mpc(0)
        for i in range(pieces):
            lo = a + (b - a) * i / pieces
            hi = a + (b - a) * (i + 1) / pieces
            try:
                total += adaptive_gl(f, lo, hi, tol / pieces, bits, n, max_depth=max_depth).value
            except QuadratureError as exc:
                raise QuadratureError(f"arc quadrature failed: {exc}") from None
    with ctx.workdps():
        return +total


def eichler(spec: EichlerSpec, ctx: PrecisionContext = DEFAULT_CTX):
    if spec.path.kind == "vertical":
        return eichler_vertical(spec, ctx)
    return eichler_arc(spec, ctx)


# ----------------------------------------------------------------------
# L-values


def lvalue(form: ModularFormSpec, s: int, ctx: PrecisionContext = DEFAULT_CTX, route: str = "termwise"):
    """L(f, s) = (2 pi)^s / Gamma(s) int_0^inf f(iy) y^(s-1) dy for 1 <= s <= k - 1.

    ``route`` "termwise" uses the Fricke-split q-series sums, "quadrature"
    integrates the numerically evaluated form along the imaginary axis and
    "explicit" uses the closed exponential sums available for (f46, 2),
    (f46, 3), (f66, 3) and (f66, 5).
    """
    k = form.weight
    if not (1 <= s <= k - 1):
        raise DomainError(f"s = {s} lies outside the critical strip 1..{k - 1}")
    if route == "explicit":
        return explicit_lvalue(form, s, ctx)
    with mpmath.workprec(ctx.work_bits + 20):
        pref = (2 * mpmath.pi) ** s / mpmath.factorial(s - 1)
        if route == "termwise":
            poly = [0] * (s - 1) + [1]
            spec = EichlerSpec(form, poly, ContourPath.vertical(0))
            # dz = i dy, z^(s-1) = i^(s-1) y^(s-1)
            val = eichler_vertical(spec, ctx) * mpc(0, 1) ** (-s)
        elif route == "quadrature":
            bits = ctx.work_bits + 10
            y0 = 1 / mpmath.sqrt(6)

            def g(y):
                return eval_form(form, mpc(0, y), ctx) * y ** (s - 1)

            def g_inf(u):
                # y = y0 / u on (0, 1]
                if u <= 0:
                    return mpc(0)
                y = y0 / u
                return g(y) * y0 / (u * u)

            tol = mpf(10) ** (-(ctx.digits + 4))
            val = tanh_sinh(g, 0, y0, tol, bits, max_level=12).value + tanh_sinh(g_inf, 0, 1, tol, bits, max_level=12).value
        else:
            raise ValueError("route must be termwise, quadrature or explicit")
        out = pref * val
    with ctx.workdps():
        return +out.real if abs(out.imag) <= abs(out) * mpmath.mpf(10) ** (-ctx.digits) * 100 else +out


def explicit_lvalue(form: ModularFormSpec, s: int, ctx: PrecisionContext = DEFAULT_CTX):
    """Closed exponential sums sum a(n)/n^s P(n) exp(-2 pi n/sqrt 6)."""
    key = (form.name, s)
    with mpmath.workprec(ctx.work_bits + 20):
        pi = +mpmath.pi
        r6 = mpmath.sqrt(6)

        def poly(n):
            n = mpf(n)
            if key == ("f46", 2):
                return 2 + 4 * pi * n / r6
            if key == ("f46", 3):
                return 1 + 2 * pi * n / r6 + 2 * pi**2 * n**2 / 3
            if key == ("f66", 3):
                return 2 + 4 * pi * n / r6 + 2 * pi**2 * n**2 / 3
            if key == ("f66", 5):
                return 1 + 2 * pi * n / r6 + pi**2 * n**2 / 3 + 2 * pi**3 * n**3 / (9 * r6) + pi**4 * n**4 / 27
            raise DomainError(f"no explicit sum recorded for L({form.name}, {s})")

        y0 = 1 / r6
        N = _terms_needed(y0, ctx, int(form.weight), 4)
        qs = quotient_qseries(form, N)
        total = mpf(0)
        for i, a in enumerate(qs.coeffs):
            if a == 0:
                continue
            n = int(qs.lead) + i
            total += to_mpf(a) / mpf(n) ** s * poly(n) * mpmath.exp(-2 * pi * n / r6)
    with ctx.workdps():
        return +total


# ----------------------------------------------------------------------
# the E family on Re z = 1/2


def _on_half_line(point, ctx: PrecisionContext) -> mpc:
    z = modular._point(point)
    with mpmath.workprec(ctx.work_bits + 20):
        if abs(z.real - mpf(1) / 2) > mpf(10) ** (-ctx.digits):
            raise ContourError("the E family is implemented on Re z = 1/2 only")
        if z.imag * z.imag <= mpf(1) / 12:
            raise ContourError("point lies below 1/2 + i/(2 sqrt 3)")
    return z


def _sigma_upward(z: mpc, j: int, ctx: PrecisionContext):
    """int_z^{i inf} sigma4(z') (z - z')^j dz' along the vertical line."""
    poly = [0] * j + [(-1) ** j]
    y1 = z.imag
    val, _ = vertical_termwise(SIGMA4, poly, z, Fraction(1, 2), y1, ctx)
    return val


def eichler_E(order: int, point, ctx: PrecisionContext = DEFAULT_CTX):
    """E, E', E'', E''' or E'''' at a point 1/2 + iy with y > 1/(2 sqrt 3)."""
    if order not in (0, 1, 2, 3, 4):
        raise ValueError("order must be 0..4")
    z = _on_half_line(point, ctx)
    with mpmath.workprec(ctx.work_bits + 20):
        pi3i = mpmath.pi**3 * mpc(0, 1)
        if order == 0:
            out = 12 * pi3i * _sigma_upward(z, 2, ctx) + 7 * zeta_int(3, ctx) / 8
        elif order == 1:
            out = 24 * pi3i * _sigma_upward(z, 1, ctx)
        elif order == 2:
            out = 24 * pi3i * _sigma_upward(z, 0, ctx)
        elif order == 3:
            out = -24 * pi3i * eval_form(SIGMA4, z, ctx)
        else:
            d = modular.cauchy_derivatives(lambda w: eval_form(SIGMA4, w, ctx), z, 1, ctx)
            out = -24 * pi3i * d[1]
    with ctx.workdps():
        return +out


def broadhurst_G(s_shift: int, ctx: PrecisionContext = DEFAULT_CTX):
    """(pi^3/i) int G/96 for shift 0, -3 pi^4 int (G/96)(z - 1/2) for shift 1, on Re z = 1/2."""
    path = ContourPath.vertical(Fraction(1, 2))
    with mpmath.workprec(ctx.work_bits + 20):
        if s_shift == 0:
            val = eichler_vertical(EichlerSpec(G96, [1], path), ctx) * mpmath.pi**3 / mpc(0, 1)
        elif s_shift == 1:
            val = eichler_vertical(EichlerSpec(G96, [0, 1], path, Fraction(1, 2)), ctx) * (-3 * mpmath.pi**4)
        else:
            raise ValueError("s_shift must be 0 or 1")
    with ctx.workdps():
        return +val


def _named() -> dict:
    half = Fraction(1, 2)
    v0 = ContourPath.vertical(0)
    vh = ContourPath.vertical(half)
    return {
        "f46": ("int_0^{i inf} f46(z) dz", EichlerSpec(F46, [1], v0)),
        "f46_z": ("int_0^{i inf} f46(z) z dz", EichlerSpec(F46, [0, 1], v0)),
        "f46_z2": ("int_0^{i inf} f46(z) z^2 dz", EichlerSpec(F46, [0, 0, 1], v0)),
        "f46_half": ("int_{1/2}^{1/2+i inf} f46(z) dz", EichlerSpec(F46, [1], vh)),
        "f46_minus_half": ("int_{-1/2}^{-1/2+i inf} f46(w) dw", EichlerSpec(F46, [1], ContourPath.vertical(-half))),
        "f66": ("int_0^{i inf} f66(z) dz", EichlerSpec(F66, [1], v0)),
        "f66_z": ("int_0^{i inf} f66(z) z dz", EichlerSpec(F66, [0, 1], v0)),
        "f66_z2": ("int_0^{i inf} f66(z) z^2 dz", EichlerSpec(F66, [0, 0, 1], v0)),
        "f66_z4": ("int_0^{i inf} f66(z) z^4 dz", EichlerSpec(F66, [0, 0, 0, 0, 1], v0)),
        "f66_w3_line": ("int_{1/2+i/(2 sqrt3)}^{1/2+i inf} f66(z)(1 - 2z)^2 dz",
                        EichlerSpec(F66, [1, -4, 4], ContourPath.vertical(half, y_from_sq=Fraction(1, 12)))),
        "f66_w3_arc": ("int_{1/4+i/(4 sqrt3)}^{1/2+i/(2 sqrt3)} f66(z)(1 - 4z + 8z^2) dz",
                       EichlerSpec(F66, [1, -4, 8], ContourPath.geodesic_w3(Fraction(1, 3), 0))),
        "sigma4_cm": ("int_{z*}^{i inf} sigma4(z)(2z - 1) dz with z* = 1/2 + i sqrt(5/12)",
                      EichlerSpec(SIGMA4, [-1, 2], ContourPath.vertical(half, y_from_sq=Fraction(5, 12)))),
        "g96_half": ("int_{1/2}^{1/2+i inf} G(z)/96 dz", EichlerSpec(G96, [1], vh)),
    }


NAMED_EICHLER = _named()
