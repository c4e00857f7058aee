"""Eta quotients, theta and Eisenstein series, level-6 Hauptmoduln.

Exact work happens on :class:`QSeries`, truncated expansions with rational
coefficients.  Numeric values anywhere in the upper half plane come from
evaluating every eta factor after reducing its argument with
eta(tau + 1) = exp(pi i/12) eta(tau) and eta(-1/tau) = sqrt(tau/i) eta(tau),
so points close to the real axis need no special treatment.
"""

from __future__ import annotations

import csv
import io
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
from mpmath import mpc, mpf

from .specfun import DEFAULT_CTX, PrecisionContext, to_mpf


class TruncationError(ValueError):
    """A q-series is too short for the requested operation."""


# ----------------------------------------------------------------------
# exact q-series


class QSeries:
    """sum_{n < N} coeffs[n] q^(lead + n), coefficients exact.

    ``lead`` is a rational with denominator dividing 24.
    """

    __slots__ = ("lead", "coeffs")

    def __init__(self, lead, coeffs: Iterable):
        lead = Fraction(lead)
        if (lead * 24).denominator != 1:
            raise ValueError("leading exponent must be a multiple of 1/24")
        self.lead = lead
        self.coeffs = tuple(coeffs)

    @property
    def N(self) -> int:
        return len(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int):
        return self.coeffs[n]

    def coefficient(self, exponent) -> Fraction:
        """Coefficient of q^exponent."""
        k = Fraction(exponent) - self.lead
        if k.denominator != 1 or k < 0:
            return Fraction(0)
        k = int(k)
        if k >= self.N:
            raise TruncationError(f"q^{exponent} lies beyond the truncation order")
        return self.coeffs[k]

    def __eq__(self, other) -> bool:
        return isinstance(other, QSeries) and self.lead == other.lead and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.lead, self.coeffs))

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:8])
        return f"QSeries(lead={self.lead}, N={self.N}, [{head}{', ...' if self.N > 8 else ''}])"

    def scale(self, c) -> "QSeries":
        c = Fraction(c)
        return QSeries(self.lead, (c * a for a in self.coeffs))

    def __neg__(self) -> "QSeries":
        return self.scale(-1)

    def __add__(self, other: "QSeries") -> "QSeries":
        shift = other.lead - self.lead
        if shift.denominator != 1:
            raise ValueError("cannot add q-series whose exponents differ by a non-integer")
        shift = int(shift)
        a, b = (self, other) if shift >= 0 else (other, self)
        d = abs(shift)
        end = min(a.N, b.N + d)
        out = list(a.coeffs[:end])
        for i in range(d, end):
            out[i] = out[i] + b.coeffs[i - d]
        return QSeries(a.lead, out)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        N = min(self.N, other.N)
        a, b = self.coeffs, other.coeffs
        out = []
        for n in range(N):
            acc = 0
            for k in range(n + 1):
                if a[k] and b[n - k]:
                    acc += a[k] * b[n - k]
            out.append(acc)
        return QSeries(self.lead + other.lead, out)

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        a = self.coeffs
        if not a or a[0] == 0:
            raise ZeroDivisionError("q-series with vanishing leading coefficient cannot be inverted")
        a0 = a[0]
        inv0 = a0 if a0 in (1, -1) else 1 / Fraction(a0)
        out = [inv0]
        for n in range(1, self.N):
            acc = 0
            for k in range(1, n + 1):
                if a[k]:
                    acc += a[k] * out[n - k]
            out.append(-acc * inv0)
        return QSeries(-self.lead, out)

    def __pow__(self, e: int) -> "QSeries":
        if e < 0:
            return self.inverse() ** (-e)
        result = QSeries(0, [1] + [0] * (self.N - 1))
        base = self
        if e == 0:
            return result
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def evaluate(self, z, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
        """Numeric value at q = exp(2 pi i z)."""
        with ctx.workdps():
            z = mpmath.mpmathify(z)
            q = mpmath.expjpi(2 * z)
            total = mpc(0)
            qn = mpc(1)
            for c in self.coeffs:
                if c:
                    total += (to_mpf(c) if isinstance(c, Fraction) else c) * qn
                qn *= q
            return total * mpmath.expjpi(2 * z * to_mpf(self.lead))

    def to_csv(self, target=None) -> str:
        """Rows (exponent, numerator, denominator); returns the text too."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["exponent", "numerator", "denominator"])
        for n, c in enumerate(self.coeffs):
            c = Fraction(c)
            w.writerow([str(self.lead + n), c.numerator, c.denominator])
        text = buf.getvalue()
        if target is not None:
            if hasattr(target, "write"):
                target.write(text)
            else:
                with open(target, "w", encoding="utf-8", newline="") as fh:
                    fh.write(text)
        return text


def euler_product(N: int, m: int = 1) -> list:
    """prod_{n>=1} (1 - q^(m n)) to N coefficients, from the pentagonal number theorem."""
    out = [0] * N
    k = 0
    while True:
        done = True
        for kk in ((k, 1),) if k == 0 else ((k, 1), (-k, 1)):
            j = kk[0] * (3 * kk[0] - 1) // 2
            idx = m * j
            if idx < N:
                out[idx] += -1 if k % 2 else 1
                done = False
        if done:
            break
        k += 1
    return out


def euler_product_direct(N: int) -> list:
    """prod (1 - q^n) multiplied out factor by factor (independent of the pentagonal theorem)."""
    out = [1] + [0] * (N - 1)
    for n in range(1, N):
        for i in range(N - 1, n - 1, -1):
            out[i] -= out[i - n]
    return out


def eta_qseries(N: int) -> QSeries:
    """q^(1/24) prod (1 - q^n), N coefficients."""
    if N < 1:
        raise ValueError("N must be positive")
    return QSeries(Fraction(1, 24), euler_product(N))


def eta_quotient_qseries(terms: dict | Sequence, N: int) -> QSeries:
    """prod eta(m z)^e for a {m: e} map."""
    items = terms.items() if isinstance(terms, dict) else terms
    result = QSeries(0, [1] + [0] * (N - 1))
    lead = Fraction(0)
    for m, e in items:
        if e == 0:
            continue
        base = QSeries(0, euler_product(N, m))
        result = result * (base**e)
        lead += Fraction(m * e, 24)
    return QSeries(lead, result.coeffs)


# ----------------------------------------------------------------------
# recipes


@dataclass(frozen=True)
class ModularFormSpec:
    """A weighted sum of eta quotients on Gamma_0(6)-type groups.

    ``terms`` is a tuple of (coefficient, ((m, e), ...)).  ``companions``
    holds alternative recipes for the same function.  ``fricke_weight_factor``
    is the constant c in f(-1/(6z)) = c z^k f(z), when known.
    """

    name: str
    weight: Fraction
    terms: tuple
    companions: tuple = ()
    fricke_weight_factor: Fraction | None = None
    level: int = 6

    @property
    def eta_terms(self) -> tuple:
        if len(self.terms) == 1 and self.terms[0][0] == 1:
            return self.terms[0][1]
        return ()

    def leading_exponents(self) -> list:
        return [sum(Fraction(m * e, 24) for m, e in t) for _, t in self.terms]


def _q(*pairs) -> tuple:
    return tuple(sorted(pairs))


def _recipe(*parts) -> tuple:
    return tuple((Fraction(c), _q(*t.items())) for c, t in parts)


ETA = ModularFormSpec("eta", Fraction(1, 2), _recipe((1, {1: 1})), level=1)
X63 = ModularFormSpec("X63", Fraction(0), _recipe((1, {2: 6, 6: 6, 1: -6, 3: -6})))
Z63 = ModularFormSpec("Z63", Fraction(2), _recipe((1, {1: 4, 3: 4, 2: -2, 6: -2})))
X62 = ModularFormSpec("X62", Fraction(0), _recipe((1, {3: 4, 6: 4, 1: -4, 2: -4})))
Z62 = ModularFormSpec("Z62", Fraction(2), _recipe((1, {1: 3, 2: 3, 3: -1, 6: -1})))
F46 = ModularFormSpec("f46", Fraction(4), _recipe((1, {1: 2, 2: 2, 3: 2, 6: 2})), fricke_weight_factor=Fraction(36))
F66 = ModularFormSpec(
    "f66",
    Fraction(6),
    _recipe((1, {2: 9, 3: 9, 1: -3, 6: -3}), (1, {1: 9, 6: 9, 2: -3, 3: -3})),
    companions=(_recipe((1, {1: 5, 2: 5, 3: 1, 6: 1}), (9, {1: 1, 2: 1, 3: 5, 6: 5})),),
    fricke_weight_factor=Fraction(-216),
)
# weight-4 integrand of the Eichler integrals E, E', E''
SIGMA4 = ModularFormSpec("sigma4", Fraction(4), _recipe((1, {1: 1, 2: 7, 3: -3, 6: 3}), (9, {1: -3, 2: 3, 3: 1, 6: 7})))


def _g_recipe() -> tuple:
    # f46 * v^j with v = 3 [eta(3z)/eta(z)]^4 [eta(2z)/eta(6z)]^2
    parts = []
    for j, w in ((4, 1), (2, -6), (0, 2), (-2, -6), (-4, 9)):
        c = Fraction(w) * Fraction(3) ** j
        parts.append((c / 96, {1: 2 - 4 * j, 2: 2 + 2 * j, 3: 2 + 4 * j, 6: 2 - 2 * j}))
    return _recipe(*parts)


G96 = ModularFormSpec(
    "G96",
    Fraction(4),
    _g_recipe(),
    companions=(
        _recipe(
            (Fraction(2, 3), {3: 8, 2: 20, 1: -16, 6: -4}),
            (Fraction(2, 27), {6: 4, 2: 12, 3: -8}),
            (Fraction(-1, 3), {3: 5, 2: 11, 1: -7, 6: -1}),
            (Fraction(-1, 9), {1: 1, 6: 3, 2: 7, 3: -3}),
        ),
    ),
)

FORMS = {s.name: s for s in (ETA, X63, Z63, X62, Z62, F46, F66, SIGMA4, G96)}
NAMED_FUNCTIONS = tuple(FORMS) + ("theta",)


def get_form(name: str) -> ModularFormSpec:
    try:
        return FORMS[name]
    except KeyError:
        raise KeyError(f"unknown form {name!r}; known: {', '.join(NAMED_FUNCTIONS)}") from None


_QCACHE: dict = {}
_QLOCK = threading.Lock()


def quotient_qseries(spec: ModularFormSpec, N: int, recipe: int = 0) -> QSeries:
    """Exact expansion of a recipe (0 is the primary one, 1.. the companions)."""
    key = (spec.name, N, recipe)
    got = _QCACHE.get(key)
    if got is not None:
        return got
    terms = spec.terms if recipe == 0 else spec.companions[recipe - 1]
    leads = [sum(Fraction(m * e, 24) for m, e in t) for _, t in terms]
    base = min(leads)
    span = max(leads) - base
    if span.denominator != 1:
        raise ValueError(f"{spec.name}: recipe terms differ by non-integral powers of q")
    if N <= span:
        raise TruncationError(f"{spec.name}: N = {N} does not reach the leading exponent span {span}")
    total = None
    for (c, t), lead in zip(terms, leads):
        extra = int(lead - base)
        s = eta_quotient_qseries(t, N - extra).scale(c)
        s = QSeries(s.lead - extra, [0] * extra + list(s.coeffs))
        total = s if total is None else total + s
    with _QLOCK:
        _QCACHE.setdefault(key, total)
    return total


# ----------------------------------------------------------------------
# numeric evaluation


@dataclass(frozen=True)
class UpperHalfPoint:
    z: mpc

    def __post_init__(self) -> None:
        z = mpmath.mpmathify(self.z)
        if not (mpmath.im(z) > 0):
            raise ValueError("point must lie in the upper half plane")
        object.__setattr__(self, "z", mpc(z))


def _point(z) -> mpc:
    if isinstance(z, UpperHalfPoint):
        return z.z
    return UpperHalfPoint(z).z


def _eta_series(tau: mpc) -> mpc:
    q = mpmath.expjpi(2 * tau)
    eps = mpmath.eps
    total = mpc(1)
    k = 1
    while True:
        a = q ** (k * (3 * k - 1) // 2)
        b = a * q**k
        term = (a + b) if k % 2 == 0 else -(a + b)
        total += term
        if abs(a) < eps:
            break
        k += 1
    return mpmath.expjpi(tau / 12) * total


def eta(z, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    """Dedekind eta at any point of the upper half plane."""
    with mpmath.workprec(ctx.work_bits + 20):
        tau = _point(z)
        factor = mpc(1)
        for _ in range(10000):
            n = int(mpmath.nint(tau.real))
            if n:
                tau -= n
                factor *= mpmath.expjpi(mpf(n) / 12)
            if abs(tau) < 1 - mpf(2) ** (-mpmath.mp.prec + 10):
                factor /= mpmath.sqrt(tau / 1j)
                tau = -1 / tau
            else:
                break
        return factor * _eta_series(tau)


def theta(z, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    """sum_n exp(pi i n^2 z) through eta(z)^5 / (eta(z/2)^2 eta(2z)^2)."""
    z = _point(z)
    with mpmath.workprec(ctx.work_bits + 20):
        return eta(z, ctx) ** 5 / (eta(z / 2, ctx) ** 2 * eta(2 * z, ctx) ** 2)


def theta_series(z, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    z = _point(z)
    with mpmath.workprec(ctx.work_bits + 20):
        q = mpmath.expjpi(z)
        total = mpc(1)
        n = 1
        while True:
            t = q ** (n * n)
            total += 2 * t
            if abs(t) < mpmath.eps:
                return total
            n += 1


def eval_form(spec, z, ctx: PrecisionContext = DEFAULT_CTX, method: str = "eta", recipe: int = 0) -> mpc:
    """Value of a named function or a ModularFormSpec at z.

    ``method`` "eta" multiplies numerically reduced eta values and works
    everywhere; "qseries" sums the exact expansion and needs Im z bounded
    away from zero.
    """
    if isinstance(spec, str):
        if spec == "theta":
            return theta(z, ctx)
        spec = get_form(spec)
    z = _point(z)
    terms = spec.terms if recipe == 0 else spec.companions[recipe - 1]
    if method == "qseries":
        y = float(z.imag)
        N = math.ceil(ctx.work_dps * math.log(10) / (2 * math.pi * y)) + 16
        return quotient_qseries(spec, N, recipe).evaluate(z, ctx)
    if method != "eta":
        raise ValueError("method must be 'eta' or 'qseries'")
    with mpmath.workprec(ctx.work_bits + 20):
        cache: dict = {}
        total = mpc(0)
        for c, t in terms:
            val = to_mpf(c)
            for m, e in t:
                if m not in cache:
                    cache[m] = eta(m * z, ctx)
                val *= cache[m] ** e
            total += val
    with ctx.workdps():
        return +total


def fricke_factor(spec: ModularFormSpec, z, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    """f(-1/(6z)) / (z^k f(z)), constant for Fricke eigenforms."""
    z = _point(z)
    with mpmath.workprec(ctx.work_bits + 20):
        return eval_form(spec, -1 / (6 * z), ctx) / (z ** int(spec.weight) * eval_form(spec, z, ctx))


def w2(z):
    """Atkin-Lehner involution W_2 z = (2z - 1)/(6z - 2)."""
    return (2 * z - 1) / (6 * z - 2)


# ----------------------------------------------------------------------
# Eisenstein series


def _eis_series(kind: str, tau: mpc) -> mpc:
    q = mpmath.expjpi(2 * tau)
    p, c = {"E2": (1, -24), "E4": (3, 240), "E6": (5, -504)}[kind]
    total = mpc(0)
    qn = q
    n = 1
    eps = mpmath.eps
    while True:
        t = n**p * qn / (1 - qn)
        total += t
        if abs(t) < eps * (1 + abs(total)):
            break
        qn *= q
        n += 1
    return 1 + c * total


def _eisenstein_holomorphic(kind: str, tau: mpc) -> mpc:
    k = int(kind[1])
    n = int(mpmath.nint(tau.real))
    tau = tau - n
    if abs(tau) >= 1 - mpf(2) ** (-mpmath.mp.prec + 10):
        return _eis_series(kind, tau)
    inv = -1 / tau
    val = _eisenstein_holomorphic(kind, inv)  # E_k(-1/tau)
    if k == 2:
        # E2(-1/tau) = tau^2 E2(tau) + 6 tau/(pi i)
        return (val - 6 * tau / (mpmath.pi * 1j)) / tau**2
    return val / tau**k


def eisenstein(kind: str, z, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    """E4, E6, the holomorphic E2star = 1 - 24 sum sigma(n) q^n, or E2 = E2star - 3/(pi Im z)."""
    z = _point(z)
    with mpmath.workprec(ctx.work_bits + 20):
        if kind in ("E4", "E6"):
            val = _eisenstein_holomorphic(kind, z)
        elif kind == "E2star":
            val = _eisenstein_holomorphic("E2", z)
        elif kind == "E2":
            val = _eisenstein_holomorphic("E2", z) - 3 / (mpmath.pi * z.imag)
        else:
            raise ValueError("kind must be E2, E4, E6 or E2star")
    with ctx.workdps():
        return +val


# ----------------------------------------------------------------------
# derivatives at a point


def cauchy_derivatives(fn, z0, orders: int, ctx: PrecisionContext = DEFAULT_CTX, radius=mpf(1) / 20, nodes: int | None = None) -> list:
    """f^(k)(z0) for k = 0..orders by the trapezoidal rule on a circle."""
    z0 = _point(z0)
    r = mpf(radius)
    if r >= z0.imag:
        raise ValueError("contour radius reaches the real axis")
    M = nodes if nodes is not None else max(64, 64 * ctx.digits // 10)
    with mpmath.workprec(ctx.work_bits + 20):
        vals = []
        for j in range(M):
            w = mpmath.expjpi(mpf(2 * j) / M)
            vals.append((w, fn(z0 + r * w)))
        out = []
        for k in range(orders + 1):
            acc = mpc(0)
            for w, v in vals:
                acc += v * w ** (-k)
            out.append(acc * mpmath.factorial(k) / (M * r**k))
    return out


CM_POINT_TEXT = "1/2 + i sqrt(5)/(2 sqrt(3))"


def cm_point(ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    with mpmath.workprec(ctx.work_bits + 20):
        return mpc(mpf(1) / 2, mpmath.sqrt(5) / (2 * mpmath.sqrt(3)))


def cm_derivative_table(point=None, orders: int = 4, ctx: PrecisionContext = DEFAULT_CTX) -> dict:
    """{("X63", k): value, ("Z63", k): value} for k = 0..orders."""
    if orders > 4 or orders < 0:
        raise ValueError("orders must lie in 0..4")
    z0 = cm_point(ctx) if point is None else _point(point)
    out = {}
    for name in ("X63", "Z63"):
        spec = FORMS[name]
        ders = cauchy_derivatives(lambda z: eval_form(spec, z, ctx), z0, orders, ctx)
        for k, v in enumerate(ders):
            out[(name, k)] = v
    return out


def x63_derivative_jacobian(z, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    """X63'(z) = 2 pi i X63 {[eta(z)eta(2z)]^3/(eta(3z)eta(6z)) + 9 [eta(3z)eta(6z)]^3/(eta(z)eta(2z))}."""
    z = _point(z)
    with mpmath.workprec(ctx.work_bits + 20):
        e1, e2, e3, e6 = (eta(m * z, ctx) for m in (1, 2, 3, 6))
        brace = (e1 * e2) ** 3 / (e3 * e6) + 9 * (e3 * e6) ** 3 / (e1 * e2)
        return 2 * mpmath.pi * 1j * eval_form(X63, z, ctx) * brace


def bologna_c(ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """Rescaled Bologna constant Gamma(1/15)Gamma(2/15)Gamma(4/15)Gamma(8/15)/(240 pi^2)."""
    with mpmath.workprec(ctx.work_bits + 20):
        g = mpmath.gamma
        return g(mpf(1) / 15) * g(mpf(2) / 15) * g(mpf(4) / 15) * g(mpf(8) / 15) / (240 * mpmath.pi**2)


def table1_closed_forms(ctx: PrecisionContext = DEFAULT_CTX) -> dict:
    """Closed forms of X63, Z63 and four derivatives each at the CM point."""
    with mpmath.workprec(ctx.work_bits + 20):
        c = bologna_c(ctx)
        pi = +mpmath.pi
        s3, s5, s15 = mpmath.sqrt(3), mpmath.sqrt(5), mpmath.sqrt(15)
        i = mpc(0, 1)
        return {
            ("X63", 0): mpc(-mpf(1) / 64),
            ("X63", 1): 3 * s15 * c / (32 * i),
            ("X63", 2): mpc(9 * c * (9 * c + 1) / 16),
            ("X63", 3): 27 * s15 * c * (18 * c**2 - 18 * c - 1) / (80 * i),
            ("X63", 4): mpc(81 * c * (753 * c**3 + 54 * c**2 - 27 * c - 1) / 20),
            ("Z63", 0): mpc(8 * s3 * c / pi),
            ("Z63", 1): 48 * c * (3 * c - 1) / (s5 * pi * i),
            ("Z63", 2): mpc(-48 * s3 * c * (62 * c**2 - 18 * c + 3) / (5 * pi)),
            ("Z63", 3): 1728 * i * c * (57 * c**3 - 62 * c**2 + 9 * c - 1) / (5 * s5 * pi),
            ("Z63", 4): mpc(1728 * s3 * c * (266 * c**4 - 228 * c**3 + 124 * c**2 - 12 * c + 1) / (5 * pi)),
        }


def weight4_closed_form(z, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    """Z63^2 X63 sqrt(1 + 4 X63) sqrt(1 + 16 X63); equals sigma4 where the principal roots apply."""
    z = _point(z)
    with mpmath.workprec(ctx.work_bits + 20):
        x = eval_form(X63, z, ctx)
        zz = eval_form(Z63, z, ctx)
        return zz**2 * x * mpmath.sqrt(1 + 4 * x) * mpmath.sqrt(1 + 16 * x)
