"""Arbitrary-precision scalars and the special functions used across the package.

Everything here is a pure function of its inputs and a :class:`PrecisionContext`.
Bessel functions of order 0 and 1 are computed by fixed-point power series for
small arguments and by exponentially scaled Hankel expansions beyond a
precision-dependent crossover; the two regimes overlap so they can be
compared against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath import mpf, mpc
from mpmath.libmp import to_fixed

KINDS = ("J0", "Y0", "I0", "K0", "J1", "I1", "K1")

# e^t beyond this is refused rather than silently producing a giant exponent
_MAX_EXP_ARG = 10**8


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


class DivergenceError(ArithmeticError):
    """A series or integral was asked for outside its region of convergence."""


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision, truncation orders and tolerances.

    ``digits`` is the number of decimal digits the caller wants; internal
    arithmetic runs with ``series_guard`` extra digits.  ``tail_order`` is the
    minimum number of terms kept in any asymptotic tail expansion.
    """

    digits: int = 40
    series_guard: int = 10
    tail_order: int = 12

    def __post_init__(self) -> None:
        if self.digits < 16:
            raise ValueError("digits must be >= 16")
        if self.series_guard < 4:
            raise ValueError("series_guard must be >= 4")
        if self.tail_order < 4:
            raise ValueError("tail_order must be >= 4")

    @property
    def work_dps(self) -> int:
        return self.digits + self.series_guard

    @property
    def work_bits(self) -> int:
        return int(self.work_dps * 3.3219280948873626) + 8

    @property
    def eps(self) -> mpf:
        """Target relative accuracy of primitive values."""
        return mpf(10) ** (-self.digits)

    @property
    def work_eps(self) -> mpf:
        return mpf(10) ** (-self.work_dps)

    @property
    def tight(self) -> mpf:
        return mpf(10) ** (-self.digits + 8)

    @property
    def loose(self) -> mpf:
        return mpf(10) ** (-(self.digits // 2))

    @property
    def crossover(self) -> mpf:
        """Argument beyond which Bessel functions use the asymptotic regime."""
        return mpf(max(30.0, self.work_dps * math.log(10) / 2 + 3))

    def workdps(self):
        return mpmath.workdps(self.work_dps)

    def with_digits(self, digits: int) -> "PrecisionContext":
        return PrecisionContext(digits, self.series_guard, self.tail_order)


DEFAULT_CTX = PrecisionContext()


def to_mpf(x) -> mpf:
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


def principal_power(w, beta) -> mpc:
    """w**beta on the principal branch, |arg w| < pi."""
    w = mpmath.mpmathify(w)
    if w == 0:
        return mpc(0)
    return mpmath.exp(beta * (mpmath.log(abs(w)) + 1j * mpmath.arg(w)))


# --------------------------------------------------------------------------
# elementary constants


def gamma(x, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    x = to_mpf(x) if not isinstance(x, mpf) else x
    if x <= 0:
        raise DomainError("gamma is only provided for x > 0")
    with ctx.workdps():
        return mpmath.gamma(x)


def _zeta3_apery(ctx: PrecisionContext) -> mpf:
    # 5/2 * sum (-1)^(n-1) / (n^3 binom(2n, n))
    with ctx.workdps():
        total = mpf(0)
        binom = 1
        n = 0
        tiny = ctx.work_eps / 100
        while True:
            n += 1
            binom = binom * (2 * n) * (2 * n - 1) // (n * n)
            term = mpf(1) / (n**3 * binom)
            total += term if n % 2 else -term
            if term < tiny:
                break
        return total * 5 / 2


def _zeta3_amdeberhan(ctx: PrecisionContext) -> mpf:
    # 1/64 * sum (-1)^n (205n^2+250n+77) (n!)^10 / ((2n+1)!)^5
    with ctx.workdps():
        total = mpf(0)
        tiny = ctx.work_eps / 100
        n = 0
        fact_n = 1
        fact_2n1 = 1
        while True:
            if n > 0:
                fact_n *= n
                fact_2n1 *= (2 * n) * (2 * n + 1)
            term = mpf((205 * n * n + 250 * n + 77) * fact_n**10) / fact_2n1**5
            total += -term if n % 2 else term
            if term < tiny:
                break
            n += 1
        return total / 64


def zeta3_routes(ctx: PrecisionContext = DEFAULT_CTX) -> tuple[mpf, mpf]:
    """Apery's constant by two unrelated accelerated series."""
    return _zeta3_apery(ctx), _zeta3_amdeberhan(ctx)


def zeta_int(s: int, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    if s == 2:
        with ctx.workdps():
            return mpmath.pi**2 / 6
    if s == 3:
        return _zeta3_amdeberhan(ctx)
    raise DomainError(f"zeta_int supports s in {{2, 3}}, got {s}")


# --------------------------------------------------------------------------
# Bessel functions


def _fixed(x: mpf, wp: int) -> int:
    return to_fixed(mpf(x)._mpf_, wp)


def _unfixed(n: int, wp: int) -> mpf:
    return mpmath.ldexp(mpf(n), -wp)


def _series_ik(order: int, t: mpf, bits: int) -> tuple[mpf, mpf]:
    """I_order(t) and K_order(t) from their power series."""
    w = bits + int(2.9 * float(t)) + 24
    one = 1 << w
    with mpmath.workprec(w + 20):
        T = _fixed(t, w)
        lg = _fixed(mpmath.log(t / 2) + mpmath.euler, w)
        eul = _fixed(mpmath.euler, w)
        inv_t = _fixed(1 / t, w) if t > 0 else 0
    X = (T * T >> w) >> 2
    if order == 0:
        term = one
        s_i = one
        s_h = 0
        h = 0
        k = 0
        while True:
            k += 1
            term = ((term * X) >> w) // (k * k)
            if term == 0:
                break
            h += one // k
            s_i += term
            s_h += (term * h) >> w
        i_val = s_i
        k_val = -((lg * s_i) >> w) + s_h
    else:
        u = one
        s1 = one
        s2 = one  # k = 0: 2*H_0 + 1/1
        h = 0
        k = 0
        while True:
            k += 1
            u = ((u * X) >> w) // (k * (k + 1))
            if u == 0:
                break
            h += one // k
            s1 += u
            s2 += (u * (2 * h + one // (k + 1))) >> w
        half_t = T >> 1
        i_val = (half_t * s1) >> w
        log_half = lg - eul
        k_val = inv_t + ((log_half * i_val) >> w) - (((T >> 2) * (s2 - 2 * ((eul * s1) >> w))) >> w)
    return _unfixed(i_val, w), _unfixed(k_val, w)


def _series_jy(order: int, t: mpf, bits: int) -> tuple[mpf, mpf | None]:
    """J_order(t) and, for order 0, Y0(t) from the power series."""
    w = bits + int(1.45 * float(t)) + 24
    one = 1 << w
    with mpmath.workprec(w + 20):
        T = _fixed(t, w)
        lg = _fixed(mpmath.log(t / 2) + mpmath.euler, w) if t > 0 else 0
        two_over_pi = mpmath.mpf(2) / mpmath.pi
    X = (T * T >> w) >> 2
    if order == 0:
        term = one
        s_j = one
        s_h = 0
        h = 0
        k = 0
        while True:
            k += 1
            term = ((term * X) >> w) // (k * k)
            if term == 0:
                break
            h += one // k
            if k % 2:
                s_j -= term
                s_h += (term * h) >> w
            else:
                s_j += term
                s_h -= (term * h) >> w
        j_val = _unfixed(s_j, w)
        if t == 0:
            return j_val, None
        y_fixed = ((lg * s_j) >> w) + s_h
        with mpmath.workprec(w):
            y_val = two_over_pi * _unfixed(y_fixed, w)
        return j_val, y_val
    u = one
    s1 = one
    k = 0
    while True:
        k += 1
        u = ((u * X) >> w) // (k * (k + 1))
        if u == 0:
            break
        s1 += -u if k % 2 else u
    return _unfixed(((T >> 1) * s1) >> w, w), None


def _hankel_sums(nu: int, t: mpf, bits: int) -> tuple[mpf, mpf]:
    """Partial sums (sum a_k u^k, sum (-1)^k a_k u^k) with u = 1/t, optimally truncated."""
    w = bits + 16
    one = 1 << w
    with mpmath.workprec(w + 20):
        U = _fixed(1 / t, w)
    c = one
    plus = one
    minus = one
    k = 0
    prev = one
    mu = 4 * nu * nu
    while True:
        k += 1
        c = (c * (mu - (2 * k - 1) ** 2) * U >> w) // (8 * k)
        if c == 0:
            break
        if abs(c) > abs(prev):
            if abs(prev) > (1 << 24):
                raise DivergenceError("asymptotic Bessel expansion used below its valid range")
            break
        prev = c
        plus += c
        minus += -c if k % 2 else c
    return _unfixed(plus, w), _unfixed(minus, w)


def _hankel_pq(nu: int, t: mpf, bits: int) -> tuple[mpf, mpf]:
    """P and Q of the Hankel expansion J = sqrt(2/(pi t)) (P cos w - Q sin w)."""
    w = bits + 16
    one = 1 << w
    with mpmath.workprec(w + 20):
        U = _fixed(1 / t, w)
    c = one
    p = one
    q = 0
    k = 0
    prev = one
    mu = 4 * nu * nu
    while True:
        k += 1
        c = (c * (mu - (2 * k - 1) ** 2) * U >> w) // (8 * k)
        if c == 0:
            break
        if abs(c) > abs(prev):
            if abs(prev) > (1 << 24):
                raise DivergenceError("asymptotic Bessel expansion used below its valid range")
            break
        prev = c
        # (-1)^floor(k/2)
        sign = -1 if (k // 2) % 2 else 1
        if k % 2 == 0:
            p += sign * c
        else:
            q += sign * c
    return _unfixed(p, w), _unfixed(q, w)


def _scale_sign(kind: str) -> int:
    return {"I": 1, "K": -1}.get(kind[0], 0)


def bessel_scaled(kind: str, t, ctx: PrecisionContext = DEFAULT_CTX, regime: str | None = None) -> tuple[mpf, int]:
    """Return (s, sigma) with kind(t) = s * exp(sigma * t).

    sigma is +1 for I, -1 for K and 0 for J, Y.  ``regime`` forces
    "series" or "asymptotic"; by default the crossover rule decides.
    """
    if kind not in KINDS:
        raise DomainError(f"unknown Bessel kind {kind!r}")
    with mpmath.workprec(ctx.work_bits + 16):
        t = to_mpf(t)
    if t < 0 or (t == 0 and kind in ("Y0", "K0", "K1")):
        raise DomainError(f"{kind} requires t > 0" if kind[0] in "YK" else f"{kind} requires t >= 0")
    sigma = _scale_sign(kind)
    bits = ctx.work_bits
    if regime is None:
        regime = "asymptotic" if t >= ctx.crossover else "series"
    order = int(kind[1])
    with mpmath.workprec(bits + 16):
        if regime == "series":
            if kind[0] in "IK":
                i_val, k_val = _series_ik(order, t, bits)
                val = i_val if kind[0] == "I" else k_val
                if sigma and t != 0:
                    val = val * mpmath.exp(-sigma * t)
                return +val, sigma
            j_val, y_val = _series_jy(order, t, bits)
            return +(j_val if kind[0] == "J" else y_val), 0
        if kind[0] == "K":
            plus, _ = _hankel_sums(order, t, bits)
            return mpmath.sqrt(mpmath.pi / (2 * t)) * plus, -1
        if kind[0] == "I":
            _, minus = _hankel_sums(order, t, bits)
            return minus / mpmath.sqrt(2 * mpmath.pi * t), 1
        p, q = _hankel_pq(order, t, bits)
        om = t - order * mpmath.pi / 2 - mpmath.pi / 4
        amp = mpmath.sqrt(2 / (mpmath.pi * t))
        if kind[0] == "J":
            return amp * (p * mpmath.cos(om) - q * mpmath.sin(om)), 0
        return amp * (p * mpmath.sin(om) + q * mpmath.cos(om)), 0


def bessel(kind: str, t, ctx: PrecisionContext = DEFAULT_CTX, regime: str | None = None) -> mpf:
    """Bessel function J0, Y0, I0, K0, J1, I1 or K1 at real t."""
    val, sigma = bessel_scaled(kind, t, ctx, regime)
    if sigma == 0:
        return val
    with mpmath.workprec(ctx.work_bits + 16):
        t = to_mpf(t)
    if sigma > 0 and t > _MAX_EXP_ARG:
        need = int(t / math.log(2)) + 1
        raise OverflowError(f"{kind}({t}) needs a binary exponent of about {need}; use bessel_scaled")
    with mpmath.workprec(ctx.work_bits + 16):
        return val * mpmath.exp(sigma * t)


def bessel_pair_scaled(family: str, t, ctx: PrecisionContext = DEFAULT_CTX) -> tuple[mpf, mpf]:
    """Order-0 pair sharing one series pass: (e^-t I0, e^t K0) or (J0, Y0)."""
    bits = ctx.work_bits
    with mpmath.workprec(bits + 16):
        t = to_mpf(t)
        if t >= ctx.crossover:
            if family == "IK":
                plus, minus = _hankel_sums(0, t, bits)
                return minus / mpmath.sqrt(2 * mpmath.pi * t), mpmath.sqrt(mpmath.pi / (2 * t)) * plus
            p, q = _hankel_pq(0, t, bits)
            om = t - mpmath.pi / 4
            amp = mpmath.sqrt(2 / (mpmath.pi * t))
            c, s = mpmath.cos(om), mpmath.sin(om)
            return amp * (p * c - q * s), amp * (p * s + q * c)
        if family == "IK":
            i_val, k_val = _series_ik(0, t, bits)
            e = mpmath.exp(t)
            return i_val / e, k_val * e
        j_val, y_val = _series_jy(0, t, bits)
        return +j_val, +y_val


def hankel1_0(x, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    with mpmath.workprec(ctx.work_bits + 16):
        x = to_mpf(x)
    if x <= 0:
        raise DomainError("hankel1_0 requires x > 0")
    j, y = bessel_pair_scaled("JY", x, ctx)
    return mpc(j, y)


# --------------------------------------------------------------------------
# generalized hypergeometric series


def hyp_pfq(upper: Sequence, lower: Sequence, x, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """pFq(upper; lower; x) by direct summation, |x| <= 1."""
    x = to_mpf(x) if isinstance(x, Fraction) else mpmath.mpmathify(x)
    if abs(x) > 1:
        raise DivergenceError("hyp_pfq: |x| > 1 requires analytic continuation")
    if abs(x) == 1:
        excess = sum(Fraction(b) for b in lower) - sum(Fraction(a) for a in upper)
        if excess <= 0:
            raise DivergenceError("hyp_pfq: |x| = 1 with non-positive parameter excess")
    dps = ctx.work_dps
    if abs(x) > mpf("0.9"):
        dps += 2 * ctx.series_guard
    with mpmath.workdps(dps):
        a = [to_mpf(Fraction(v)) for v in upper]
        b = [to_mpf(Fraction(v)) for v in lower]
        tiny = mpf(10) ** (-dps)
        total = mpf(1)
        term = mpf(1)
        k = 0
        small_run = 0
        while True:
            num = mpf(1)
            for ai in a:
                num *= ai + k
            den = mpf(k + 1)
            for bi in b:
                den *= bi + k
            if num == 0:
                break
            term = term * num / den * x
            total += term
            k += 1
            if abs(term) <= tiny * abs(total):
                small_run += 1
                if small_run >= 3:
                    break
            else:
                small_run = 0
            if k > 10**7:
                raise DivergenceError("hyp_pfq: series failed to converge")
        return +total


def domb(n: int) -> int:
    """Domb numbers sum_k C(n,k)^2 C(2n-2k,n-k) C(2k,k)."""
    c = math.comb
    return sum(c(n, k) ** 2 * c(2 * n - 2 * k, n - k) * c(2 * k, k) for k in range(n + 1))
