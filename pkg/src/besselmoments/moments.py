"""Bessel moments, Hankel-type transforms, sum rules and Parseval fusions.

    IKM(a, b; n) = int_0^inf I0(t)^a K0(t)^b t^n dt
    JYM(a, b; n) = int_0^inf J0(t)^a Y0(t)^b t^n dt
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath
from mpmath import mpc, mpf

from .integrand import (
    Integrand,
    QuadratureReport,
    Term,
    check_convergence,
    expansion,
    integrate,
    integrate_range,
    split_point,
    _gl_points,
)
from .quadrature import QuadratureError, adaptive_gl, gl_rule, pairwise_sum, tanh_sinh, wynn_epsilon
from .specfun import DEFAULT_CTX, DivergenceError, DomainError, PrecisionContext, to_mpf

__all__ = [
    "MomentSpec",
    "Integrand",
    "QuadratureReport",
    "AccelerationError",
    "ikm",
    "jym",
    "moment",
    "transform",
    "sum_rule",
    "bm_sequence",
    "parseval_fuse",
    "wick_check",
    "WICK_IDENTITIES",
    "memo_disabled",
    "clear_memo",
]


class AccelerationError(ArithmeticError):
    """Sequence acceleration of an oscillatory tail did not stabilize."""


@dataclass(frozen=True)
class MomentSpec:
    family: str  # "IKM" or "JYM"
    e1: int
    e2: int
    power: int

    def __post_init__(self) -> None:
        if self.family not in ("IKM", "JYM"):
            raise ValueError("family must be IKM or JYM")
        if min(self.e1, self.e2, self.power) < 0:
            raise ValueError("exponents must be non-negative")

    def integrand(self) -> Integrand:
        kinds = ("I0", "K0") if self.family == "IKM" else ("J0", "Y0")
        return Integrand.product({kinds[0]: self.e1, kinds[1]: self.e2}, self.power)

    def check(self, ctx: PrecisionContext = DEFAULT_CTX) -> None:
        """Raise DivergenceError (naming the failed condition) for divergent moments."""
        if self.e1 + self.e2 == 0:
            raise DivergenceError(f"{self}: no Bessel factor, t^{self.power} is not integrable")
        try:
            check_convergence(self.integrand(), ctx)
        except DivergenceError as exc:
            raise DivergenceError(f"{self}: {exc}") from None

    def __str__(self) -> str:
        return f"{self.family}({self.e1},{self.e2};{self.power})"


# ----------------------------------------------------------------------
# memo cache

_MEMO: dict = {}
_MEMO_ON = [True]


@contextmanager
def memo_disabled():
    prev = _MEMO_ON[0]
    _MEMO_ON[0] = False
    try:
        yield
    finally:
        _MEMO_ON[0] = prev


def clear_memo() -> None:
    _MEMO.clear()


def _memo(key, compute: Callable):
    if not _MEMO_ON[0]:
        return compute()
    got = _MEMO.get(key)
    if got is None:
        got = compute()
        _MEMO[key] = got
    return got


# ----------------------------------------------------------------------
# moments


def moment(f: Integrand, ctx: PrecisionContext = DEFAULT_CTX, shift=0) -> QuadratureReport:
    """int_0^inf f(t) dt for any convergent Bessel-product integrand."""
    return _memo(("moment", f.key(), ctx, str(shift)), lambda: integrate(f, ctx, shift))


def ikm(a: int, b: int, n: int, ctx: PrecisionContext = DEFAULT_CTX, shift=0) -> QuadratureReport:
    spec = MomentSpec("IKM", a, b, n)
    spec.check(ctx)
    return moment(spec.integrand(), ctx, shift)


def jym(alpha: int, beta: int, nu: int, ctx: PrecisionContext = DEFAULT_CTX, tail: str = "asymptotic", shift=0) -> QuadratureReport:
    """JYM moment.  ``tail`` selects the treatment of [T, inf):

    "asymptotic" integrates the large-t expansion in closed form;
    "wynn" sums panels of width pi/2 and extrapolates with the epsilon
    algorithm after removing the non-oscillatory part analytically.
    """
    spec = MomentSpec("JYM", alpha, beta, nu)
    spec.check(ctx)
    f = spec.integrand()
    if tail == "asymptotic":
        return moment(f, ctx, shift)
    if tail != "wynn":
        raise ValueError("tail must be 'asymptotic' or 'wynn'")
    return _memo(("wynn", f.key(), ctx, str(shift)), lambda: _integrate_wynn(f, ctx, shift))


def _zero_frequency_part(f: Integrand, ctx: PrecisionContext, J: int = 48) -> dict:
    with mpmath.workprec(ctx.work_bits + 20):
        return {q: c.real if isinstance(c, mpc) else c for q, c in expansion(f, J).get((), {}).items()}


def _integrate_wynn(f: Integrand, ctx: PrecisionContext, shift=0, step=None, max_panels: int = 120) -> QuadratureReport:
    T, _ = split_point(f, ctx, shift)
    head, err, segs, scale = integrate_range(f, 0, T, ctx)
    bits = ctx.work_bits
    n = _gl_points(ctx)
    with mpmath.workprec(bits):
        step = mpmath.pi / 2 if step is None else mpf(step)
        mean = _zero_frequency_part(f, ctx)
        mean_tail = mpf(0)
        for q, c in mean.items():
            if q >= -1:
                raise DivergenceError("non-oscillatory tail is not integrable")
            mean_tail += -c * T ** to_mpf(q + 1) / to_mpf(q + 1)

        def g(t):
            v = f.evaluate(t, ctx)
            for q, c in mean.items():
                v -= c * t ** to_mpf(q)
            return v

        tol = mpf(10) ** (-(ctx.digits // 2 + 2)) * scale
        partial = []
        acc = mpf(0)
        history = []
        for k in range(max_panels):
            a = T + k * step
            p = adaptive_gl(g, a, a + step, tol / 100, bits, n)
            acc += p.value
            segs += p.segments
            partial.append(acc)
            if len(partial) >= 7:
                history.append(wynn_epsilon(partial[-min(len(partial), 41):])[-1])
            if len(history) >= 3:
                a1, a2, a3 = history[-3:]
                spread = max(abs(a1 - a2), abs(a2 - a3))
                if spread <= tol:
                    total = head + a3 + mean_tail
                    with ctx.workdps():
                        return QuadratureReport(+total, err + spread, segs, True)
        raise AccelerationError(f"epsilon extrapolation did not stabilize within {max_panels} panels of width {mpmath.nstr(step, 6)}")


# ----------------------------------------------------------------------
# transforms

_KERNELS = {"J": "J0", "Y": "Y0", "K": "K0", "I": "I0"}


def transform_integrand(kernel: str, x, f: Integrand) -> Integrand:
    if kernel not in _KERNELS:
        raise ValueError(f"kernel must be one of {sorted(_KERNELS)}")
    return f.with_factor(_KERNELS[kernel], x).times_power(1)


def transform(kernel: str, x, f: Integrand, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """int_0^inf kernel(x t) f(t) t dt for kernel in J, Y, K, I."""
    if isinstance(x, (int, Fraction, str)):
        x = Fraction(x)
    if x <= 0:
        if x == 0 and kernel in ("J", "I"):
            return moment(f.times_power(1), ctx).value
        raise DomainError("transform requires x > 0")
    g = transform_integrand(kernel, x, f)
    check_convergence(g, ctx)
    if kernel == "J" and _is_oscillatory_power(f):
        wmin = _min_frequency(f)
        if wmin is not None and to_mpf(x) < wmin / 2:
            return small_x_series(f, ctx).evaluate(x)
    return moment(g, ctx).value


def _is_oscillatory_power(f: Integrand) -> bool:
    return all(k[0] == "J" or k[0] == "Y" for t in f.terms for k, _, _ in t.factors)


def _min_frequency(f: Integrand):
    """Smallest nonzero large-t frequency of f, None if a zero frequency is present."""
    with mpmath.workprec(64):
        freqs = []
        for key, coeffs in expansion(f, 3).items():
            if not any(abs(c) > mpf(10) ** -12 for c in coeffs.values()):
                continue
            w = abs(sum(to_mpf(s) * i for s, r, i in key)) if key else mpf(0)
            if w == 0:
                return None
            freqs.append(w)
        return min(freqs) if freqs else None


class SmallXSeries:
    """J-transform of an oscillatory f near x = 0 from its regularized moments.

    sum_k (-x^2/4)^k / (k!)^2 * m_k,  m_k = regularized int_0^inf f t^{2k+1} dt.
    Valid while x stays below the smallest frequency of f.
    """

    def __init__(self, f: Integrand, ctx: PrecisionContext, radius):
        self.f = f
        self.ctx = ctx
        self.radius = mpf(radius)
        self.moments: list = []

    def _moment(self, k: int):
        while len(self.moments) <= k:
            j = len(self.moments)
            self.moments.append(_regularized_moment(self.f.times_power(2 * j + 1), self.ctx))
        return self.moments[k]

    def evaluate(self, x):
        ctx = self.ctx
        with mpmath.workprec(ctx.work_bits):
            x = to_mpf(x)
            u = -x * x / 4
            total = mpf(0)
            term_scale = mpf(1)
            eps = mpf(10) ** (-(ctx.digits + 2))
            small = 0
            for k in range(400):
                if k:
                    term_scale = term_scale * u / (k * k)
                term = term_scale * self._moment(k)
                total += term
                if abs(term) <= eps * abs(total):
                    small += 1
                    if small >= 3:
                        return total
                else:
                    small = 0
            raise QuadratureError("small-x series did not converge")


def _regularized_moment(f: Integrand, ctx: PrecisionContext):
    from .integrand import asymptotic_tail

    T, _ = split_point(f, ctx)
    head, _, _, scale = integrate_range(f, 0, T, ctx)
    tail, _, _ = asymptotic_tail(f, T, ctx, mpf(10) ** (-(ctx.digits + 4)) * scale, regularize=True)
    return head + tail.real


_SERIES_CACHE: dict = {}


def small_x_series(f: Integrand, ctx: PrecisionContext) -> SmallXSeries:
    key = (f.key(), ctx)
    got = _SERIES_CACHE.get(key)
    if got is None:
        got = SmallXSeries(f, ctx, _min_frequency(f))
        _SERIES_CACHE[key] = got
    return got


class LargeXSeries:
    """J- or Y-transform of sum c I0^a K0^b at large x.

    The logarithmic terms of the small-t expansion of f determine the
    transform through the Mellin transform of the kernel; the resulting
    series in x^-2 converges for x beyond the number of Bessel factors.
    """

    def __init__(self, f: Integrand, kernel: str, ctx: PrecisionContext, K: int | None = None):
        if kernel not in ("J", "Y"):
            raise ValueError("large-x series only for J and Y kernels")
        self.kernel = kernel
        self.ctx = ctx
        nmax = 0
        for t in f.terms:
            if t.power != 0 or any(k not in ("I0", "K0") or s != 1 for k, s, _ in t.factors):
                raise ValueError("large-x series needs I0/K0 products at unit scale without powers of t")
            nmax = max(nmax, sum(e for _, _, e in t.factors))
        self.radius = nmax
        self.K = K if K is not None else int(1.2 * ctx.work_dps) + 20
        with mpmath.workprec(ctx.work_bits + 30):
            self.coeffs = self._small_t(f)
            self.taylor = [self._mellin_taylor(k) for k in range(self.K)]

    def _small_t(self, f: Integrand) -> list:
        K = self.K
        gam = mpmath.euler
        ln2 = mpmath.log(2)
        d = [mpf(1)]
        for k in range(1, K):
            d.append(d[-1] / (4 * k * k))
        harm = [mpf(0)]
        for k in range(1, K):
            harm.append(harm[-1] + mpf(1) / k)
        i0 = [[d[k]] for k in range(K)]
        k0 = [[d[k] * (ln2 - gam + harm[k]), -d[k]] for k in range(K)]
        total = [[] for _ in range(K)]
        for term in f.terms:
            cur = [[mpf(1)]] + [[] for _ in range(K - 1)]
            for kind, _, e in term.factors:
                base = i0 if kind == "I0" else k0
                for _ in range(e):
                    cur = _logseries_mul(cur, base, K)
            c = to_mpf(term.coeff) if isinstance(term.coeff, Fraction) else term.coeff
            for k in range(K):
                for j, v in enumerate(cur[k]):
                    while len(total[k]) <= j:
                        total[k].append(mpf(0))
                    total[k][j] += c * v
        return total

    def _mellin_taylor(self, k: int) -> list:
        """Taylor coefficients in eps of the kernel's Mellin factor at s = 2k + 2 + eps."""
        jmax = max(len(self.coeffs[k]), 1)
        # log Gamma(k + 1 + eps/2)
        lg = [mpmath.loggamma(k + 1), mpmath.psi(0, k + 1) / 2]
        for m in range(2, jmax + 1):
            lg.append(mpmath.psi(m - 1, k + 1) / (mpmath.factorial(m) * 2**m))
        ln2 = mpmath.log(2)
        lg[1] += ln2  # 2^{eps} factor
        # the Gamma factor appears squared
        log_series = [2 * c for c in lg]
        log_series[1] -= ln2
        expo = _exp_series(log_series, jmax + 1)
        half_pi = mpmath.pi / 2
        if self.kernel == "J":
            trig = [(-1) ** ((m - 1) // 2) * half_pi**m / mpmath.factorial(m) if m % 2 else mpf(0) for m in range(jmax + 1)]
            sign = -(-1) ** k
        else:
            trig = [(-1) ** (m // 2) * half_pi**m / mpmath.factorial(m) if m % 2 == 0 else mpf(0) for m in range(jmax + 1)]
            sign = (-1) ** k
        series = _mul_series(expo, trig, jmax + 1)
        pre = sign * mpf(2) ** (2 * k + 1) / mpmath.pi
        return [pre * c for c in series]

    def evaluate(self, x):
        with mpmath.workprec(self.ctx.work_bits + 30):
            x = to_mpf(x)
            if x <= self.radius:
                raise DomainError(f"large-x series needs x > {self.radius}")
            lx = mpmath.log(x)
            x2 = 1 / (x * x)
            total = mpf(0)
            xp = x2
            eps = mpf(10) ** (-(self.ctx.digits + 4))
            for k in range(self.K):
                ck = self.coeffs[k]
                tk = self.taylor[k]
                acc = mpf(0)
                for j, c in enumerate(ck):
                    if c == 0:
                        continue
                    # j! [eps^j] (B(eps) exp(-eps log x))
                    inner = mpf(0)
                    for i in range(j + 1):
                        if i < len(tk):
                            inner += tk[i] * (-lx) ** (j - i) / mpmath.factorial(j - i)
                    acc += c * mpmath.factorial(j) * inner
                term = acc * xp
                total += term
                xp *= x2
                if k > 4 and abs(term) < eps * abs(total):
                    break
            return total


def _logseries_mul(a: list, b: list, K: int) -> list:
    out = [[] for _ in range(K)]
    for k1 in range(K):
        if not a[k1]:
            continue
        for k2 in range(K - k1):
            if not b[k2]:
                continue
            tgt = out[k1 + k2]
            for j1, u in enumerate(a[k1]):
                for j2, v in enumerate(b[k2]):
                    while len(tgt) <= j1 + j2:
                        tgt.append(mpf(0))
                    tgt[j1 + j2] += u * v
    return out


def _mul_series(a: list, b: list, n: int) -> list:
    return [sum(a[i] * b[m - i] for i in range(m + 1) if i < len(a) and m - i < len(b)) for m in range(n)]


def _exp_series(c: list, n: int) -> list:
    """exp of a power series c[0] + c[1] e + ..."""
    out = [mpmath.exp(c[0])] + [mpf(0)] * (n - 1)
    # f' = c' f
    for m in range(1, n):
        acc = mpf(0)
        for k in range(1, m + 1):
            if k < len(c):
                acc += k * c[k] * out[m - k]
        out[m] = acc / m
    return out


_LARGE_CACHE: dict = {}


def large_x_series(f: Integrand, kernel: str, ctx: PrecisionContext) -> LargeXSeries:
    key = (f.key(), kernel, ctx)
    got = _LARGE_CACHE.get(key)
    if got is None:
        got = LargeXSeries(f, kernel, ctx)
        _LARGE_CACHE[key] = got
    return got


# ----------------------------------------------------------------------
# sum rules


def _sum_rule_integrand(m: int, n: int, part: str) -> Integrand:
    """2 Re or 2 Im of (pi I0 + i K0)^m K0^m t^n as an exact combination of IKM terms."""
    terms = []
    for k in range(m + 1):
        r = m - k  # power of i K0
        if part == "re" and r % 2:
            continue
        if part == "im" and r % 2 == 0:
            continue
        sign = (-1) ** (r // 2)
        terms.append((k, 2 * m - k, 2 * math.comb(m, k) * sign))
    out = Integrand()
    for k, b, c in terms:
        pik = mpmath.pi**k
        out = out + Integrand.product({"I0": k, "K0": b}, n, coeff=c * pik if k else c)
    return out


def sum_rule(m: int, n: int, branch: str, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """int 2 Re[(pi I0 + i K0)^m] K0^m t^n dt (even) or the 2 Im version (odd); both vanish."""
    if branch == "even_combination":
        if not (m > 1 and n >= 0 and (m - n) % 2 == 0 and (m - n) // 2 > 0):
            raise ValueError("even branch needs m > 1, n >= 0 and (m - n)/2 a positive integer")
        part = "re"
    elif branch == "odd_combination":
        if not (m > 0 and n >= 0 and (m - n - 1) % 2 == 0 and (m - n - 1) // 2 > 0):
            raise ValueError("odd branch needs m > 0, n >= 0 and (m - n - 1)/2 a positive integer")
        part = "im"
    else:
        raise ValueError("branch must be even_combination or odd_combination")
    with mpmath.workprec(ctx.work_bits + 20):
        f = _sum_rule_integrand(m, n, part)
        return moment(f, ctx).value


def bm_sequence(m: int, n: int, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """2^(1+2(n-1)(1-(-1)^m)) / pi^(m+1) * int 2 Im[(pi I0 + i K0)^m] K0^m (2t)^(2n+m-3) dt.

    These evaluate to positive integers.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    p = 2 * n + m - 3
    with mpmath.workprec(ctx.work_bits + 20):
        f = _sum_rule_integrand(m, p, "im")
        check_convergence(f, ctx)
        val = moment(f, ctx).value
        pre = mpf(2) ** (1 + 2 * (n - 1) * (1 - (-1) ** m)) / mpmath.pi ** (m + 1) * mpf(2) ** p
        with ctx.workdps():
            return +(pre * val)


# ----------------------------------------------------------------------
# Parseval fusion


def _inner_ctx(ctx: PrecisionContext) -> PrecisionContext:
    return PrecisionContext(max(16, ctx.digits // 2 + 4), ctx.series_guard, ctx.tail_order)


def _support_and_breaks(f: Integrand):
    """For a J0/Y0 product: (support edge, sorted singular points of its transform)."""
    edge = 0
    freqs = set()
    with mpmath.workprec(64):
        for key, coeffs in expansion(f, 2).items():
            w = abs(sum(to_mpf(s) * i for s, r, i in key)) if key else mpf(0)
            freqs.add(float(w))
    for t in f.terms:
        edge = max(edge, sum(e for _, _, e in t.factors))
    return edge, sorted(w for w in freqs if w > 0)


def parseval_fuse(fa: Integrand, fb: Integrand, ctx: PrecisionContext = DEFAULT_CTX, kernels: tuple = ("J", "J")) -> QuadratureReport:
    """int_0^inf Ha(x) Hb(x) x dx with H the kernel transforms of fa and fb.

    With two J kernels this equals int_0^inf fa(t) fb(t) t dt.  Inner
    transforms run at reduced precision.
    """
    key = ("parseval", fa.key(), fb.key(), kernels, ctx)
    return _memo(key, lambda: _parseval(fa, fb, ctx, kernels))


def _parseval(fa: Integrand, fb: Integrand, ctx: PrecisionContext, kernels: tuple) -> QuadratureReport:
    ictx = _inner_ctx(ctx)
    bits = ictx.work_bits
    tol = mpf(10) ** (-(ictx.digits - 2))
    osc = _is_oscillatory_power(fa) and _is_oscillatory_power(fb)
    segs = 0
    with mpmath.workprec(bits):
        if osc:
            if kernels != ("J", "J"):
                raise ValueError("oscillatory fusions are supported with J kernels only")
            ea, ba = _support_and_breaks(fa)
            eb, bb = _support_and_breaks(fb)
            edge = min(ea, eb)
            points = sorted({0.0, float(edge)} | {w for w in ba + bb if 0 < w < edge})
            wmin = min(_min_frequency(fa) or mpf(edge), _min_frequency(fb) or mpf(edge))
            cut = mpf(wmin) / 2

            singular = [mpf(w) for w in points[1:]]
            guard = mpf(2) ** (-bits + 16)

            def outer(x):
                # nodes that round onto a resonance carry negligible weight
                if any(abs(x - w) <= guard * w for w in singular):
                    return mpf(0)
                return transform("J", x, fa, ictx) * transform("J", x, fb, ictx) * x

            parts = []
            err = mpf(0)
            # [0, cut] through the Taylor route, smooth there
            p = adaptive_gl(outer, 0, cut, tol, bits, _gl_points(ictx))
            parts.append(p.value)
            err += p.error
            segs += p.segments
            lo = cut
            for hi in points[1:]:
                hi = mpf(hi)
                p = tanh_sinh(outer, lo, hi, tol, bits, max_level=9)
                parts.append(p.value)
                err += p.error
                segs += p.segments
                lo = hi
            total = pairwise_sum(parts)
        else:
            ha = large_x_series(fa, kernels[0], ictx)
            hb = large_x_series(fb, kernels[1], ictx)
            X = mpf(2 * max(ha.radius, hb.radius))

            def outer(x):
                return transform(kernels[0], x, fa, ictx) * transform(kernels[1], x, fb, ictx) * x

            def far(u):
                x = X / u
                return ha.evaluate(x) * hb.evaluate(x) * x * X / (u * u)

            parts = []
            err = mpf(0)
            p = tanh_sinh(outer, 0, 1, tol, bits, max_level=9)
            parts.append(p.value)
            err += p.error
            segs += p.segments
            a = mpf(1)
            while a < X:
                b = min(a + 1, X)
                p = adaptive_gl(outer, a, b, tol, bits, _gl_points(ictx))
                parts.append(p.value)
                err += p.error
                segs += p.segments
                a = b
            p = tanh_sinh(far, 0, 1, tol, bits, max_level=9)
            parts.append(p.value)
            err += p.error
            segs += p.segments
            total = pairwise_sum(parts)
    with ctx.workdps():
        return QuadratureReport(+total, err, segs, False)


# ----------------------------------------------------------------------
# Wick-rotation identities


def _P(exps: dict, power: int = 1, coeff=1) -> Integrand:
    return Integrand.product(exps, power, coeff)


def _wick_table() -> dict:
    pi = mpmath.pi  # lazy constant, evaluated at the caller's precision
    J3 = _P({"J0": 3}, 0)
    J4 = _P({"J0": 4}, 0)
    IKK = _P({"I0": 1, "K0": 2}, 0)
    IKKK = _P({"I0": 1, "K0": 3}, 0)
    KKK = _P({"K0": 3}, 0)

    def jy(exps, coeff=1):
        return _P(exps, 0, coeff)

    table = {
        "IIKKKK_JJJJJJ": (
            None,
            lambda x, c: (ikm(2, 4, 1, c).value, pi**4 / 30 * jym(6, 0, 1, c).value),
        ),
        "IKKKKK_JJJJJY": (
            None,
            lambda x, c: (ikm(1, 5, 1, c).value, -(pi**5) / 12 * jym(5, 1, 1, c).value),
        ),
        "IIKK_JJJJ": (
            (0, 1, False),
            lambda x, c: (transform("I", x, IKK, c), pi**2 / 6 * transform("J", x, J3, c)),
        ),
        "IKKK_JY": (
            (0, 3, False),
            lambda x, c: (
                transform("I", x, KKK, c),
                -(pi**3) / 8 * transform("J", x, jy({"J0": 2, "Y0": 1}, 3) - jy({"Y0": 3}), c),
            ),
        ),
        "KIKK_JY": (
            (0, 3, True),
            lambda x, c: (
                3 * transform("K", x, IKK, c),
                -(pi**3) / 8 * transform("J", x, jy({"J0": 2, "Y0": 1}, 3) + jy({"Y0": 3}), c)
                - pi**3 / 4 * transform("Y", x, J3, c),
            ),
        ),
        "IKM261_Wick": (
            None,
            lambda x, c: (
                (2 / pi) ** 6 * ikm(2, 6, 1, c).value,
                -mpf(8) / 7 * moment(_P({"J0": 8}) - _P({"J0": 6, "Y0": 2}, 1, 7), c).value,
            ),
        ),
        "IKM441_Wick": (
            None,
            lambda x, c: (
                (2 / pi) ** 4 * ikm(4, 4, 1, c).value,
                -mpf(4) / 5 * moment(_P({"J0": 8}) - _P({"J0": 6, "Y0": 2}, 1, 5), c).value,
            ),
        ),
        "JY_1_10_5": (
            None,
            lambda x, c: (
                jym(4, 4, 1, c).value,
                -mpf(1) / 5 * moment(_P({"J0": 8}) - _P({"J0": 6, "Y0": 2}, 1, 10), c).value,
            ),
        ),
        "JJJJ_JJYY": (
            (0, 2, True),
            lambda x, c: (transform("J", x, J4, c), 3 * transform("J", x, jy({"J0": 2, "Y0": 2}), c)),
        ),
        "IIKKK_JJJJY": (
            (0, 2, True),
            lambda x, c: (
                (2 / pi) ** 3 * transform("I", x, IKKK, c),
                -2 * transform("J", x, jy({"J0": 3, "Y0": 1}), c),
            ),
        ),
    }
    return table


WICK_IDENTITIES = (
    "IIKKKK_JJJJJJ",
    "IKKKKK_JJJJJY",
    "IIKK_JJJJ",
    "IKKK_JY",
    "KIKK_JY",
    "IKM261_Wick",
    "IKM441_Wick",
    "JY_1_10_5",
    "JJJJ_JJYY",
    "IIKKK_JJJJY",
)


def wick_check(identity: str, sample_x=None, ctx: PrecisionContext = DEFAULT_CTX) -> tuple:
    """(lhs, rhs) of a Wick-rotation identity, evaluated by separate quadratures.

    Identities with an x argument take ``sample_x`` inside their range;
    the others ignore it.
    """
    table = _wick_table()
    if identity not in table:
        raise KeyError(f"unknown identity {identity!r}; known: {', '.join(WICK_IDENTITIES)}")
    rng, fn = table[identity]
    if rng is not None:
        if sample_x is None:
            raise DomainError(f"{identity} needs a sample point")
        lo, hi, closed = rng
        x = Fraction(sample_x) if isinstance(sample_x, (int, str, Fraction)) else sample_x
        inside = lo < x < hi or (closed and x == hi)
        if identity == "IIKK_JJJJ" or identity in ("JJJJ_JJYY", "IIKKK_JJJJY"):
            inside = inside or x == 0
        if not inside:
            raise DomainError(f"{identity} holds for x in [{lo}, {hi}{']' if closed else ')'}; got {x}")
        sample_x = x
    with mpmath.workprec(ctx.work_bits + 10):
        lhs, rhs = fn(sample_x, ctx)
    return +lhs, +rhs
