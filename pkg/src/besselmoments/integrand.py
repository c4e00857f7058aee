"""Products of Bessel functions and their integrals over (0, inf).

An :class:`Integrand` is a finite sum of terms

    coeff * prod_i  B_i(s_i t)^{e_i} * t^p

with B_i among J0, Y0, I0, K0, J1, I1, K1.  :func:`integrate` splits the
half line at T.  [0, T] is handled by tanh-sinh next to the origin and
Gauss-Legendre panels beyond.  When the integrand has not decayed by T,
the product of the large-argument expansions is formed as a sum of
exp(kappa t) t^q terms and every term is integrated in closed form
through an incomplete gamma function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import mpmath
from mpmath import mpc, mpf

from .quadrature import QuadratureError, adaptive_gl, gl_rule, pairwise_sum, tanh_sinh
from .specfun import (
    DEFAULT_CTX,
    DivergenceError,
    KINDS,
    PrecisionContext,
    bessel_pair_scaled,
    bessel_scaled,
    to_mpf,
)


@dataclass
class QuadratureReport:
    value: mpf
    abs_error_estimate: mpf
    segments: int
    accelerated: bool


def _exact(x):
    """Keep rationals exact so they hash and compare reliably."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return mpmath.mpmathify(x)


def _num(x):
    if isinstance(x, Fraction):
        return to_mpf(x)
    return x


@dataclass(frozen=True)
class Term:
    coeff: object
    factors: tuple  # ((kind, scale, exponent), ...) sorted
    power: int


def _normalize_factors(factors: Iterable) -> tuple:
    acc: dict = {}
    for kind, scale, e in factors:
        if kind not in KINDS:
            raise ValueError(f"unknown Bessel kind {kind!r}")
        scale = _exact(scale)
        if scale <= 0:
            raise ValueError("Bessel scales must be positive")
        acc[(kind, scale)] = acc.get((kind, scale), 0) + int(e)
    return tuple(sorted(((k, s, e) for (k, s), e in acc.items() if e), key=lambda f: (f[0], float(f[1]))))


class Integrand:
    """Finite sum of Bessel-product terms, immutable."""

    def __init__(self, terms: Iterable[Term] = ()):
        merged: dict = {}
        for term in terms:
            key = (_normalize_factors(term.factors), int(term.power))
            merged[key] = merged.get(key, 0) + _exact(term.coeff)
        self.terms = tuple(Term(c, f, p) for (f, p), c in merged.items() if c != 0)

    @classmethod
    def product(cls, exponents: dict, power: int = 0, coeff=1, scale=1) -> "Integrand":
        """coeff * prod kind(scale t)^e * t^power from a {kind: e} map."""
        return cls([Term(coeff, tuple((k, scale, e) for k, e in exponents.items()), power)])

    def __add__(self, other: "Integrand") -> "Integrand":
        return Integrand(self.terms + other.terms)

    def __sub__(self, other: "Integrand") -> "Integrand":
        return self + other.scaled(-1)

    def __neg__(self) -> "Integrand":
        return self.scaled(-1)

    def scaled(self, c) -> "Integrand":
        c = _exact(c)
        return Integrand(Term(t.coeff * c, t.factors, t.power) for t in self.terms)

    def __mul__(self, other):
        if not isinstance(other, Integrand):
            return self.scaled(other)
        out = []
        for a in self.terms:
            for b in other.terms:
                out.append(Term(a.coeff * b.coeff, a.factors + b.factors, a.power + b.power))
        return Integrand(out)

    __rmul__ = __mul__

    def times_power(self, k: int) -> "Integrand":
        return Integrand(Term(t.coeff, t.factors, t.power + k) for t in self.terms)

    def with_factor(self, kind: str, scale, exponent: int = 1) -> "Integrand":
        return Integrand(Term(t.coeff, t.factors + ((kind, scale, exponent),), t.power) for t in self.terms)

    def key(self) -> tuple:
        return tuple(sorted(((repr(t.coeff), tuple((k, repr(s), e) for k, s, e in t.factors), t.power) for t in self.terms)))

    def __repr__(self) -> str:
        parts = []
        for t in self.terms:
            fs = "*".join(f"{k}({s}t)^{e}" if s != 1 else f"{k}^{e}" for k, s, e in t.factors)
            parts.append(f"{t.coeff}*{fs}*t^{t.power}")
        return "Integrand(" + " + ".join(parts) + ")"

    # ------------------------------------------------------------------
    # pointwise evaluation

    def __call__(self, t, ctx: PrecisionContext = DEFAULT_CTX):
        return self.evaluate(t, ctx)

    def evaluate(self, t, ctx: PrecisionContext = DEFAULT_CTX):
        t = mpf(t)
        cache: dict = {}
        total = mpf(0)
        for term in self.terms:
            val = _num(term.coeff)
            expo = mpf(0)
            for kind, s, e in term.factors:
                v, sig = _bessel_cached(kind, s, t, ctx, cache)
                val *= v**e
                if sig:
                    expo += sig * e * _num(s)
            if term.power:
                val *= t**term.power
            if expo:
                val *= mpmath.exp(expo * t)
            total += val
        return total

    # ------------------------------------------------------------------
    # structural data

    def frequencies(self) -> tuple[mpf, mpf, mpf]:
        """(largest total oscillation frequency, smallest scale, largest scale)."""
        omega = mpf(0)
        smin = None
        smax = mpf(0)
        for term in self.terms:
            w = mpf(0)
            for kind, s, e in term.factors:
                sv = _num(s)
                if kind[0] in "JY":
                    w += abs(e) * sv
                smin = sv if smin is None else min(smin, sv)
                smax = max(smax, sv)
            omega = max(omega, w)
        return omega, (smin if smin is not None else mpf(1)), smax

    def origin_order(self) -> mpf:
        """Smallest power of t (ignoring logarithms) over all terms as t -> 0."""
        low = None
        for term in self.terms:
            p = term.power
            for kind, s, e in term.factors:
                if kind in ("J1", "I1"):
                    p += e
                elif kind == "K1":
                    p -= e
            low = p if low is None else min(low, p)
        return low if low is not None else 0


def _bessel_cached(kind: str, s, t: mpf, ctx: PrecisionContext, cache: dict):
    key = (kind, s)
    got = cache.get(key)
    if got is not None:
        return got
    arg = t * _num(s) if s != 1 else t
    if kind in ("I0", "K0", "J0", "Y0"):
        fam = "IK" if kind in ("I0", "K0") else "JY"
        a, b = bessel_pair_scaled(fam, arg, ctx)
        if fam == "IK":
            cache[("I0", s)] = (a, 1)
            cache[("K0", s)] = (b, -1)
        else:
            cache[("J0", s)] = (a, 0)
            cache[("Y0", s)] = (b, 0)
        return cache[key]
    got = bessel_scaled(kind, arg, ctx)
    cache[key] = got
    return got


# ----------------------------------------------------------------------
# large-t expansion of a product
#
# Every factor is written as  sum_components exp(kappa t) t^{-1/2} sum_j c_j t^{-j}.
# kappa is tracked exactly as integer multiples of (real, imaginary) unit
# rates per scale, so growth and decay of different factors cancel exactly.


def _hankel_a(nu: int, J: int) -> list:
    a = [mpf(1)]
    for k in range(1, J):
        a.append(a[-1] * (4 * nu * nu - (2 * k - 1) ** 2) / (8 * k))
    return a


def _factor_components(kind: str, s, J: int) -> list:
    """[(key, coeff list)] for one factor kind(s t)."""
    nu = int(kind[1])
    sv = _num(s)
    a = _hankel_a(nu, J)
    sinv = 1 / sv
    if kind[0] == "K":
        pre = mpmath.sqrt(mpmath.pi / (2 * sv))
        return [(((s, -1, 0),), [pre * a[j] * sinv**j for j in range(J)])]
    if kind[0] == "I":
        pre = 1 / mpmath.sqrt(2 * mpmath.pi * sv)
        return [(((s, 1, 0),), [pre * (-1) ** j * a[j] * sinv**j for j in range(J)])]
    amp = mpmath.sqrt(2 / (mpmath.pi * sv))
    phase = mpmath.expjpi(-(mpf(nu) / 2 + mpf(1) / 4))  # exp(-i(nu pi/2 + pi/4))
    ij = [mpc(1), mpc(0, 1), mpc(-1), mpc(0, -1)]
    h1 = [amp * phase * ij[j % 4] * a[j] * sinv**j for j in range(J)]
    h2 = [mpmath.conj(c) for c in h1]
    if kind[0] == "J":
        return [(((s, 0, 1),), [c / 2 for c in h1]), (((s, 0, -1),), [c / 2 for c in h2])]
    return [(((s, 0, 1),), [c / mpc(0, 2) for c in h1]), (((s, 0, -1),), [-c / mpc(0, 2) for c in h2])]


def _key_add(k1: tuple, k2: tuple, m2: int = 1) -> tuple:
    acc = {}
    for s, r, i in k1:
        acc[s] = (r, i)
    for s, r, i in k2:
        r0, i0 = acc.get(s, (0, 0))
        acc[s] = (r0 + m2 * r, i0 + m2 * i)
    return tuple(sorted(((s, r, i) for s, (r, i) in acc.items() if r or i), key=lambda x: float(x[0])))


def _conv(a: list, b: list, J: int) -> list:
    out = []
    for n in range(J):
        acc = 0
        for k in range(n + 1):
            acc += a[k] * b[n - k]
        out.append(acc)
    return out


def _series_power(c: list, e: int, J: int) -> list:
    out = None
    base = c
    while e:
        if e & 1:
            out = base if out is None else _conv(out, base, J)
        e >>= 1
        if e:
            base = _conv(base, base, J)
    return out


def _factor_power(kind: str, s, e: int, J: int) -> dict:
    comps = _factor_components(kind, s, J)
    if len(comps) == 1:
        (key, c), = comps
        return {tuple((sc, r * e, i * e) for sc, r, i in key): _series_power(c, e, J)}
    (ka, ca), (kb, cb) = comps
    pa = [None] * (e + 1)
    pb = [None] * (e + 1)
    pa[0] = pb[0] = [mpf(1)] + [mpf(0)] * (J - 1)
    for k in range(1, e + 1):
        pa[k] = ca if k == 1 else _conv(pa[k - 1], ca, J)
        pb[k] = cb if k == 1 else _conv(pb[k - 1], cb, J)
    out: dict = {}
    for k in range(e + 1):
        key = _key_add(tuple((sc, r * k, i * k) for sc, r, i in ka), tuple((sc, r * (e - k), i * (e - k)) for sc, r, i in kb))
        series = _conv(pa[k], pb[e - k], J)
        binom = math.comb(e, k)
        prev = out.get(key)
        new = [binom * x for x in series]
        out[key] = new if prev is None else [x + y for x, y in zip(prev, new)]
    return out


def _kappa(key: tuple) -> mpc:
    v = mpc(0)
    for s, r, i in key:
        v += _num(s) * mpc(r, i)
    return v


def expansion(f: Integrand, J: int) -> dict:
    """{key: {q: coefficient}} with f(t) ~ sum coefficient * exp(kappa t) t^q."""
    groups: dict = {}
    for term in f.terms:
        comp = {(): [mpf(1)] + [mpf(0)] * (J - 1)}
        nfac = 0
        for kind, s, e in term.factors:
            if e < 0:
                raise DivergenceError("negative Bessel exponents have no large-t expansion here")
            nfac += e
            fp = _factor_power(kind, s, e, J)
            new: dict = {}
            for k1, c1 in comp.items():
                for k2, c2 in fp.items():
                    k = _key_add(k1, k2)
                    ser = _conv(c1, c2, J)
                    prev = new.get(k)
                    new[k] = ser if prev is None else [x + y for x, y in zip(prev, ser)]
            comp = new
        coeff = _num(term.coeff)
        q0 = Fraction(term.power) - Fraction(nfac, 2)
        for key, ser in comp.items():
            g = groups.setdefault(key, {})
            for j, c in enumerate(ser):
                q = q0 - j
                g[q] = g.get(q, 0) + coeff * c
    return groups


def _significant(coeffs: dict, bits: int) -> dict:
    big = max((abs(c) for c in coeffs.values()), default=mpf(0))
    if big == 0:
        return {}
    cut = big * mpf(2) ** (-(bits // 2))
    return {q: c for q, c in coeffs.items() if abs(c) > cut}


def check_convergence(f: Integrand, ctx: PrecisionContext = DEFAULT_CTX) -> None:
    """Raise DivergenceError unless the integral over (0, inf) converges."""
    low = f.origin_order()
    if low <= -1:
        raise DivergenceError(f"integrand behaves like t^{low} (times logarithms) at 0; need an exponent > -1")
    with mpmath.workprec(ctx.work_bits):
        groups = expansion(f, 6)
        for key, coeffs in groups.items():
            coeffs = _significant(coeffs, ctx.work_bits)
            if not coeffs:
                continue
            kap = _kappa(key)
            qmax = max(coeffs)
            if kap.real > 0:
                raise DivergenceError(f"integrand grows like exp({mpmath.nstr(kap.real, 6)} t) at infinity")
            if kap.real == 0:
                if kap.imag == 0 and qmax >= -1:
                    raise DivergenceError(f"non-oscillatory part decays like t^{qmax}; need an exponent < -1")
                if kap.imag != 0 and qmax >= 0:
                    raise DivergenceError(f"oscillatory part decays like t^{qmax}; need an exponent < 0")


def _incgamma_chain(lam: mpc, T: mpf, qs: list) -> dict:
    """G(q) = int_T^inf exp(-lam t) t^q dt for q in an arithmetic chain of step 1."""
    qs = sorted(qs)
    out = {}
    lt = abs(lam) * T
    e = mpmath.exp(-lam * T)

    def direct(q):
        return lam ** (-q - 1) * mpmath.gammainc(to_mpf(q) + 1, lam * T)

    # stable directions: downward while |q+1| > |lam T|, upward while |q+1| < |lam T|
    lt = float(lt)
    anchor = min(range(len(qs)), key=lambda i: abs(abs(float(qs[i]) + 1) - lt))
    out[qs[anchor]] = direct(qs[anchor])
    for i in range(anchor - 1, -1, -1):
        q = qs[i]
        if abs(float(q) + 1) < lt:
            out[q] = direct(q)
        else:
            # G(q) = (lam G(q+1) - e T^{q+1}) / (q+1)
            out[q] = (lam * out[qs[i + 1]] - e * T ** to_mpf(q + 1)) / to_mpf(q + 1)
    for i in range(anchor + 1, len(qs)):
        q = qs[i]
        if abs(float(q)) > lt:
            out[q] = direct(q)
        else:
            # G(q) = (e T^q + q G(q-1)) / lam
            out[q] = (e * T ** to_mpf(q) + to_mpf(q) * out[qs[i - 1]]) / lam
    return out


def _tail_sum(groups: dict, T: mpf, jstop: int, regularize: bool, levels: list | None = None):
    """Sum the closed-form tail integrals of all terms of order <= jstop."""
    total = mpc(0)
    zero = mpf(2) ** (-mpmath.mp.prec + 12)
    # zero-frequency coefficients that cancel in exact arithmetic leave rounding residue
    cscale = max((abs(c) for cs in groups.values() for c in cs.values()), default=mpf(0))
    for key, coeffs in groups.items():
        kap = _kappa(key)
        qmax = max(coeffs)
        keep = {q: c for q, c in coeffs.items() if qmax - q <= jstop}
        if abs(kap) < zero:
            vals = {}
            for q, c in keep.items():
                if q == -1 or (q > -1 and not regularize):
                    if abs(c) > cscale * mpf(2) ** (-mpmath.mp.prec + 16):
                        raise DivergenceError(f"tail t^{q} is not integrable")
                    continue
                vals[q] = -c * T ** to_mpf(q + 1) / to_mpf(q + 1)
        else:
            if kap.real > 0:
                raise DivergenceError("exponentially growing tail")
            lam = -kap
            chains: dict = {}
            for q in keep:
                chains.setdefault(q - math.floor(q), []).append(q)
            vals = {}
            for chain in chains.values():
                gs = _incgamma_chain(lam, T, chain)
                for q in chain:
                    vals[q] = keep[q] * gs[q]
        for q, v in vals.items():
            total += v
            if levels is not None:
                j = int(qmax - q)
                levels[j] = max(levels[j], abs(v))
    return total


def asymptotic_tail(f: Integrand, T, ctx: PrecisionContext, tol, regularize: bool = False) -> tuple:
    """Closed-form integral of the large-t expansion of f over [T, inf).

    Returns (value, error estimate, terms used).  The number of terms
    grows until the contribution of the last orders falls below ``tol``,
    or stops at the smallest term once the expansion starts to diverge.
    ``regularize`` admits non-integrable power tails, continued
    analytically in the exponent.
    """
    T = mpf(T)
    bits = ctx.work_bits + 20
    J = max(ctx.tail_order, 24)
    with mpmath.workprec(bits):
        while True:
            groups = expansion(f, J)
            levels = [mpf(0)] * J
            total = _tail_sum(groups, T, J, regularize, levels)
            # orders are paired because many products have vanishing odd orders
            pairs = [max(levels[j], levels[j + 1]) for j in range(0, J - 1, 2)]
            kmin = min(range(len(pairs)), key=lambda k: pairs[k])
            if pairs[-1] <= tol:
                err = pairs[-1]
                break
            if kmin < len(pairs) - 2 or J >= 400:
                err = pairs[kmin]
                total = _tail_sum(groups, T, 2 * kmin + 1, regularize)
                break
            J *= 2
        scale = max(abs(total), max(levels))
        return total, err + scale * mpf(2) ** (-ctx.work_bits + 8), J


def asymptotic_value(f: Integrand, t, ctx: PrecisionContext, J: int = 40, zero_frequency_only: bool = False):
    """Evaluate the large-t expansion of f at t (for cross-checks and mean subtraction)."""
    t = mpf(t)
    with mpmath.workprec(ctx.work_bits + 20):
        total = mpc(0)
        for key, coeffs in expansion(f, J).items():
            kap = _kappa(key)
            if zero_frequency_only and abs(kap) > mpf(2) ** (-ctx.work_bits // 2):
                continue
            s = sum(c * t ** to_mpf(q) for q, c in coeffs.items())
            total += mpmath.exp(kap * t) * s
        return total


# ----------------------------------------------------------------------
# numeric part


def _gl_points(ctx: PrecisionContext) -> int:
    return int(0.6 * ctx.work_dps) + 4


def _decay_rate(f: Integrand, ctx: PrecisionContext) -> mpf:
    """Slowest exponential decay rate among the leading large-t components."""
    with mpmath.workprec(ctx.work_bits):
        groups = expansion(f, 4)
        rate = None
        for key, coeffs in groups.items():
            if not _significant(coeffs, ctx.work_bits):
                continue
            r = -_kappa(key).real
            rate = r if rate is None else min(rate, r)
        return rate if rate is not None else mpf(0)


def panel_edges(a, b, omega, rate, first=None) -> list:
    """Breakpoints on [a, b]: geometric growth capped by oscillation and decay scales."""
    a = mpf(a)
    b = mpf(b)
    cap = mpf(10) ** 9
    if omega > 0:
        cap = min(cap, 8 / omega)
    if rate > 0:
        cap = min(cap, 8 / rate)
    edges = [a]
    x = a
    if first is not None and first < b:
        x = mpf(first)
        edges.append(x)
    while x < b:
        w = min(max(x, mpf(1) / 4), cap)
        x = min(x + w, b)
        if b - x < w / 4:
            x = b
        edges.append(x)
    return edges


def integrate_range(f: Integrand, a, b, ctx: PrecisionContext, tol_rel=None, log_origin: bool = True):
    """Integrate f over [a, b] with a >= 0; returns (value, error, segments, scale)."""
    omega, _, _ = f.frequencies()
    rate = max(_decay_rate(f, ctx), mpf(0))
    bits = ctx.work_bits
    n = _gl_points(ctx)
    tol_rel = tol_rel if tol_rel is not None else mpf(10) ** (-(ctx.digits + 4))
    a = mpf(a)
    b = mpf(b)
    with mpmath.workprec(bits):
        g = lambda t: f.evaluate(t, ctx)
        t0 = None
        if a == 0:
            t0 = min(mpf(1), b)
            if omega > 0:
                t0 = min(t0, 4 / omega)
        edges = panel_edges(a, b, omega, rate, t0)
        wholes = []
        for i in range(len(edges) - 1):
            if i == 0 and a == 0:
                wholes.append(None)
            else:
                wholes.append(gl_rule(g, edges[i], edges[i + 1], n, bits))
        first = None
        if a == 0:
            first = tanh_sinh(g, edges[0], edges[1], mpf(10) ** (-(ctx.digits + 2)), bits)
        scale = sum(abs(w) for w in wholes if w is not None)
        if first is not None:
            scale += abs(first.value)
        if scale == 0:
            scale = mpf(1)
        tol_abs = tol_rel * scale
        if first is not None and first.error > tol_abs:
            first = tanh_sinh(g, edges[0], edges[1], tol_abs / 4, bits, max_level=12)
        parts = []
        err = mpf(0)
        segs = 0
        npan = len(edges) - 1
        for i in range(npan):
            if wholes[i] is None:
                parts.append(first.value)
                err += first.error
                segs += 1
                continue
            p = adaptive_gl(g, edges[i], edges[i + 1], tol_abs / npan, bits, n, whole=wholes[i])
            parts.append(p.value)
            err += p.error
            segs += p.segments
        return pairwise_sum(parts), err, segs, scale


def split_point(f: Integrand, ctx: PrecisionContext, shift=0) -> tuple[mpf, bool]:
    """(T, needs_tail): where the numeric range ends and whether a tail remains."""
    _, smin, _ = f.frequencies()
    t_asym = ctx.crossover / smin + shift
    rate = _decay_rate(f, ctx)
    if rate > 0:
        with mpmath.workprec(ctx.work_bits):
            t_dec = ((ctx.work_dps + 4) * mpmath.log(10) + 10) / rate
            # polynomial prefactors shift the cut a little
            qmax = max((max(c) for c in expansion(f, 2).values() if c), default=0)
            if qmax > 0:
                t_dec += float(qmax) * mpmath.log(max(t_dec, mpf(2))) / rate
            t_dec += shift
        if t_dec < t_asym:
            return t_dec, False
    return t_asym, True


def integrate(f: Integrand, ctx: PrecisionContext = DEFAULT_CTX, shift=0, tol_rel=None) -> QuadratureReport:
    """int_0^inf f(t) dt."""
    check_convergence(f, ctx)
    T, with_tail = split_point(f, ctx, shift)
    value, err, segs, scale = integrate_range(f, 0, T, ctx, tol_rel)
    if with_tail:
        tol = (tol_rel if tol_rel is not None else mpf(10) ** (-(ctx.digits + 4))) * scale
        tail, terr, _ = asymptotic_tail(f, T, ctx, tol)
        value = value + tail.real
        err += terr
    with ctx.workdps():
        return QuadratureReport(+mpf(value.real if isinstance(value, mpc) else value), err, segs, False)
