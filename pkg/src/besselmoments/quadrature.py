"""Quadrature primitives: tanh-sinh, adaptive Gauss-Legendre, Wynn epsilon.

Node tables are cached per (precision, level) and never mutated after
construction, so the cache is safe to share between callers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import mpmath
from mpmath import mpf

_TS_CACHE: dict[tuple[int, int], list[tuple[mpf, mpf]]] = {}
_GL_CACHE: dict[tuple[int, int], list[tuple[mpf, mpf]]] = {}


class QuadratureError(ArithmeticError):
    """Quadrature failed to reach the requested tolerance."""


@dataclass
class Partial:
    value: object
    error: mpf
    segments: int


def _ts_level(level: int, bits: int) -> list[tuple[mpf, mpf]]:
    """New tanh-sinh nodes of one level as (offset from endpoint, weight without h).

    Offsets s = 1 - |x| on [-1, 1] are formed directly so nodes next to an
    endpoint keep full relative precision.
    """
    key = (level, bits)
    got = _TS_CACHE.get(key)
    if got is not None:
        return got
    out = []
    with mpmath.workprec(bits + 20):
        h = mpf(2) ** (-level)
        half_pi = mpmath.pi / 2
        tiny = mpf(2) ** (-bits - 20)
        if level == 0:
            ks = range(0, 1 << 20)
        else:
            ks = range(1, 1 << 20, 2)
        for k in ks:
            u = k * h
            v = half_pi * mpmath.sinh(u)
            e2v = mpmath.exp(2 * v)
            s = 2 / (1 + e2v)
            w = half_pi * mpmath.cosh(u) * 4 * e2v / (1 + e2v) ** 2
            if w < tiny and s < tiny:
                break
            out.append((s, w))
    _TS_CACHE[key] = out
    return out


def tanh_sinh(f: Callable, a, b, tol, bits: int, max_level: int = 10, min_level: int = 3) -> Partial:
    """Integrate f over the finite interval [a, b].

    f is never evaluated at the endpoints, so integrable endpoint
    singularities (logarithms of the Bessel K0, Y0 kind) are fine.
    """
    a = mpf(a)
    b = mpf(b)
    half = (b - a) / 2
    raw = mpf(0)
    history = []
    with mpmath.workprec(bits):
        for level in range(max_level + 1):
            add = 0
            for s, w in _ts_level(level, bits):
                ds = half * s
                if s == 1:
                    add += w * f(a + half)
                else:
                    add += w * (f(a + ds) + f(b - ds))
            raw += add
            value = raw * half * mpf(2) ** (-level)
            history.append(value)
            if level >= min_level:
                e1 = abs(history[-1] - history[-2])
                e2 = abs(history[-2] - history[-3])
                if e2 > 0 and e1 < e2:
                    est = max(e1 * e1 / e2, abs(value) * mpf(2) ** (-bits + 12))
                else:
                    est = e1
                if e1 <= tol or (est <= tol and e1 * e1 <= tol * max(e2, tol)):
                    return Partial(value, max(est, abs(value) * mpf(2) ** (-bits + 12)), 1)
        raise QuadratureError(f"tanh-sinh did not converge on [{mpmath.nstr(a, 8)}, {mpmath.nstr(b, 8)}]: last change {mpmath.nstr(e1, 3)}")


def gauss_legendre_nodes(n: int, bits: int) -> list[tuple[mpf, mpf]]:
    key = (n, bits)
    got = _GL_CACHE.get(key)
    if got is not None:
        return got
    out = []
    with mpmath.workprec(bits + 30):
        eps = mpf(2) ** (-bits - 10)
        for i in range(1, n // 2 + 1):
            x = mpmath.cos(mpmath.pi * (i - mpf(1) / 4) / (n + mpf(1) / 2))
            for _ in range(100):
                p0, p1 = mpf(1), x
                for k in range(2, n + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < eps:
                    break
            p0, p1 = mpf(1), x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            w = 2 / ((1 - x * x) * dp * dp)
            out.append((x, w))
            out.append((-x, w))
        if n % 2:
            p0, p1 = mpf(1), mpf(0)
            for k in range(2, n + 1):
                p0, p1 = p1, (-(k - 1) * p0) / k
            # derivative of P_n at 0 via recurrence relation P_n' = n P_{n-1} / (1 - x^2) at x = 0
            dp = n * p0
            out.append((mpf(0), 2 / (dp * dp)))
    out.sort(key=lambda t: t[0])
    _GL_CACHE[key] = out
    return out


def gl_rule(f: Callable, a, b, n: int, bits: int):
    nodes = gauss_legendre_nodes(n, bits)
    mid = (a + b) / 2
    half = (b - a) / 2
    total = 0
    for x, w in nodes:
        total += w * f(mid + half * x)
    return total * half


def adaptive_gl(f: Callable, a, b, tol, bits: int, n: int, max_depth: int = 12, whole=None) -> Partial:
    """Bisection-adaptive Gauss-Legendre; error taken from coarse/fine disagreement."""
    a = mpf(a)
    b = mpf(b)
    with mpmath.workprec(bits):
        if whole is None:
            whole = gl_rule(f, a, b, n, bits)
        m = (a + b) / 2
        left = gl_rule(f, a, m, n, bits)
        right = gl_rule(f, m, b, n, bits)
        fine = left + right
        diff = abs(fine - whole)
        floor = abs(fine) * mpf(2) ** (-bits + 12)
        if diff <= tol or diff <= floor:
            return Partial(fine, max(diff, floor), 2)
        if max_depth == 0:
            raise QuadratureError(f"Gauss-Legendre subdivision limit reached on [{mpmath.nstr(a, 8)}, {mpmath.nstr(b, 8)}]")
        p = adaptive_gl(f, a, m, tol / 2, bits, n, max_depth - 1, left)
        q = adaptive_gl(f, m, b, tol / 2, bits, n, max_depth - 1, right)
        return Partial(p.value + q.value, p.error + q.error, p.segments + q.segments)


def pairwise_sum(values: Sequence):
    """Fixed-order tree reduction."""
    vals = list(values)
    if not vals:
        return mpf(0)
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


def wynn_epsilon(partial_sums: Sequence) -> list:
    """Even-column estimates of the epsilon table, one per available order.

    Entry k is the eps_{2k} extrapolation built from the last 2k+1 partial sums.
    """
    s = list(partial_sums)
    n = len(s)
    prev = [mpf(0)] * (n + 1)
    cur = list(s)
    estimates = [s[-1]]
    col = 0
    while len(cur) > 1:
        nxt = []
        for i in range(len(cur) - 1):
            d = cur[i + 1] - cur[i]
            if d == 0:
                nxt.append(mpmath.inf if col % 2 == 0 else prev[i + 1])
            else:
                nxt.append(prev[i + 1] + 1 / d)
        prev, cur = cur, nxt
        col += 1
        if col % 2 == 0:
            estimates.append(cur[-1])
    return estimates
