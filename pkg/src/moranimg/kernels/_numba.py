"""numba-compiled interval kernels; lane-for-lane identical to ``_numpy``."""

from __future__ import annotations

import math

import numpy as np
from numba import njit

NAME = "numba"

_SPLITTER = 134217729.0
_TINY = 1e-290
_HALF_PI = math.pi / 2
_TWO_PI = 2 * math.pi

_jit = njit(cache=True, nogil=True)


@_jit
def _down(v, err):
    if err >= 0:
        return v
    return np.nextafter(v, -np.inf)


@_jit
def _up(v, err):
    if err <= 0:
        return v
    return np.nextafter(v, np.inf)


@_jit
def _lower(v):
    # libm results are trusted to 1 ulp; step 2 for headroom
    return np.nextafter(np.nextafter(v, -np.inf), -np.inf)


@_jit
def _upper(v):
    return np.nextafter(np.nextafter(v, np.inf), np.inf)


@_jit
def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


@_jit
def _two_prod(a, b):
    p = a * b
    c = _SPLITTER * a
    ah = c - (c - a)
    al = a - ah
    c = _SPLITTER * b
    bh = c - (c - b)
    bl = b - bh
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    if abs(p) < _TINY and a != 0 and b != 0:
        err = np.nan
    return p, err


@_jit
def _mul1(alo, ahi, blo, bhi):
    p, e = _two_prod(alo, blo)
    lo = _down(p, e)
    hi = _up(p, e)
    p, e = _two_prod(alo, bhi)
    lo = min(lo, _down(p, e))
    hi = max(hi, _up(p, e))
    p, e = _two_prod(ahi, blo)
    lo = min(lo, _down(p, e))
    hi = max(hi, _up(p, e))
    p, e = _two_prod(ahi, bhi)
    lo = min(lo, _down(p, e))
    hi = max(hi, _up(p, e))
    if math.isnan(p) or math.isnan(alo) or math.isnan(blo):
        return np.nan, np.nan
    return lo, hi


@_jit
def _quot(a, b):
    q = a / b
    p, e = _two_prod(q, b)
    if p == a and e == 0:
        return q, q
    return np.nextafter(q, -np.inf), np.nextafter(q, np.inf)


@_jit
def _div1(alo, ahi, blo, bhi):
    if not (blo > 0 or bhi < 0):
        return np.nan, np.nan
    l1, h1 = _quot(alo, blo)
    l2, h2 = _quot(alo, bhi)
    l3, h3 = _quot(ahi, blo)
    l4, h4 = _quot(ahi, bhi)
    return min(min(l1, l2), min(l3, l4)), max(max(h1, h2), max(h3, h4))


@_jit
def add(alo, ahi, blo, bhi):
    n = alo.size
    lo = np.empty(n)
    hi = np.empty(n)
    for i in range(n):
        s, e = _two_sum(alo[i], blo[i])
        lo[i] = _down(s, e)
        s, e = _two_sum(ahi[i], bhi[i])
        hi[i] = _up(s, e)
    return lo, hi


@_jit
def sub(alo, ahi, blo, bhi):
    n = alo.size
    lo = np.empty(n)
    hi = np.empty(n)
    for i in range(n):
        s, e = _two_sum(alo[i], -bhi[i])
        lo[i] = _down(s, e)
        s, e = _two_sum(ahi[i], -blo[i])
        hi[i] = _up(s, e)
    return lo, hi


@_jit
def mul(alo, ahi, blo, bhi):
    n = alo.size
    lo = np.empty(n)
    hi = np.empty(n)
    for i in range(n):
        lo[i], hi[i] = _mul1(alo[i], ahi[i], blo[i], bhi[i])
    return lo, hi


@_jit
def div(alo, ahi, blo, bhi):
    n = alo.size
    lo = np.empty(n)
    hi = np.empty(n)
    for i in range(n):
        lo[i], hi[i] = _div1(alo[i], ahi[i], blo[i], bhi[i])
    return lo, hi


@_jit
def _pow_pos(b, m):
    lo = 1.0
    hi = 1.0
    for _ in range(m):
        p, e = _two_prod(lo, b)
        lo = _down(p, e)
        p, e = _two_prod(hi, b)
        hi = _up(p, e)
    return max(lo, 0.0), hi


@_jit
def _pow_int(lo, hi, n):
    out_lo = np.empty(lo.size)
    out_hi = np.empty(lo.size)
    m = abs(n)
    for i in range(lo.size):
        if math.isnan(lo[i]) or math.isnan(hi[i]):
            out_lo[i] = np.nan
            out_hi[i] = np.nan
            continue
        if m == 0:
            out_lo[i] = 1.0
            out_hi[i] = 1.0
            continue
        a_lo, a_hi = _pow_pos(abs(lo[i]), m)
        b_lo, b_hi = _pow_pos(abs(hi[i]), m)
        if m % 2 == 1:
            r_lo = a_lo if lo[i] >= 0 else -a_hi
            r_hi = b_hi if hi[i] >= 0 else -b_lo
        elif lo[i] < 0 and hi[i] > 0:
            r_lo = 0.0
            r_hi = max(a_hi, b_hi)
        elif lo[i] >= 0:
            r_lo = a_lo
            r_hi = b_hi
        else:
            r_lo = b_lo
            r_hi = a_hi
        if n < 0:
            r_lo, r_hi = _div1(1.0, 1.0, r_lo, r_hi)
        out_lo[i] = r_lo
        out_hi[i] = r_hi
    return out_lo, out_hi


def pow_int(lo, hi, n):
    return _pow_int(lo, hi, int(n))


@_jit
def _pow_real(lo, hi, p):
    out_lo = np.empty(lo.size)
    out_hi = np.empty(lo.size)
    for i in range(lo.size):
        bad = lo[i] < 0 if p > 0 else lo[i] <= 0
        if bad or math.isnan(lo[i]):
            out_lo[i] = np.nan
            out_hi[i] = np.nan
            continue
        a = lo[i] ** p
        b = hi[i] ** p
        if p < 0:
            a, b = b, a
        out_lo[i] = max(_lower(a), 0.0)
        out_hi[i] = _upper(b)
    return out_lo, out_hi


def pow_real(lo, hi, p):
    return _pow_real(lo, hi, float(p))


@_jit
def _hits(lo, hi, phase):
    eps = 1e-9 * (1.0 + max(abs(lo), abs(hi)))
    k = math.floor((hi + eps - phase) / _TWO_PI)
    return phase + _TWO_PI * k >= lo - eps


@_jit
def sin(lo, hi):
    n = lo.size
    out_lo = np.empty(n)
    out_hi = np.empty(n)
    for i in range(n):
        a = math.sin(lo[i])
        b = math.sin(hi[i])
        r_lo = _lower(min(a, b))
        r_hi = _upper(max(a, b))
        wide = (hi[i] - lo[i]) >= _TWO_PI
        if wide or _hits(lo[i], hi[i], _HALF_PI):
            r_hi = 1.0
        if wide or _hits(lo[i], hi[i], -_HALF_PI):
            r_lo = -1.0
        out_lo[i] = max(r_lo, -1.0)
        out_hi[i] = min(r_hi, 1.0)
    return out_lo, out_hi


@_jit
def cos(lo, hi):
    n = lo.size
    out_lo = np.empty(n)
    out_hi = np.empty(n)
    for i in range(n):
        a = math.cos(lo[i])
        b = math.cos(hi[i])
        r_lo = _lower(min(a, b))
        r_hi = _upper(max(a, b))
        wide = (hi[i] - lo[i]) >= _TWO_PI
        if wide or _hits(lo[i], hi[i], 0.0):
            r_hi = 1.0
        if wide or _hits(lo[i], hi[i], math.pi):
            r_lo = -1.0
        out_lo[i] = max(r_lo, -1.0)
        out_hi[i] = min(r_hi, 1.0)
    return out_lo, out_hi


@_jit
def exp(lo, hi):
    n = lo.size
    out_lo = np.empty(n)
    out_hi = np.empty(n)
    for i in range(n):
        out_lo[i] = max(_lower(math.exp(lo[i])), 0.0)
        out_hi[i] = _upper(math.exp(hi[i]))
    return out_lo, out_hi


@_jit
def log(lo, hi):
    n = lo.size
    out_lo = np.empty(n)
    out_hi = np.empty(n)
    for i in range(n):
        if not lo[i] > 0:
            out_lo[i] = np.nan
            out_hi[i] = np.nan
        else:
            out_lo[i] = _lower(math.log(lo[i]))
            out_hi[i] = _upper(math.log(hi[i]))
    return out_lo, out_hi


@_jit
def merge_sorted(lo, hi, tol):
    n = lo.size
    out_lo = np.empty(n)
    out_hi = np.empty(n)
    if n == 0:
        return out_lo, out_hi
    m = 0
    cur_lo = lo[0]
    cur_hi = hi[0]
    for i in range(1, n):
        if lo[i] > cur_hi + tol:
            out_lo[m] = cur_lo
            out_hi[m] = cur_hi
            m += 1
            cur_lo = lo[i]
            cur_hi = hi[i]
        elif hi[i] > cur_hi:
            cur_hi = hi[i]
    out_lo[m] = cur_lo
    out_hi[m] = cur_hi
    return out_lo[: m + 1].copy(), out_hi[: m + 1].copy()
