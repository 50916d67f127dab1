"""Vectorized numpy implementation of the interval kernels.

Every function takes float64 arrays of lower/upper bounds and returns a new
``(lo, hi)`` pair.  A lane whose inputs leave the natural domain of the
operation comes back as ``(nan, nan)``; callers decide whether that is an
error (point evaluation) or a reason to subdivide (branch-and-bound).

Rounding: ``+ - *`` use error-free transforms, so an endpoint is moved by
one ulp only when the float result was actually inexact, and only in the
direction of the rounding error.  Division widens by one ulp unless the
quotient verifies exactly; transcendentals widen by two.
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"

_SPLITTER = 134217729.0  # 2**27 + 1
_TINY = 1e-290
_INF = np.inf
_HALF_PI = np.pi / 2
_TWO_PI = 2 * np.pi


def _down(v, err):
    return np.where(err >= 0, v, np.nextafter(v, -_INF))


def _up(v, err):
    return np.where(err <= 0, v, np.nextafter(v, _INF))


def _lower(v):
    # libm/SIMD results are trusted to 1 ulp; step 2 for headroom
    return np.nextafter(np.nextafter(v, -_INF), -_INF)


def _upper(v):
    return np.nextafter(np.nextafter(v, _INF), _INF)


def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def two_prod(a, b):
    p = a * b
    c = _SPLITTER * a
    ah = c - (c - a)
    al = a - ah
    c = _SPLITTER * b
    bh = c - (c - b)
    bl = b - bh
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    # Dekker's split is only exact away from underflow
    bad = (np.abs(p) < _TINY) & (a != 0) & (b != 0)
    err = np.where(bad, np.nan, err)
    return p, err


def add(alo, ahi, blo, bhi):
    s, e = two_sum(alo, blo)
    t, f = two_sum(ahi, bhi)
    return _down(s, e), _up(t, f)


def sub(alo, ahi, blo, bhi):
    return add(alo, ahi, -bhi, -blo)


def mul(alo, ahi, blo, bhi):
    p1, e1 = two_prod(alo, blo)
    p2, e2 = two_prod(alo, bhi)
    p3, e3 = two_prod(ahi, blo)
    p4, e4 = two_prod(ahi, bhi)
    lo = np.minimum(np.minimum(_down(p1, e1), _down(p2, e2)),
                    np.minimum(_down(p3, e3), _down(p4, e4)))
    hi = np.maximum(np.maximum(_up(p1, e1), _up(p2, e2)),
                    np.maximum(_up(p3, e3), _up(p4, e4)))
    return lo, hi


def _quot(a, b):
    q = a / b
    p, e = two_prod(q, b)
    exact = (p == a) & (e == 0)
    return (np.where(exact, q, np.nextafter(q, -_INF)),
            np.where(exact, q, np.nextafter(q, _INF)))


def div(alo, ahi, blo, bhi):
    bad = (blo <= 0) & (bhi >= 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        q1, r1 = _quot(alo, blo)
        q2, r2 = _quot(alo, bhi)
        q3, r3 = _quot(ahi, blo)
        q4, r4 = _quot(ahi, bhi)
    lo = np.minimum(np.minimum(q1, q2), np.minimum(q3, q4))
    hi = np.maximum(np.maximum(r1, r2), np.maximum(r3, r4))
    return np.where(bad, np.nan, lo), np.where(bad, np.nan, hi)


def _pow_pos(b, n):
    # directed repeated multiplication of a nonnegative base
    lo = np.ones_like(b)
    hi = np.ones_like(b)
    for _ in range(n):
        p, e = two_prod(lo, b)
        lo = _down(p, e)
        p, e = two_prod(hi, b)
        hi = _up(p, e)
    return np.maximum(lo, 0.0), hi


def pow_int(lo, hi, n):
    """Integer power ``x**n``; negative ``n`` requires 0 outside the box."""
    n = int(n)
    if n == 0:
        return np.ones_like(lo), np.ones_like(hi)
    m = abs(n)
    alo, ahi = np.abs(lo), np.abs(hi)
    plo_lo, plo_hi = _pow_pos(alo, m)
    phi_lo, phi_hi = _pow_pos(ahi, m)
    if m % 2 == 1:
        # odd: monotone increasing, sign carried through
        out_lo = np.where(lo >= 0, plo_lo, -plo_hi)
        out_hi = np.where(hi >= 0, phi_hi, -phi_lo)
    else:
        straddle = (lo < 0) & (hi > 0)
        pos = lo >= 0
        out_lo = np.where(straddle, 0.0, np.where(pos, plo_lo, phi_lo))
        out_hi = np.where(straddle, np.maximum(plo_hi, phi_hi),
                          np.where(pos, phi_hi, plo_hi))
    if n < 0:
        one = np.ones_like(lo)
        return div(one, one, out_lo, out_hi)
    return out_lo, out_hi


def pow_real(lo, hi, p):
    """Non-integer constant power on a nonnegative base."""
    p = float(p)
    bad = lo < 0 if p > 0 else lo <= 0
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.power(np.where(bad, 1.0, lo), p)
        b = np.power(np.where(bad, 1.0, hi), p)
    if p > 0:
        out_lo, out_hi = a, b
    else:
        out_lo, out_hi = b, a
    out_lo = np.maximum(_lower(out_lo), 0.0)
    out_hi = _upper(out_hi)
    return np.where(bad, np.nan, out_lo), np.where(bad, np.nan, out_hi)


def _slack(lo, hi):
    return 1e-9 * (1.0 + np.maximum(np.abs(lo), np.abs(hi)))


def _hits(lo, hi, phase):
    """True where some ``phase + 2*k*pi`` lies in ``[lo, hi]`` (conservatively)."""
    eps = _slack(lo, hi)
    k = np.floor((hi + eps - phase) / _TWO_PI)
    return phase + _TWO_PI * k >= lo - eps


def sin(lo, hi):
    a, b = np.sin(lo), np.sin(hi)
    out_lo = _lower(np.minimum(a, b))
    out_hi = _upper(np.maximum(a, b))
    wide = (hi - lo) >= _TWO_PI
    out_hi = np.where(wide | _hits(lo, hi, _HALF_PI), 1.0, out_hi)
    out_lo = np.where(wide | _hits(lo, hi, -_HALF_PI), -1.0, out_lo)
    return np.maximum(out_lo, -1.0), np.minimum(out_hi, 1.0)


def cos(lo, hi):
    a, b = np.cos(lo), np.cos(hi)
    out_lo = _lower(np.minimum(a, b))
    out_hi = _upper(np.maximum(a, b))
    wide = (hi - lo) >= _TWO_PI
    out_hi = np.where(wide | _hits(lo, hi, 0.0), 1.0, out_hi)
    out_lo = np.where(wide | _hits(lo, hi, np.pi), -1.0, out_lo)
    return np.maximum(out_lo, -1.0), np.minimum(out_hi, 1.0)


def exp(lo, hi):
    with np.errstate(over="ignore"):
        out_lo = np.maximum(_lower(np.exp(lo)), 0.0)
        out_hi = _upper(np.exp(hi))
    return out_lo, out_hi


def log(lo, hi):
    bad = lo <= 0
    with np.errstate(divide="ignore", invalid="ignore"):
        out_lo = _lower(np.log(np.where(bad, 1.0, lo)))
        out_hi = _upper(np.log(np.where(bad, 1.0, hi)))
    return np.where(bad, np.nan, out_lo), np.where(bad, np.nan, out_hi)


def merge_sorted(lo, hi, tol):
    """Merge intervals already sorted by ``lo``; gaps ``<= tol`` close."""
    if lo.size == 0:
        return lo.copy(), hi.copy()
    reach = np.maximum.accumulate(hi)
    brk = np.flatnonzero(lo[1:] > reach[:-1] + tol) + 1
    starts = np.concatenate(([0], brk))
    ends = np.concatenate((brk - 1, [lo.size - 1]))
    return lo[starts].copy(), reach[ends].copy()
