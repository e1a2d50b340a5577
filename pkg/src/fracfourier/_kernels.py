"""Hot loops: compensated trigonometric sums and the Moebius/Liouville sieve.

Each kernel exists twice: a scalar-loop version compiled by numba and a
vectorised numpy version used when numba is disabled. The dispatchers at the
bottom pick one according to :func:`fracfourier._backend.use_numba`.

Phase reduction
---------------
A term ``amp * exp(2 pi i m t)`` needs ``m t mod 1`` accurately even when
``m = n**k`` is far beyond 2**53. Every double ``t`` in [2**-12, 1) is an
integer multiple of 2**-64, so with ``hi = t * 2**64`` (an exact uint64) the
product ``(m mod 2**64) * hi`` taken with 64-bit wraparound *is*
``frac(m t) * 2**64`` exactly. Smaller ``t`` leave a residual ``lo < 2**-64``
handled in floating point (``m * lo`` is tiny unless m > 2**60). Negative t
are reduced via ``|t|`` and a sign flip, which makes ``F(-t) = conj F(t)``
hold bit-for-bit for real coefficients.
"""

import math

import numpy as np

from ._backend import jit, use_numba

TWO64 = 18446744073709551616.0
INV_TWO64 = 2.0**-64
TWO_PI = 2.0 * math.pi

prange = range  # replaced by numba.prange at compile time


def split_phase(t):
    """Return ``(hi, lo, neg)`` arrays with ``|t| mod 1 == hi * 2**-64 + lo``."""
    t = np.asarray(t, dtype=np.float64)
    neg = t < 0.0
    a = np.abs(t)
    a = a - np.floor(a)
    s = a * TWO64
    fl = np.floor(s)
    return fl.astype(np.uint64), (s - fl) * INV_TWO64, neg


def multipliers(bases, k):
    """``(bases**k mod 2**64, float(bases)**k)`` for an integer array."""
    bases = np.asarray(bases, dtype=np.uint64)
    hi = np.ones_like(bases)
    for _ in range(int(k)):
        hi = hi * bases
    return hi, bases.astype(np.float64) ** int(k)


def geometric_multipliers(b, terms):
    """``(b**j mod 2**64, float(b)**j)`` for j = 1..terms."""
    hi = np.empty(terms, dtype=np.uint64)
    lo = np.empty(terms, dtype=np.float64)
    acc = np.ones(1, dtype=np.uint64)
    bb = np.array([b], dtype=np.uint64)
    f = 1.0
    for j in range(terms):
        acc = acc * bb
        f *= float(b)
        hi[j] = acc[0]
        lo[j] = f
    return hi, lo


# --------------------------------------------------------------------------
# series sums
#
# e(x) = exp(2 pi i x) for a 64-bit fixed-point fraction x is evaluated as a
# table entry for the top TABLE_BITS bits times a short Taylor polynomial in
# the remainder (|angle| < 2 pi 2**-12, truncation error < 1e-19). Table
# entries are built from a quarter-turn reduction so that quarter phases are
# exact (e(1/4) == 1j).

TABLE_BITS = 12
_REM_MASK = (1 << (64 - TABLE_BITS)) - 1


def _unit_table(bits=TABLE_BITS):
    fr = np.arange(1 << bits, dtype=np.float64) / (1 << bits)
    q = np.floor(4.0 * fr + 0.5)
    ang = TWO_PI * (fr - 0.25 * q)
    cs, sn = np.cos(ang), np.sin(ang)
    qi = q.astype(np.int64) & 3
    return (
        np.ascontiguousarray(np.choose(qi, (cs, -sn, -cs, sn))),
        np.ascontiguousarray(np.choose(qi, (sn, cs, -sn, -cs))),
    )


TABLE_COS, TABLE_SIN = _unit_table()


@jit(parallel=True)
def _series_loop(amp_re, amp_im, mult_hi, mult_f, t, stops, tab_c, tab_s, out_re, out_im):
    n_terms = stops[stops.shape[0] - 1]
    n_stops = stops.shape[0]
    top = np.uint64(64 - TABLE_BITS)
    mask = np.uint64(_REM_MASK)
    for j in prange(t.shape[0]):
        tj = t[j]
        neg = tj < 0.0
        a = -tj if neg else tj
        a = a - np.floor(a)
        s = a * TWO64
        fl = np.floor(s)
        hi = np.uint64(fl)
        lo = (s - fl) * INV_TWO64
        sr = 0.0
        cr = 0.0
        si = 0.0
        ci = 0.0
        c = 0
        while c < n_stops and stops[c] == 0:
            out_re[c, j] = 0.0
            out_im[c, j] = 0.0
            c += 1
        for n in range(n_terms):
            ar = amp_re[n]
            ai = amp_im[n]
            if ar != 0.0 or ai != 0.0:
                ph = mult_hi[n] * hi
                idx = ph >> top
                th = TWO_PI * (float(ph & mask) * INV_TWO64)
                t2 = th * th
                pc = 1.0 - t2 * (0.5 - t2 * (1.0 / 24.0))
                ps = th * (1.0 - t2 * (1.0 / 6.0 - t2 * (1.0 / 120.0)))
                tc = tab_c[idx]
                ts = tab_s[idx]
                er = tc * pc - ts * ps
                ei = ts * pc + tc * ps
                if lo != 0.0:
                    d = mult_f[n] * lo
                    d = TWO_PI * (d - np.floor(d))
                    dc = np.cos(d)
                    ds = np.sin(d)
                    er, ei = er * dc - ei * ds, ei * dc + er * ds
                if neg:
                    ei = -ei
                xr = ar * er - ai * ei
                xi = ar * ei + ai * er
                tr = sr + xr
                if abs(sr) >= abs(xr):
                    cr += (sr - tr) + xr
                else:
                    cr += (xr - tr) + sr
                sr = tr
                ti = si + xi
                if abs(si) >= abs(xi):
                    ci += (si - ti) + xi
                else:
                    ci += (xi - ti) + si
                si = ti
            while c < n_stops and stops[c] == n + 1:
                out_re[c, j] = sr + cr
                out_im[c, j] = si + ci
                c += 1


def _series_numpy(amp_re, amp_im, mult_hi, mult_f, t, stops):
    hi, lo, neg = split_phase(t)
    has_lo = bool(np.any(lo != 0.0))
    shape = (len(stops), len(t))
    out_re = np.zeros(shape)
    out_im = np.zeros(shape)
    sr = np.zeros(len(t))
    cr = np.zeros(len(t))
    si = np.zeros(len(t))
    ci = np.zeros(len(t))
    top = np.uint64(64 - TABLE_BITS)
    mask = np.uint64(_REM_MASK)
    c = 0
    while c < len(stops) and stops[c] == 0:
        c += 1
    for n in range(int(stops[-1])):
        ar = amp_re[n]
        ai = amp_im[n]
        if ar != 0.0 or ai != 0.0:
            ph = mult_hi[n] * hi
            idx = (ph >> top).astype(np.intp)
            th = TWO_PI * ((ph & mask).astype(np.float64) * INV_TWO64)
            t2 = th * th
            pc = 1.0 - t2 * (0.5 - t2 * (1.0 / 24.0))
            ps = th * (1.0 - t2 * (1.0 / 6.0 - t2 * (1.0 / 120.0)))
            tc = TABLE_COS[idx]
            ts = TABLE_SIN[idx]
            er = tc * pc - ts * ps
            ei = ts * pc + tc * ps
            if has_lo:
                d = mult_f[n] * lo
                d = TWO_PI * (d - np.floor(d))
                dc = np.where(lo != 0.0, np.cos(d), 1.0)
                ds = np.where(lo != 0.0, np.sin(d), 0.0)
                er, ei = er * dc - ei * ds, ei * dc + er * ds
            ei = np.where(neg, -ei, ei)
            xr = ar * er - ai * ei
            xi = ar * ei + ai * er
            tr = sr + xr
            cr += np.where(np.abs(sr) >= np.abs(xr), (sr - tr) + xr, (xr - tr) + sr)
            sr = tr
            ti = si + xi
            ci += np.where(np.abs(si) >= np.abs(xi), (si - ti) + xi, (xi - ti) + si)
            si = ti
        while c < len(stops) and stops[c] == n + 1:
            out_re[c] = sr + cr
            out_im[c] = si + ci
            c += 1
    return out_re, out_im


def series_sums(amp, mult_hi, mult_f, t, stops, backend=None):
    """Compensated sums ``sum_{n < stop} amp[n] e(mult[n] t)`` for every stop and t.

    ``stops`` are ascending term counts; the result has shape
    ``(len(stops), len(t))``. Summation runs in ascending n for each t, so
    every row equals a fresh call with that single stop, bit for bit.
    """
    amp = np.asarray(amp, dtype=np.complex128)
    amp_re = np.ascontiguousarray(amp.real)
    amp_im = np.ascontiguousarray(amp.imag)
    t = np.ascontiguousarray(t, dtype=np.float64)
    stops = np.ascontiguousarray(stops, dtype=np.int64)
    if len(stops) == 0 or np.any(np.diff(stops) < 0) or stops[0] < 0:
        raise ValueError("stops must be a nonempty ascending array of term counts")
    if stops[-1] > len(amp):
        raise ValueError("stop beyond the supplied amplitudes")
    mult_hi = np.ascontiguousarray(mult_hi, dtype=np.uint64)
    mult_f = np.ascontiguousarray(mult_f, dtype=np.float64)
    if backend is None:
        backend = "numba" if use_numba() else "numpy"
    if backend == "numba":
        out_re = np.zeros((len(stops), len(t)))
        out_im = np.zeros((len(stops), len(t)))
        _series_loop(
            amp_re, amp_im, mult_hi, mult_f, t, stops, TABLE_COS, TABLE_SIN, out_re, out_im
        )
    else:
        out_re, out_im = _series_numpy(amp_re, amp_im, mult_hi, mult_f, t, stops)
    return out_re + 1j * out_im


# --------------------------------------------------------------------------
# sieve


def _prime_count_bound(limit):
    if limit < 17:
        return 8
    return int(1.26 * limit / math.log(limit)) + 8


@jit()
def _sieve_loop(limit, mu, lam, composite, primes):
    n_primes = 0
    mu[1] = 1
    lam[1] = 1
    for i in range(2, limit + 1):
        if not composite[i]:
            primes[n_primes] = i
            n_primes += 1
            mu[i] = -1
            lam[i] = -1
        for j in range(n_primes):
            p = primes[j]
            ip = i * p
            if ip > limit:
                break
            composite[ip] = True
            lam[ip] = -lam[i]
            if i % p == 0:
                mu[ip] = 0
                break
            mu[ip] = -mu[i]
    return n_primes


def _sieve_numpy(limit):
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if is_prime[i]:
            is_prime[i * i :: i] = False
    mu = np.ones(limit + 1, dtype=np.int8)
    lam = np.ones(limit + 1, dtype=np.int8)
    for p in np.flatnonzero(is_prime):
        p = int(p)
        mu[p::p] *= -1
        if p * p <= limit:
            mu[p * p :: p * p] = 0
        pk = p
        while pk <= limit:
            lam[pk::pk] *= -1
            pk *= p
    mu[0] = 0
    lam[0] = 0
    return mu, lam


def sieve_mu_lambda(limit, backend=None):
    """Moebius and Liouville values for 0..limit (index 0 holds 0)."""
    limit = int(limit)
    if backend is None:
        backend = "numba" if use_numba() else "numpy"
    if backend == "numba":
        mu = np.zeros(limit + 1, dtype=np.int8)
        lam = np.zeros(limit + 1, dtype=np.int8)
        composite = np.zeros(limit + 1, dtype=np.bool_)
        primes = np.zeros(_prime_count_bound(limit), dtype=np.int64)
        _sieve_loop(limit, mu, lam, composite, primes)
        return mu, lam
    return _sieve_numpy(limit)
