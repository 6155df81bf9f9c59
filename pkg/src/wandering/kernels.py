"""Hot loops of the series arithmetic.

A truncated series is a pair of arrays: strictly increasing int64 exponent
numerators on a common grid ``(1/D)Z`` and int64 residue codes.  The two
kernels that dominate run time are

* ``mul_terms``: all products ``x_i * y_j`` with ``e_i + e_j < hi``,
  accumulated per exponent;
* ``add_terms``: merge of two sorted term lists.

Each kernel has a numba implementation and a pure-numpy fallback.  Setting
``WANDERING_DISABLE_NUMBA=1`` in the environment (or missing numba) selects
the fallback.  Products whose exponents fill the grid densely go through an
FFT convolution instead, in both modes; the crossover is decided by a rough
operation count.
"""

import math
import os

import numpy as np

_FLAG = os.environ.get("WANDERING_DISABLE_NUMBA", "").strip().lower()

try:
    if _FLAG in ("1", "true", "yes", "on"):
        raise ImportError("numba disabled by WANDERING_DISABLE_NUMBA")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f

USE_NUMBA = HAVE_NUMBA

# dense accumulators larger than this many slots fall back to sorting
DENSE_SLOT_CAP = 1 << 26
# chunk size (pairs) for the numpy fallback
_CHUNK = 1 << 22


def backend():
    return "numba" if USE_NUMBA else "numpy"


def set_backend(name):
    """Switch backends at run time (used by the benchmark and tests)."""
    global USE_NUMBA
    if name == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba is not available")
        USE_NUMBA = True
    elif name == "numpy":
        USE_NUMBA = False
    else:
        raise ValueError(name)


# ---------------------------------------------------------------------------
# numba kernels

@njit(cache=True)
def _ext_add(a, b, p, k, digits, pw):
    s = 0
    for i in range(k):
        s += ((digits[a, i] + digits[b, i]) % p) * pw[i]
    return s


@njit(cache=True)
def _ext_mul(a, b, log_t, exp_t):
    if a == 0 or b == 0:
        return 0
    return exp_t[log_t[a] + log_t[b]]


@njit(cache=True)
def _nb_mul_dense(e1, c1, e2, c2, hi, p, k, log_t, exp_t, digits, pw):
    lo = e1[0] + e2[0]
    span = hi - lo
    acc = np.zeros(span, np.int32)
    n2 = e2.shape[0]
    for i in range(e1.shape[0]):
        ei = e1[i] - lo
        ci = c1[i]
        lim = hi - e1[i]
        for j in range(n2):
            if e2[j] >= lim:
                break
            idx = ei + e2[j]
            if k == 1:
                acc[idx] = (acc[idx] + ci * c2[j]) % p
            else:
                acc[idx] = _ext_add(acc[idx], _ext_mul(ci, c2[j], log_t, exp_t),
                                    p, k, digits, pw)
    cnt = 0
    for t in range(span):
        if acc[t] != 0:
            cnt += 1
    eo = np.empty(cnt, np.int64)
    co = np.empty(cnt, np.int64)
    cnt = 0
    for t in range(span):
        if acc[t] != 0:
            eo[cnt] = t + lo
            co[cnt] = acc[t]
            cnt += 1
    return eo, co


@njit(cache=True)
def _nb_mul_sorted(e1, c1, e2, c2, hi, p, k, log_t, exp_t, digits, pw):
    n2 = e2.shape[0]
    total = 0
    for i in range(e1.shape[0]):
        lim = hi - e1[i]
        for j in range(n2):
            if e2[j] >= lim:
                break
            total += 1
    ex = np.empty(total, np.int64)
    cx = np.empty(total, np.int64)
    t = 0
    for i in range(e1.shape[0]):
        lim = hi - e1[i]
        for j in range(n2):
            if e2[j] >= lim:
                break
            ex[t] = e1[i] + e2[j]
            if k == 1:
                cx[t] = (c1[i] * c2[j]) % p
            else:
                cx[t] = _ext_mul(c1[i], c2[j], log_t, exp_t)
            t += 1
    order = np.argsort(ex, kind="mergesort")
    eo = np.empty(total, np.int64)
    co = np.empty(total, np.int64)
    m = -1
    for s in range(total):
        e = ex[order[s]]
        c = cx[order[s]]
        if m >= 0 and eo[m] == e:
            if k == 1:
                co[m] = (co[m] + c) % p
            else:
                co[m] = _ext_add(co[m], c, p, k, digits, pw)
        else:
            m += 1
            eo[m] = e
            co[m] = c
    keep = 0
    for s in range(m + 1):
        if co[s] != 0:
            eo[keep] = eo[s]
            co[keep] = co[s]
            keep += 1
    return eo[:keep].copy(), co[:keep].copy()


@njit(cache=True)
def _nb_add(e1, c1, e2, c2, p, k, digits, pw):
    n1 = e1.shape[0]
    n2 = e2.shape[0]
    eo = np.empty(n1 + n2, np.int64)
    co = np.empty(n1 + n2, np.int64)
    i = 0
    j = 0
    t = 0
    while i < n1 or j < n2:
        if j >= n2 or (i < n1 and e1[i] < e2[j]):
            eo[t] = e1[i]
            co[t] = c1[i]
            i += 1
            t += 1
        elif i >= n1 or e2[j] < e1[i]:
            eo[t] = e2[j]
            co[t] = c2[j]
            j += 1
            t += 1
        else:
            if k == 1:
                s = (c1[i] + c2[j]) % p
            else:
                s = _ext_add(c1[i], c2[j], p, k, digits, pw)
            if s != 0:
                eo[t] = e1[i]
                co[t] = s
                t += 1
            i += 1
            j += 1
    return eo[:t].copy(), co[:t].copy()


# ---------------------------------------------------------------------------
# numpy fallbacks

def _np_reduce(ex, cx, field):
    """Sum coefficients of equal exponents; drop zeros."""
    if ex.size == 0:
        return ex, cx
    order = np.argsort(ex, kind="stable")
    ex = ex[order]
    cx = cx[order]
    starts = np.flatnonzero(np.r_[True, ex[1:] != ex[:-1]])
    eo = ex[starts]
    if field.k == 1:
        co = np.add.reduceat(cx, starts) % field.p
    else:
        dig = field.digits[cx]
        co = (np.add.reduceat(dig, starts, axis=0) % field.p) @ field._pw
    keep = co != 0
    return eo[keep], co[keep]


def _np_mul_pairs(e1, c1, e2, c2, hi, field):
    parts_e = []
    parts_c = []
    step = max(1, _CHUNK // max(1, e2.size))
    for s in range(0, e1.size, step):
        E = e1[s:s + step, None] + e2[None, :]
        mask = E < hi
        if not mask.any():
            break
        C = field.vmul(np.broadcast_to(c1[s:s + step, None], E.shape)[mask],
                       np.broadcast_to(c2[None, :], E.shape)[mask])
        pe, pc = _np_reduce(E[mask], C, field)
        parts_e.append(pe)
        parts_c.append(pc)
    if not parts_e:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    if len(parts_e) == 1:
        return parts_e[0], parts_c[0]
    return _np_reduce(np.concatenate(parts_e), np.concatenate(parts_c), field)


def _np_add(e1, c1, e2, c2, field):
    return _np_reduce(np.concatenate([e1, e2]), np.concatenate([c1, c2]), field)


# ---------------------------------------------------------------------------
# FFT path (prime fields only)

def _fft_mul(e1, c1, e2, c2, hi, p):
    lo1 = e1[0]
    lo2 = e2[0]
    a = np.zeros(int(e1[-1] - lo1) + 1)
    a[e1 - lo1] = c1
    b = np.zeros(int(e2[-1] - lo2) + 1)
    b[e2 - lo2] = c2
    n = a.size + b.size - 1
    size = 1 << (n - 1).bit_length()
    fa = np.fft.rfft(a, size)
    fb = np.fft.rfft(b, size)
    span = int(hi - lo1 - lo2)
    raw = np.fft.irfft(fa * fb, size)[:min(n, span)]
    r = np.rint(raw)
    err = np.max(np.abs(raw - r)) if raw.size else 0.0
    if err > 0.25:  # pragma: no cover - guarded by the size limit below
        raise ArithmeticError(f"FFT rounding error {err}")
    r = r.astype(np.int64) % p
    idx = np.flatnonzero(r)
    return idx.astype(np.int64) + (lo1 + lo2), r[idx]


def _fft_cost(e1, e2):
    n = int(e1[-1] - e1[0]) + int(e2[-1] - e2[0]) + 2
    return 3.0 * n * max(1.0, math.log2(n))


# ---------------------------------------------------------------------------
# public entry points

def _clip(e1, c1, e2, c2, hi):
    """Drop terms that cannot contribute below ``hi``."""
    k1 = int(np.searchsorted(e1, hi - e2[0], side="left"))
    k2 = int(np.searchsorted(e2, hi - e1[0], side="left"))
    return e1[:k1], c1[:k1], e2[:k2], c2[:k2]


def pair_count(e1, e2, hi):
    """Number of index pairs with ``e1[i] + e2[j] < hi``."""
    return int(np.searchsorted(e2, hi - e1, side="left").sum())


def mul_terms(e1, c1, e2, c2, hi, field, method=None):
    """Products of two sorted term lists restricted to exponents ``< hi``.

    ``method`` forces ``"pairs"`` or ``"fft"``; by default the cheaper one
    is used.
    """
    empty = np.empty(0, np.int64)
    if e1.size == 0 or e2.size == 0 or e1[0] + e2[0] >= hi:
        return empty, empty.copy()
    e1, c1, e2, c2 = _clip(e1, c1, e2, c2, hi)
    if method is None:
        pairs = pair_count(e1, e2, hi)
        method = "pairs"
        if field.k == 1 and e1.size > 64 and e2.size > 64:
            span = int(e1[-1] - e1[0]) + int(e2[-1] - e2[0])
            # float64 FFT stays exact far beyond these sizes for small p
            if span < (1 << 24) and _fft_cost(e1, e2) * 1.5 < pairs:
                method = "fft"
    if method == "fft":
        if field.k != 1:
            raise ValueError("FFT products need a prime residue field")
        return _fft_mul(e1, c1, e2, c2, hi, field.p)
    if USE_NUMBA:
        span = int(hi - e1[0] - e2[0])
        args = (e1, c1, e2, c2, int(hi), field.p, field.k, field.log_table,
                field.exp_table, field.digits, field._pw)
        if span <= DENSE_SLOT_CAP and span <= 64 * pair_count(e1, e2, hi) + 4096:
            return _nb_mul_dense(*args)
        return _nb_mul_sorted(*args)
    return _np_mul_pairs(e1, c1, e2, c2, hi, field)


def add_terms(e1, c1, e2, c2, field):
    if e1.size == 0:
        return e2, c2
    if e2.size == 0:
        return e1, c1
    if USE_NUMBA:
        return _nb_add(e1, c1, e2, c2, field.p, field.k, field.digits, field._pw)
    return _np_add(e1, c1, e2, c2, field)
