"""
Hot coefficient kernels.

Truncated convolution of integer coefficient arrays is the inner loop of
every series product in the package. Two int64 paths exist: a numba
``@njit`` kernel and a pure-numpy one. Set ``SPINDEX_NO_JIT=1`` to force
the numpy path (numba is then never imported).

Both int64 paths are only taken when an a-priori bound shows the result
cannot overflow; otherwise the exact Python-int path is used. Callers
always get back a list of Python ints.
"""

import os

import numpy as np

_INT64_SAFE = 1 << 62

USE_JIT = os.environ.get("SPINDEX_NO_JIT", "").strip().lower() not in ("1", "true", "yes")

if USE_JIT:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_JIT = False

if USE_JIT:

    @njit(cache=True, nogil=True)
    def _conv_trunc_jit(a, b, n):
        out = np.zeros(n, dtype=np.int64)
        la = a.shape[0]
        lb = b.shape[0]
        for i in range(min(la, n)):
            ai = a[i]
            if ai == 0:
                continue
            top = min(lb, n - i)
            for j in range(top):
                out[i + j] += ai * b[j]
        return out

    @njit(cache=True, nogil=True)
    def _mul_unit_inverse_jit(f, n):
        # g with f*g = 1 mod x^n; f[0] is +-1
        g = np.zeros(n, dtype=np.int64)
        lead = f[0]
        g[0] = lead
        lf = f.shape[0]
        for k in range(1, n):
            s = 0
            for j in range(1, min(k, lf - 1) + 1):
                s += f[j] * g[k - j]
            g[k] = -lead * s
        return g


def _conv_trunc_numpy(a, b, n):
    return np.convolve(a, b)[:n]


def _bound(xs):
    m = 0
    for x in xs:
        ax = -x if x < 0 else x
        if ax > m:
            m = ax
    return m


def _conv_trunc_py(a, b, n):
    out = [0] * n
    lb = len(b)
    for i, ai in enumerate(a[:n]):
        if ai:
            top = min(lb, n - i)
            for j in range(top):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
    return out


def conv_trunc(a, b, n):
    """First ``n`` coefficients of the product of two coefficient lists."""
    if n <= 0 or not a or not b:
        return [0] * max(n, 0)
    la, lb = min(len(a), n), min(len(b), n)
    a, b = a[:la], b[:lb]
    if la * lb < 64:
        return _conv_trunc_py(a, b, n)
    if _bound(a) * _bound(b) * min(la, lb) < _INT64_SAFE:
        xa = np.asarray(a, dtype=np.int64)
        xb = np.asarray(b, dtype=np.int64)
        if USE_JIT:
            res = _conv_trunc_jit(xa, xb, n)
        else:
            res = _conv_trunc_numpy(xa, xb, n)
        out = res.tolist()
        if len(out) < n:
            out.extend([0] * (n - len(out)))
        return out
    return _conv_trunc_py(a, b, n)


def unit_inverse(f, n):
    """First ``n`` coefficients of 1/f for ``f[0] == +-1`` (exact ints)."""
    lead = f[0]
    if lead not in (1, -1):
        raise ValueError("not invertible over the integers")
    if n <= 0:
        return []
    if USE_JIT and n > 16 and _bound(f) < (1 << 20) and n < 400:
        # coefficients of 1/f grow at most like (1 + max|f|)^k; check the bound
        # on the output and redo in bigints if it could have overflowed
        g = _mul_unit_inverse_jit(np.asarray(f[:n], dtype=np.int64), n).tolist()
        if _bound(g) * _bound(f) * min(n, len(f)) < _INT64_SAFE:
            return g
    g = [0] * n
    g[0] = lead
    lf = len(f)
    for k in range(1, n):
        s = 0
        for j in range(1, min(k, lf - 1) + 1):
            fj = f[j]
            if fj:
                s += fj * g[k - j]
        g[k] = -lead * s
    return g
