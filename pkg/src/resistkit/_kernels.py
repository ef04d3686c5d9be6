"""Hot modular-arithmetic kernels, each with a numba and a numpy variant.

All inputs are int64 arrays with entries in ``range(p)`` and ``p < 2**31`` so
that products fit in int64.
"""

from __future__ import annotations

import numpy as np

from . import _accel


def _powmod_loop(a, e, p):
    result = 1
    a %= p
    while e > 0:
        if e & 1:
            result = result * a % p
        a = a * a % p
        e >>= 1
    return result


def _rref_loop(M, p):
    A = M.copy() % p
    rows, cols = A.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    npiv = 0
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = tmp
        inv = _powmod_jit(A[r, c], p - 2, p)
        for j in range(c, cols):
            A[r, j] = A[r, j] * inv % p
        for i in range(rows):
            if i != r and A[i, c] != 0:
                f = A[i, c]
                for j in range(c, cols):
                    A[i, j] = (A[i, j] - f * A[r, j]) % p
        pivots[npiv] = c
        npiv += 1
        r += 1
    return A, pivots[:npiv]


def _circulant_inverse_loop(coeffs, p):
    N, n = coeffs.shape
    ok = np.zeros(N, dtype=np.bool_)
    out = np.zeros((N, n), dtype=np.int64)
    M = np.empty((n, n + 1), dtype=np.int64)
    for b in range(N):
        for k in range(n):
            for j in range(n):
                M[k, j] = coeffs[b, (k - j) % n]
            M[k, n] = 1 if k == 0 else 0
        singular = False
        for c in range(n):
            piv = -1
            for i in range(c, n):
                if M[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                singular = True
                break
            if piv != c:
                for j in range(n + 1):
                    tmp = M[c, j]
                    M[c, j] = M[piv, j]
                    M[piv, j] = tmp
            inv = _powmod_jit(M[c, c], p - 2, p)
            for j in range(n + 1):
                M[c, j] = M[c, j] * inv % p
            for i in range(n):
                if i != c and M[i, c] != 0:
                    f = M[i, c]
                    for j in range(n + 1):
                        M[i, j] = (M[i, j] - f * M[c, j]) % p
        if not singular:
            ok[b] = True
            for k in range(n):
                out[b, k] = M[k, n]
    return ok, out


_powmod_jit = _accel.njit(_powmod_loop)
_rref_jit = _accel.njit(_rref_loop)
_circulant_inverse_jit = _accel.njit(_circulant_inverse_loop)


def _powmod_vec(a, e, p):
    result = np.ones_like(a)
    a = a % p
    while e > 0:
        if e & 1:
            result = result * a % p
        a = a * a % p
        e >>= 1
    return result


def _rref_numpy(M, p):
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), p - 2, p) % p
        col = A[:, c].copy()
        col[r] = 0
        if col.any():
            A = (A - np.outer(col, A[r])) % p
        pivots.append(c)
        r += 1
    return A, np.array(pivots, dtype=np.int64)


def _circulant_inverse_numpy(coeffs, p):
    coeffs = np.asarray(coeffs, dtype=np.int64) % p
    N, n = coeffs.shape
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    M = np.zeros((N, n, n + 1), dtype=np.int64)
    M[:, :, :n] = coeffs[:, idx]
    M[:, 0, n] = 1
    ok = np.ones(N, dtype=bool)
    batch = np.arange(N)
    for c in range(n):
        mask = M[:, c:, c] != 0
        has = mask.any(axis=1)
        ok &= has
        piv = c + mask.argmax(axis=1)
        top = M[batch, c].copy()
        M[batch, c] = M[batch, piv]
        M[batch, piv] = top
        lead = np.where(has, M[:, c, c], 1)
        M[:, c] = M[:, c] * _powmod_vec(lead, p - 2, p)[:, None] % p
        factor = M[:, :, c].copy()
        factor[:, c] = 0
        M = (M - factor[:, :, None] * M[:, c, None, :]) % p
    out = np.where(ok[:, None], M[:, :, n], 0)
    return ok, out


def rref_mod_p(M, p: int):
    """Reduced row echelon form of ``M`` over GF(p) and its pivot columns."""
    M = np.ascontiguousarray(M, dtype=np.int64)
    if _accel.backend() == "numba":
        return _rref_jit(M, p)
    return _rref_numpy(M, p)


def circulant_inverse(coeffs, p: int):
    """Invert each row of ``coeffs`` as an element of GF(p)[Z/n].

    Row ``b`` holds the coefficients of ``g^0 .. g^(n-1)``. Returns
    ``(ok, inverses)``; ``inverses[b]`` is meaningful only where ``ok[b]``.
    """
    coeffs = np.ascontiguousarray(coeffs, dtype=np.int64) % p
    if _accel.backend() == "numba":
        return _circulant_inverse_jit(coeffs, p)
    return _circulant_inverse_numpy(coeffs, p)
