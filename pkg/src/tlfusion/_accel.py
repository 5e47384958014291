"""Integer kernels: modular row reduction, modular matrix products, and
planar-diagram composition.

Each kernel has a numba implementation and a pure numpy/Python fallback with
identical results.  Setting ``TLFUSION_DISABLE_NUMBA=1`` before import selects
the fallback (useful for debugging and for the benchmark comparison).
"""
from __future__ import annotations

import os

import numpy as np

NUMBA_ENABLED = os.environ.get("TLFUSION_DISABLE_NUMBA", "").lower() not in ("1", "true", "yes")

if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False


# ------------------------------------------------------------- numba kernels
if NUMBA_ENABLED:

    @njit(cache=True)
    def _modinv_nb(a, p):
        result = 1
        base = a % p
        e = p - 2
        while e > 0:
            if e & 1:
                result = result * base % p
            base = base * base % p
            e >>= 1
        return result

    @njit(cache=True)
    def _rref_modp_nb(A, p):
        rows, cols = A.shape
        piv = np.empty(min(rows, cols), np.int64)
        nz = np.empty(cols, np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            k = r
            while k < rows and A[k, c] == 0:
                k += 1
            if k == rows:
                continue
            if k != r:
                for j in range(cols):
                    t = A[k, j]
                    A[k, j] = A[r, j]
                    A[r, j] = t
            inv = _modinv_nb(A[r, c], p)
            cnt = 0
            for j in range(c, cols):
                if A[r, j] != 0:
                    A[r, j] = A[r, j] * inv % p
                    nz[cnt] = j
                    cnt += 1
            # only the nonzero entries of the pivot row take part in the update
            for i in range(rows):
                if i != r:
                    f = A[i, c]
                    if f != 0:
                        for t in range(cnt):
                            j = nz[t]
                            A[i, j] = (A[i, j] - f * A[r, j]) % p
            piv[r] = c
            r += 1
        return r, piv[:r].copy()

    @njit(cache=True)
    def _matmul_modp_nb(A, B, p):
        n, k = A.shape
        m = B.shape[1]
        C = np.zeros((n, m), np.int64)
        for i in range(n):
            for t in range(k):
                a = A[i, t]
                if a != 0:
                    for j in range(m):
                        C[i, j] = (C[i, j] + a * B[t, j]) % p
        return C

    @njit(cache=True)
    def _compose_tl_nb(top, bottom, n):
        # bottom applied first; result plus number of closed loops
        res = np.empty(2 * n, np.int64)
        seen = np.zeros(n, np.bool_)
        for start in range(2 * n):
            # walk until reaching an external point
            if start < n:
                y = bottom[start]
                while True:
                    if y < n:
                        res[start] = y
                        break
                    mid = y - n
                    seen[mid] = True
                    z = top[mid]
                    if z >= n:
                        res[start] = z
                        break
                    seen[z] = True
                    y = bottom[z + n]
            else:
                y = top[start]
                while True:
                    if y >= n:
                        res[start] = y
                        break
                    seen[y] = True
                    z = bottom[y + n]
                    if z < n:
                        res[start] = z
                        break
                    seen[z - n] = True
                    y = top[z - n]
        loops = 0
        for mid in range(n):
            if not seen[mid]:
                loops += 1
                cur = mid
                while True:
                    seen[cur] = True
                    nxt = top[cur]  # a lower point of the upper diagram
                    seen[nxt] = True
                    back = bottom[nxt + n] - n
                    if back == mid:
                        break
                    cur = back
        return res, loops

    @njit(cache=True)
    def _compose_tl_batch_nb(tops, bottoms, n):
        k = tops.shape[0]
        out = np.empty((k, 2 * n), np.int64)
        loops = np.empty(k, np.int64)
        for t in range(k):
            r, l = _compose_tl_nb(tops[t], bottoms[t], n)
            out[t] = r
            loops[t] = l
        return out, loops


# ----------------------------------------------------------- numpy fallbacks

def _rref_modp_np(A, p):
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = A[r] * inv % p
        f = A[:, c].copy()
        f[r] = 0
        hit = np.flatnonzero(f)
        if hit.size:
            A[hit] = (A[hit] - f[hit, None] * A[r] % p) % p
        pivots.append(c)
        r += 1
    return r, np.array(pivots, dtype=np.int64)


def _matmul_modp_np(A, B, p):
    # split B into 16-bit limbs so int64 sums cannot overflow
    lo = B & 0xFFFF
    hi = B >> 16
    c_lo = (A @ lo) % p
    c_hi = (A @ hi) % p
    return (c_hi * 65536 + c_lo) % p


def _trace_tl(top, bottom, n):
    res = [0] * (2 * n)
    seen = [False] * n
    for start in range(2 * n):
        if start < n:
            y = bottom[start]
            while True:
                if y < n:
                    res[start] = y
                    break
                mid = y - n
                seen[mid] = True
                z = top[mid]
                if z >= n:
                    res[start] = z
                    break
                seen[z] = True
                y = bottom[z + n]
        else:
            y = top[start]
            while True:
                if y >= n:
                    res[start] = y
                    break
                seen[y] = True
                z = bottom[y + n]
                if z < n:
                    res[start] = z
                    break
                seen[z - n] = True
                y = top[z - n]
    loops = 0
    for mid in range(n):
        if not seen[mid]:
            loops += 1
            cur = mid
            while True:
                seen[cur] = True
                nxt = top[cur]
                seen[nxt] = True
                back = bottom[nxt + n] - n
                if back == mid:
                    break
                cur = back
    return res, loops


def _compose_tl_batch_np(tops, bottoms, n):
    k = tops.shape[0]
    out = np.empty((k, 2 * n), np.int64)
    loops = np.empty(k, np.int64)
    for t in range(k):
        r, l = _trace_tl(tops[t].tolist(), bottoms[t].tolist(), n)
        out[t] = r
        loops[t] = l
    return out, loops


# ------------------------------------------------------------- public API

def rref_modp(A: np.ndarray, p: int) -> tuple[int, np.ndarray]:
    """Reduce ``A`` (int64, entries in [0, p)) to reduced row echelon form in place."""
    if A.size == 0:
        return 0, np.zeros(0, np.int64)
    if NUMBA_ENABLED:
        return _rref_modp_nb(A, p)
    return _rref_modp_np(A, p)


def matmul_modp(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    if A.shape[1] == 0:
        return np.zeros((A.shape[0], B.shape[1]), np.int64)
    if NUMBA_ENABLED:
        return _matmul_modp_nb(np.ascontiguousarray(A), np.ascontiguousarray(B), p)
    return _matmul_modp_np(A, B, p)


def compose_tl(top, bottom, n: int) -> tuple[tuple, int]:
    """Stack partner array ``top`` on ``bottom``; return (partner tuple, loops)."""
    res, loops = _trace_tl(top, bottom, n)
    return tuple(res), loops


def compose_tl_batch(tops: np.ndarray, bottoms: np.ndarray, n: int):
    """Vectorised composition of many (top, bottom) pairs of partner arrays."""
    tops = np.ascontiguousarray(tops, dtype=np.int64)
    bottoms = np.ascontiguousarray(bottoms, dtype=np.int64)
    if NUMBA_ENABLED:
        return _compose_tl_batch_nb(tops, bottoms, n)
    return _compose_tl_batch_np(tops, bottoms, n)
