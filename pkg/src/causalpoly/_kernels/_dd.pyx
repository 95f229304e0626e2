# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled double description core.

Cone {y : A y >= 0}.  Rows are inserted in the given order; the first d rows
must be linearly independent and ``init_rays`` the matching simplicial rays
(ray j tight on initial rows i != j).  Adjacency of a (+,-) ray pair is the
algebraic test: the rows tight on both have rank d - 2.  Ranks are taken
modulo the Mersenne prime 2**61 - 1, which is exact when every minor of A is
smaller than the prime; the caller checks the Hadamard bound.
"""
import time

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memcpy, memset

cnp.import_array()

cdef extern from *:
    ctypedef long long i128 "__int128"
    ctypedef unsigned long long u128 "unsigned __int128"

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil

cdef uint64_t MP = (1ULL << 61) - 1
MODULUS = (1 << 61) - 1

OK, RAY_BUDGET, TIME_BUDGET, OVERFLOW = 0, 1, 2, 3


cdef inline uint64_t mulmod(uint64_t a, uint64_t b) noexcept nogil:
    cdef u128 z = <u128> a * b
    cdef uint64_t r = <uint64_t> (z & MP) + <uint64_t> (z >> 61)
    r = (r & MP) + (r >> 61)
    if r >= MP:
        r -= MP
    return r


cdef inline uint64_t submod(uint64_t a, uint64_t b) noexcept nogil:
    return a - b if a >= b else a + MP - b


cdef inline uint64_t tomod(int64_t v) noexcept nogil:
    if v >= 0:
        return (<uint64_t> v) % MP
    return (MP - ((<uint64_t> (-v)) % MP)) % MP


cdef int rank_modp(const uint64_t* Am, int d, const uint64_t* zset, int words,
                   int target, uint64_t* buf) noexcept nogil:
    """Rank (capped at target) of the rows whose bits are set in zset.

    Rows are reduced one at a time against the echelon rows found so far, so
    the work stops as soon as the target rank is reached.
    """
    cdef int total = 0, w, b, r = 0, i, j, pc, seen = 0
    cdef uint64_t word, f, pv
    cdef uint64_t* cur
    cdef int pivc[256]
    for w in range(words):
        total += __builtin_popcountll(zset[w])
    if total < target:
        return total
    for w in range(words):
        word = zset[w]
        while word:
            b = __builtin_ctzll(word)
            word &= word - 1
            seen += 1
            cur = buf + r * d
            memcpy(cur, Am + (w * 64 + b) * d, d * sizeof(uint64_t))
            for i in range(r):
                pc = pivc[i]
                f = cur[pc]
                if f:
                    pv = buf[i * d + pc]
                    for j in range(d):
                        cur[j] = submod(mulmod(pv, cur[j]), mulmod(f, buf[i * d + j]))
            pc = -1
            for j in range(d):
                if cur[j]:
                    pc = j
                    break
            if pc >= 0:
                pivc[r] = pc
                r += 1
                if r >= target:
                    return r
            if r + (total - seen) < target:
                return r
    return r


cdef inline u128 uabs(i128 v) noexcept nogil:
    return <u128> (-v) if v < 0 else <u128> v


cdef inline u128 gcd128(u128 a, u128 b) noexcept nogil:
    cdef u128 t
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef struct Buf:
    int64_t* rays
    uint64_t* zs
    Py_ssize_t size
    Py_ssize_t cap


cdef int buf_reserve(Buf* B, Py_ssize_t need, int d, int words) noexcept nogil:
    cdef Py_ssize_t cap
    cdef int64_t* r
    cdef uint64_t* z
    if need <= B.cap:
        return 0
    cap = B.cap * 2 if B.cap else 1024
    while cap < need:
        cap *= 2
    r = <int64_t*> realloc(B.rays, cap * d * sizeof(int64_t))
    if r == NULL:
        return -1
    B.rays = r
    z = <uint64_t*> realloc(B.zs, cap * words * sizeof(uint64_t))
    if z == NULL:
        return -1
    B.zs = z
    B.cap = cap
    return 0


def dd_core(cnp.ndarray[cnp.int64_t, ndim=2] A, cnp.ndarray[cnp.int64_t, ndim=2] init_rays,
            Py_ssize_t max_rays=0, double time_limit=0.0, progress=None):
    """Extreme rays of {y : A y >= 0}; returns (rays, status, rows_done, peak)."""
    cdef int m = A.shape[0], d = A.shape[1]
    cdef int words = (m + 63) // 64
    cdef int k, i, j, w, kw, cnt
    cdef Py_ssize_t a, b, R, nP, nN, peak
    cdef uint64_t bit
    cdef int64_t* row
    cdef i128 acc, sa, sb, v
    cdef u128 g
    cdef bint overflow = False
    cdef Buf cur, nxt, tmp
    cdef cnp.ndarray[cnp.int64_t, ndim=2] Ac = np.ascontiguousarray(A)
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] Am = np.empty((m, d), dtype=np.uint64)
    cdef uint64_t* rbuf = <uint64_t*> malloc(m * d * sizeof(uint64_t))
    cdef i128* s = NULL
    cdef Py_ssize_t* Pidx = NULL
    cdef Py_ssize_t* Nidx = NULL
    cdef uint64_t* c = <uint64_t*> malloc(words * sizeof(uint64_t))
    cdef int64_t tmpray[256]
    cdef i128 big[256]
    cdef int status = OK
    if d > 256:
        raise ValueError("dimension too large")
    for i in range(m):
        for j in range(d):
            Am[i, j] = tomod(Ac[i, j])
    cur.rays = NULL; cur.zs = NULL; cur.size = 0; cur.cap = 0
    nxt.rays = NULL; nxt.zs = NULL; nxt.size = 0; nxt.cap = 0
    start = time.monotonic()
    try:
        if buf_reserve(&cur, d, d, words):
            raise MemoryError()
        for j in range(d):
            for i in range(d):
                cur.rays[j * d + i] = init_rays[j, i]
            memset(cur.zs + j * words, 0, words * sizeof(uint64_t))
            for i in range(d):
                if i != j:
                    cur.zs[j * words + i // 64] |= 1ULL << (i % 64)
        cur.size = d
        peak = d
        k = d
        while k < m:
            R = cur.size
            s = <i128*> realloc(s, (R + 1) * sizeof(i128))
            Pidx = <Py_ssize_t*> realloc(Pidx, (R + 1) * sizeof(Py_ssize_t))
            Nidx = <Py_ssize_t*> realloc(Nidx, (R + 1) * sizeof(Py_ssize_t))
            if s == NULL or Pidx == NULL or Nidx == NULL:
                raise MemoryError()
            row = &Ac[k, 0]
            nP = 0
            nN = 0
            for a in range(R):
                acc = 0
                for j in range(d):
                    acc += <i128> row[j] * cur.rays[a * d + j]
                s[a] = acc
                if acc > 0:
                    Pidx[nP] = a
                    nP += 1
                elif acc < 0:
                    Nidx[nN] = a
                    nN += 1
            kw = k // 64
            bit = 1ULL << (k % 64)
            nxt.size = 0
            if buf_reserve(&nxt, R - nN, d, words):
                raise MemoryError()
            for a in range(R):
                if s[a] >= 0:
                    memcpy(nxt.rays + nxt.size * d, cur.rays + a * d, d * sizeof(int64_t))
                    memcpy(nxt.zs + nxt.size * words, cur.zs + a * words, words * sizeof(uint64_t))
                    if s[a] == 0:
                        nxt.zs[nxt.size * words + kw] |= bit
                    nxt.size += 1
            for i in range(nP):
                a = Pidx[i]
                for j in range(nN):
                    b = Nidx[j]
                    cnt = 0
                    for w in range(kw + 1):
                        c[w] = cur.zs[a * words + w] & cur.zs[b * words + w]
                        cnt += __builtin_popcountll(c[w])
                    if cnt < d - 2:
                        continue
                    for w in range(kw + 1, words):
                        c[w] = 0
                    if rank_modp(<uint64_t*> Am.data, d, c, kw + 1, d - 2, rbuf) < d - 2:
                        continue
                    sa = s[a]
                    sb = -s[b]
                    g = 0
                    for w in range(d):
                        v = sa * cur.rays[b * d + w] + sb * cur.rays[a * d + w]
                        big[w] = v
                        g = gcd128(g, uabs(v))
                    for w in range(d):
                        v = big[w] / <i128> g
                        if v > 9223372036854775807 or v < -9223372036854775807:
                            overflow = True
                        tmpray[w] = <int64_t> v
                    if overflow:
                        break
                    if buf_reserve(&nxt, nxt.size + 1, d, words):
                        raise MemoryError()
                    memcpy(nxt.rays + nxt.size * d, tmpray, d * sizeof(int64_t))
                    memcpy(nxt.zs + nxt.size * words, c, words * sizeof(uint64_t))
                    nxt.zs[nxt.size * words + kw] |= bit
                    nxt.size += 1
                if overflow:
                    break
            if overflow:
                status = OVERFLOW
                break
            tmp = cur
            cur = nxt
            nxt = tmp
            k += 1
            if cur.size > peak:
                peak = cur.size
            if progress is not None:
                progress(k, m, cur.size)
            if max_rays and cur.size > max_rays:
                status = RAY_BUDGET
                break
            if time_limit > 0 and time.monotonic() - start > time_limit:
                status = TIME_BUDGET
                break
        out = np.empty((cur.size, d), dtype=np.int64)
        for a in range(cur.size):
            for j in range(d):
                out[a, j] = cur.rays[a * d + j]
        return out, status, k, peak
    finally:
        free(cur.rays); free(cur.zs); free(nxt.rays); free(nxt.zs)
        free(rbuf); free(s); free(Pidx); free(Nidx); free(c)


def rank_mod_prime(rows):
    """Rank of an integer matrix modulo 2**61 - 1."""
    cdef cnp.ndarray[cnp.int64_t, ndim=2] M = np.ascontiguousarray(rows, dtype=np.int64)
    cdef int n = M.shape[0], d = M.shape[1], i, j
    if n == 0 or d == 0:
        return 0
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] Mm = np.empty((n, d), dtype=np.uint64)
    for i in range(n):
        for j in range(d):
            Mm[i, j] = tomod(M[i, j])
    cdef int words = (n + 63) // 64
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] z = np.full(words, 0xFFFFFFFFFFFFFFFF, dtype=np.uint64)
    if n % 64:
        z[words - 1] = (1 << (n % 64)) - 1
    cdef uint64_t* buf = <uint64_t*> malloc(n * d * sizeof(uint64_t))
    try:
        return rank_modp(<uint64_t*> Mm.data, d, <uint64_t*> z.data, words, min(n, d), buf)
    finally:
        free(buf)
