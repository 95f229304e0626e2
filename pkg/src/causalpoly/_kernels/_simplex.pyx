# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled phase-I simplex with integer-preserving pivots and Bland's rule.

Solves  A w = b, w >= 0  (b >= 0) by minimising the sum of artificial
variables.  This is the revised form of the fraction-free tableau in
``pysimplex``: only the artificial block R = det * B^-1, the right-hand side
and the artificial reduced costs are stored.  Any other tableau column is
R A_j and its reduced cost is (zart - det) . A_j, so the pivot sequence and
every returned integer are identical to the tableau version.  Products use
128-bit integers; a value that does not fit in 64 bits aborts with status
OVERFLOW and the caller reruns the pure-Python twin.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef extern from *:
    ctypedef long long i128 "__int128"

FEASIBLE, INFEASIBLE, PIVOT_LIMIT, OVERFLOW = 0, 1, 2, 3

cdef i128 I64MAX = 9223372036854775807


cdef inline bint too_big(i128 v) noexcept nogil:
    return v > I64MAX or v < -I64MAX


def phase1(A, b, long max_pivots=100000):
    """Returns (status, basis, rhs, zart, det).

    basis[i] is the column basic in row i (columns m..m+r-1 are the
    artificial variables); the basic values are rhs[i] / det and the phase-I
    duals are y_i = 1 - zart[i] / det.
    """
    cdef cnp.ndarray[cnp.int64_t, ndim=2] Ac = np.ascontiguousarray(A, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] bc = np.ascontiguousarray(b, dtype=np.int64)
    cdef int r = Ac.shape[0], m = Ac.shape[1]
    cdef int i, j, k, pr, pc, it
    cdef int64_t* At = <int64_t*> malloc(m * r * sizeof(int64_t) + 1)     # column major copy of A
    cdef int64_t* R = <int64_t*> malloc(r * r * sizeof(int64_t) + 1)
    cdef int64_t* rhs = <int64_t*> malloc(r * sizeof(int64_t) + 1)
    cdef int64_t* zart = <int64_t*> malloc(r * sizeof(int64_t) + 1)
    cdef int64_t* col = <int64_t*> malloc(r * sizeof(int64_t) + 1)
    cdef int64_t* dual = <int64_t*> malloc(r * sizeof(int64_t) + 1)
    cdef int* basis = <int*> malloc(r * sizeof(int) + 1)
    cdef i128 det = 1, piv, v, f, zpc, best_num, best_den, num, den, acc
    cdef int status = PIVOT_LIMIT
    cdef bint overflow = False
    if At == NULL or R == NULL or rhs == NULL or zart == NULL or col == NULL or dual == NULL or basis == NULL:
        free(At); free(R); free(rhs); free(zart); free(col); free(dual); free(basis)
        raise MemoryError()
    try:
        for i in range(r):
            for j in range(m):
                At[j * r + i] = Ac[i, j]
            for k in range(r):
                R[i * r + k] = 1 if i == k else 0
            rhs[i] = bc[i]
            zart[i] = 0
            basis[i] = m + i
        for it in range(max_pivots):
            # pricing: first column with a negative reduced cost
            for i in range(r):
                v = <i128> zart[i] - det
                if too_big(v):
                    overflow = True
                dual[i] = <int64_t> v
            if overflow:
                status = OVERFLOW
                break
            pc = -1
            zpc = 0
            for j in range(m):
                acc = 0
                for i in range(r):
                    acc += <i128> dual[i] * At[j * r + i]
                if acc < 0:
                    pc = j
                    zpc = acc
                    break
            if pc < 0:
                for i in range(r):
                    if zart[i] < 0:
                        pc = m + i
                        zpc = zart[i]
                        break
            if pc < 0:
                acc = 0
                for i in range(r):
                    acc += <i128> dual[i] * bc[i]
                status = FEASIBLE if acc == 0 else INFEASIBLE
                break
            if too_big(zpc):
                status = OVERFLOW
                break
            # entering column R A_pc (or a column of R for an artificial)
            for i in range(r):
                if pc >= m:
                    col[i] = R[i * r + pc - m]
                else:
                    acc = 0
                    for k in range(r):
                        acc += <i128> R[i * r + k] * At[pc * r + k]
                    if too_big(acc):
                        overflow = True
                    col[i] = <int64_t> acc
            if overflow:
                status = OVERFLOW
                break
            pr = -1
            for i in range(r):
                den = col[i]
                if den <= 0:
                    continue
                num = rhs[i]
                if pr < 0 or num * best_den < best_num * den or (
                        num * best_den == best_num * den and basis[i] < basis[pr]):
                    pr = i
                    best_num = num
                    best_den = den
            if pr < 0:
                raise ArithmeticError("phase-I objective unbounded")
            piv = col[pr]
            for i in range(r):
                if i == pr:
                    continue
                f = col[i]
                for k in range(r):
                    v = (piv * R[i * r + k] - f * R[pr * r + k]) / det
                    if too_big(v):
                        overflow = True
                    R[i * r + k] = <int64_t> v
                v = (piv * rhs[i] - f * rhs[pr]) / det
                if too_big(v):
                    overflow = True
                rhs[i] = <int64_t> v
            for k in range(r):
                v = (piv * zart[k] - zpc * R[pr * r + k]) / det
                if too_big(v):
                    overflow = True
                zart[k] = <int64_t> v
            if overflow:
                status = OVERFLOW
                break
            det = piv
            basis[pr] = pc
        return (status, [basis[i] for i in range(r)], [rhs[i] for i in range(r)],
                [zart[i] for i in range(r)], int(<int64_t> det))
    finally:
        free(At); free(R); free(rhs); free(zart); free(col); free(dual); free(basis)
