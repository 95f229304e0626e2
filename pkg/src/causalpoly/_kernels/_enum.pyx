# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lazy-scenario enumeration kernel.

Same packing and semantics as ``pyenum``; responses must fit in 64 bits, so
n <= 4 (n * 2**n output bits).
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t, uint32_t
from libc.stdlib cimport malloc, realloc, free
from posix.time cimport clock_gettime, timespec, CLOCK_MONOTONIC

from causalpoly.errors import BudgetExceeded

cnp.import_array()

DEF MAXB = 8
DEF MAXL = 40
MAX_N = 4


cdef inline bint depends_only(uint64_t mask, int n, uint32_t parties, uint32_t allowed,
                              uint32_t cp, uint32_t cx) noexcept nogil:
    cdef uint32_t x
    cdef uint32_t nx = 1u << n
    cdef uint64_t full = nx - 1
    for x in range(nx):
        if (x & cp) != cx:
            continue
        if (((mask >> (n * x)) ^ (mask >> (n * (x & allowed)))) & full) & parties:
            return False
    return True


cdef bint first_works(uint64_t mask, int n, const uint32_t* blocks, int nb, int i,
                      bint ordered, uint32_t cp, uint32_t cx) noexcept nogil:
    cdef uint32_t rest[MAXB]
    cdef uint32_t b = blocks[i]
    cdef uint32_t v
    cdef int j, k = 0
    if not depends_only(mask, n, b, b | cp, cp, cx):
        return False
    if nb == 2:
        return True
    for j in range(nb):
        if j != i:
            rest[k] = blocks[j]
            k += 1
    v = b
    while True:
        if not is_causal_c(mask, n, rest, nb - 1, ordered, cp | b, cx | v):
            return False
        if v == 0:
            break
        v = (v - 1) & b
    return True


cdef bint is_causal_c(uint64_t mask, int n, const uint32_t* blocks, int nb,
                      bint ordered, uint32_t cp, uint32_t cx) noexcept nogil:
    cdef int i
    if nb <= 1:
        return True
    for i in range(1 if ordered else nb):
        if first_works(mask, n, blocks, nb, i, ordered, cp, cx):
            return True
    return False


cdef struct U64Vec:
    uint64_t* data
    Py_ssize_t size
    Py_ssize_t cap


cdef int vec_push(U64Vec* v, uint64_t x) noexcept nogil:
    cdef Py_ssize_t cap
    cdef uint64_t* p
    if v.size == v.cap:
        cap = 1024 if v.cap == 0 else 2 * v.cap
        p = <uint64_t*> realloc(v.data, cap * sizeof(uint64_t))
        if p == NULL:
            return -1
        v.data = p
        v.cap = cap
    v.data[v.size] = x
    v.size += 1
    return 0


cdef struct Lists:
    int k
    uint64_t* ptr[MAXL]
    Py_ssize_t length[MAXL]


cdef struct Scan:
    int n
    bint ordered
    # skip responses owned by an earlier first block of the same node
    uint32_t blocks[MAXB]
    int nb
    int first
    uint32_t cp
    uint32_t cx
    int mode            # 0 collect node list, 1 top-level sink
    U64Vec out
    # top level
    uint32_t* prev_blocks
    int* prev_nb
    int nprev
    int64_t* weights
    bint has_w
    int64_t target
    bint has_target
    int store
    Py_ssize_t max_store
    long long count
    long long nmin
    long long ntarget
    int64_t vmin
    bint have_min
    double deadline


cdef inline double now() noexcept nogil:
    cdef timespec ts
    clock_gettime(CLOCK_MONOTONIC, &ts)
    return ts.tv_sec + 1e-9 * ts.tv_nsec


cdef int emit(Scan* s, uint64_t m) noexcept nogil:
    # 0 ok, -1 out of memory, 1 store budget, 2 time budget
    cdef int j, u, off
    cdef uint32_t x, nx
    cdef int64_t val
    cdef bint keep
    for j in range(s.first):
        if first_works(m, s.n, s.blocks, s.nb, j, s.ordered, s.cp, s.cx):
            return 0
    if s.mode == 0:
        return vec_push(&s.out, m)
    off = 0
    for u in range(s.nprev):
        if is_causal_c(m, s.n, s.prev_blocks + off, s.prev_nb[u], s.ordered, 0, 0):
            return 0
        off += s.prev_nb[u]
    s.count += 1
    if (s.count & 0xFFFF) == 0 and s.deadline > 0 and now() > s.deadline:
        return 2
    keep = s.store == 1
    if s.has_w:
        nx = 1u << s.n
        val = 0
        for x in range(nx):
            val += s.weights[x * nx + ((m >> (s.n * x)) & (nx - 1))]
        if not s.have_min or val < s.vmin:
            s.vmin = val
            s.nmin = 1
            s.have_min = True
        elif val == s.vmin:
            s.nmin += 1
        if s.has_target and val == s.target:
            s.ntarget += 1
            keep = keep or s.store == 2
    if keep:
        if s.max_store and s.out.size >= s.max_store:
            return 1
        return vec_push(&s.out, m)
    return 0


cdef int run_product(Lists* L, Scan* s) noexcept nogil:
    cdef Py_ssize_t idx[MAXL]
    cdef uint64_t prefix[MAXL + 1]
    cdef int k = L.k
    cdef int j, t, r
    if k == 0:
        return emit(s, 0)
    prefix[0] = 0
    for j in range(k):
        idx[j] = 0
        prefix[j + 1] = prefix[j] | L.ptr[j][0]
    while True:
        r = emit(s, prefix[k])
        if r != 0:
            return r
        j = k - 1
        while j >= 0:
            idx[j] += 1
            if idx[j] < L.length[j]:
                break
            idx[j] = 0
            j -= 1
        if j < 0:
            return 0
        for t in range(j, k):
            prefix[t + 1] = prefix[t] | L.ptr[t][idx[t]]


def _submasks(b):
    v = b
    while True:
        yield v
        if v == 0:
            return
        v = (v - 1) & b


cdef class _Enumerator:
    cdef int n
    cdef bint ordered
    cdef dict memo

    def __init__(self, int n, bint ordered):
        if not 1 <= n <= MAX_N:
            raise ValueError(f"compiled kernel handles 1 <= n <= {MAX_N}")
        self.n = n
        self.ordered = ordered
        self.memo = {}

    def free_lists(self, int block, int cp, int cx):
        n = self.n
        out = []
        for x in range(1 << n):
            if (x & cp) != cx:
                continue
            out.append(np.array([a << (n * x) for a in _submasks(x & block)], dtype=np.uint64))
        return out

    def first_block_lists(self, int block, int cp, int cx):
        n = self.n
        out = []
        for v in _submasks(block):
            xs = [x for x in range(1 << n) if (x & cp) == cx and (x & block) == v]
            opts = []
            for a in _submasks(v):
                m = 0
                for x in xs:
                    m |= a << (n * x)
                opts.append(m)
            out.append(np.array(opts, dtype=np.uint64))
        return out

    def child_lists(self, tuple blocks, int i, int cp, int cx):
        b = blocks[i]
        rest = blocks[:i] + blocks[i + 1:]
        lists = self.first_block_lists(b, cp, cx)
        for v in _submasks(b):
            lists.append(self.node(rest, cp | b, cx | v))
        return lists

    def node(self, tuple blocks, int cp, int cx):
        key = (blocks, cp, cx)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        cdef Scan s
        s.n = self.n
        s.ordered = self.ordered
        s.mode = 0
        s.out.data = NULL
        s.out.size = 0
        s.out.cap = 0
        s.first = 0
        try:
            if len(blocks) == 1:
                self._run(self.free_lists(blocks[0], cp, cx), &s)
            else:
                self._set_blocks(&s, blocks, cp, cx)
                for i in range(1 if self.ordered else len(blocks)):
                    s.first = i
                    self._run(self.child_lists(blocks, i, cp, cx), &s)
            arr = np.empty(s.out.size, dtype=np.uint64)
            for j in range(s.out.size):
                arr[j] = s.out.data[j]
        finally:
            free(s.out.data)
        self.memo[key] = arr
        return arr

    cdef void _set_blocks(self, Scan* s, tuple blocks, int cp, int cx):
        cdef int j
        s.nb = len(blocks)
        for j in range(s.nb):
            s.blocks[j] = blocks[j]
        s.cp = cp
        s.cx = cx

    cdef int _run(self, list lists, Scan* s) except -3:
        cdef Lists L
        cdef cnp.ndarray[cnp.uint64_t, ndim=1] a
        cdef int r
        if len(lists) > MAXL:
            raise ValueError("too many factor lists")
        L.k = len(lists)
        for j, arr in enumerate(lists):
            a = arr
            L.ptr[j] = <uint64_t*> a.data
            L.length[j] = a.shape[0]
        with nogil:
            r = run_product(&L, s)
        if r == -1:
            raise MemoryError("vertex buffer allocation failed")
        return r


def is_causal(mask, int n, blocks, bint ordered=False, int cp=0, int cx=0):
    cdef uint32_t b[MAXB]
    cdef int j, nb = len(blocks)
    if not 1 <= n <= MAX_N or nb > MAXB:
        raise ValueError(f"compiled kernel handles 1 <= n <= {MAX_N}")
    for j in range(nb):
        b[j] = blocks[j]
    return bool(is_causal_c(<uint64_t> mask, n, b, nb, ordered, cp, cx))


def any_causal(masks, int n, partitions, bint ordered=False):
    """Boolean array: response i is causal for at least one of ``partitions``."""
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] m = np.ascontiguousarray(masks, dtype=np.uint64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out = np.zeros(m.shape[0], dtype=np.uint8)
    cdef uint32_t flat[64 * MAXB]
    cdef int nbs[64]
    cdef int u, j, off, np_ = len(partitions)
    cdef Py_ssize_t i
    if np_ > 64:
        raise ValueError("at most 64 partitions per call")
    off = 0
    for u, p in enumerate(partitions):
        nbs[u] = len(p)
        for j in range(nbs[u]):
            flat[off + j] = p[j]
        off += nbs[u]
    with nogil:
        for i in range(m.shape[0]):
            off = 0
            for u in range(np_):
                if is_causal_c(m[i], n, flat + off, nbs[u], ordered, 0, 0):
                    out[i] = 1
                    break
                off += nbs[u]
    return out.astype(bool)


def scan_class(int n, partitions, bint ordered=False, weights=None, target=None,
               int store=0, Py_ssize_t max_store=0, double time_limit=0.0):
    """Compiled twin of ``pyenum.scan_class``; weights and target must be integers."""
    cdef _Enumerator en = _Enumerator(n, ordered)
    cdef Scan s
    cdef cnp.ndarray[cnp.int64_t, ndim=1] w
    cdef cnp.ndarray[cnp.uint32_t, ndim=1] prev
    cdef cnp.ndarray[cnp.int32_t, ndim=1] prev_nb
    cdef int r = 0
    parts = [tuple(p) for p in partitions]
    flat = [b for p in parts for b in p]
    prev = np.array(flat if flat else [0], dtype=np.uint32)
    prev_nb = np.array([len(p) for p in parts] or [0], dtype=np.int32)
    s.n = n
    s.ordered = ordered
    s.mode = 1
    s.out.data = NULL
    s.out.size = 0
    s.out.cap = 0
    s.prev_blocks = <uint32_t*> prev.data
    s.prev_nb = <int*> prev_nb.data
    s.store = store
    s.max_store = max_store
    s.count = 0
    s.nmin = 0
    s.ntarget = 0
    s.vmin = 0
    s.have_min = False
    s.has_w = weights is not None
    if s.has_w:
        w = np.array([int(v) for v in weights], dtype=np.int64)
        if w.shape[0] != (1 << (2 * n)):
            raise ValueError("weights must have length 4**n")
        s.weights = <int64_t*> w.data
    s.has_target = target is not None
    s.target = int(target) if target is not None else 0
    s.deadline = now() + time_limit if time_limit > 0 else 0.0
    try:
        for t, blocks in enumerate(parts):
            s.nprev = t
            if len(blocks) == 1:
                s.first = 0
                s.nb = 1
                r = en._run(en.free_lists(blocks[0], 0, 0), &s)
            else:
                en._set_blocks(&s, blocks, 0, 0)
                for i in range(1 if ordered else len(blocks)):
                    s.first = i
                    r = en._run(en.child_lists(blocks, i, 0, 0), &s)
                    if r:
                        break
            if r:
                break
        if r == 1:
            raise BudgetExceeded(f"more than {max_store} vertices requested for storage")
        if r == 2:
            raise BudgetExceeded(f"time limit of {time_limit}s exceeded after {s.count} vertices")
        masks = np.empty(s.out.size, dtype=np.uint64)
        for j in range(s.out.size):
            masks[j] = s.out.data[j]
    finally:
        free(s.out.data)
    return {"count": int(s.count), "min": int(s.vmin) if s.have_min else None,
            "argmin_count": int(s.nmin), "target_count": int(s.ntarget), "masks": masks}
