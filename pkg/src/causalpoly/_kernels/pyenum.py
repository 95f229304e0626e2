"""Pure-Python lazy-scenario enumeration kernel (fallback for ``_enum.pyx``).

Deterministic responses are packed into an int: the n output bits for the
input ``x`` (party 1 = most significant bit) live at bit offset ``n * x``.
Party sets are bitmasks over the same n bits.  ``blocks`` is a tuple of party
bitmasks; with ``ordered`` the blocks must act in the listed order.
"""
from __future__ import annotations

import time

from ..errors import BudgetExceeded


def _submasks(b):
    v = b
    while True:
        yield v
        if v == 0:
            return
        v = (v - 1) & b


def _out(mask, n, x):
    return (mask >> (n * x)) & ((1 << n) - 1)


def depends_only(mask, n, parties, allowed, cp, cx):
    """Outputs of ``parties`` depend only on the inputs of ``allowed`` (inputs cp fixed to cx)."""
    for x in range(1 << n):
        if (x & cp) != cx:
            continue
        if (_out(mask, n, x) ^ _out(mask, n, x & allowed)) & parties:
            return False
    return True


def first_block_works(mask, n, blocks, i, ordered, cp, cx):
    b = blocks[i]
    if not depends_only(mask, n, b, b | cp, cp, cx):
        return False
    rest = blocks[:i] + blocks[i + 1:]
    for v in _submasks(b):
        if not is_causal(mask, n, rest, ordered, cp | b, cx | v):
            return False
    return True


def is_causal(mask, n, blocks, ordered=False, cp=0, cx=0):
    if len(blocks) <= 1:
        return True
    for i in range(1 if ordered else len(blocks)):
        if first_block_works(mask, n, blocks, i, ordered, cp, cx):
            return True
    return False


def _product(lists):
    # odometer over lists of int masks, yielding the OR of one pick per list
    if not lists:
        yield 0
        return
    k = len(lists)
    idx = [0] * k
    prefix = [0] * (k + 1)
    for j in range(k):
        prefix[j + 1] = prefix[j] | lists[j][0]
    while True:
        yield prefix[k]
        j = k - 1
        while j >= 0:
            idx[j] += 1
            if idx[j] < len(lists[j]):
                break
            idx[j] = 0
            j -= 1
        if j < 0:
            return
        for t in range(j, k):
            prefix[t + 1] = prefix[t] | lists[t][idx[t]]


class _Enumerator:
    def __init__(self, n, ordered):
        self.n = n
        self.ordered = ordered
        self.memo = {}

    def free_lists(self, block, cp, cx):
        """Per-input pick lists for the outputs of ``block`` on inputs consistent with the context."""
        n = self.n
        lists = []
        for x in range(1 << n):
            if (x & cp) != cx:
                continue
            opts = [a << (n * x) for a in _submasks(x & block)]
            lists.append(opts)
        return lists

    def first_block_lists(self, block, cp, cx):
        # outputs of block depend only on its own inputs: one pick per value v of x_block
        n = self.n
        lists = []
        for v in _submasks(block):
            xs = [x for x in range(1 << n) if (x & cp) == cx and (x & block) == v]
            opts = []
            for a in _submasks(v):
                m = 0
                for x in xs:
                    m |= a << (n * x)
                opts.append(m)
            lists.append(opts)
        return lists

    def node(self, blocks, cp, cx):
        key = (blocks, cp, cx)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = []
        if len(blocks) == 1:
            out = list(_product(self.free_lists(blocks[0], cp, cx)))
        else:
            for i in range(1 if self.ordered else len(blocks)):
                for m in self.iter_first(blocks, i, cp, cx):
                    out.append(m)
        self.memo[key] = out
        return out

    def iter_first(self, blocks, i, cp, cx):
        """Responses generated with block i acting first, minus those owned by an earlier block."""
        n = self.n
        b = blocks[i]
        rest = blocks[:i] + blocks[i + 1:]
        lists = self.first_block_lists(b, cp, cx)
        for v in _submasks(b):
            lists.append(self.node(rest, cp | b, cx | v))
        for m in _product(lists):
            if i and any(first_block_works(m, n, blocks, j, self.ordered, cp, cx) for j in range(i)):
                continue
            yield m

    def iter_partition(self, blocks):
        if len(blocks) == 1:
            yield from _product(self.free_lists(blocks[0], 0, 0))
            return
        for i in range(1 if self.ordered else len(blocks)):
            yield from self.iter_first(blocks, i, 0, 0)


def scan_class(n, partitions, ordered=False, weights=None, target=None, store=0,
               max_store=0, time_limit=0.0):
    """Stream the union of the deterministic P-causal sets for ``partitions``.

    Each response is counted once, under the first partition (in list order)
    for which it is causal.  ``weights`` is a flat list of length 4**n giving
    w[x * 2**n + a]; the functional value of a response is sum_x w[x, a(x)].
    store: 0 nothing, 1 every response, 2 responses whose value == target.
    """
    start = time.monotonic()
    nx = 1 << n
    en = _Enumerator(n, ordered)
    count = 0
    vmin = None
    nmin = 0
    ntarget = 0
    stored = []
    parts = [tuple(p) for p in partitions]
    for t, blocks in enumerate(parts):
        for m in en.iter_partition(blocks):
            if t and any(is_causal(m, n, parts[u], ordered) for u in range(t)):
                continue
            count += 1
            if count & 0xFFFF == 0 and time_limit and time.monotonic() - start > time_limit:
                raise BudgetExceeded(f"time limit of {time_limit}s exceeded after {count} vertices")
            keep = store == 1
            if weights is not None:
                val = 0
                for x in range(nx):
                    val += weights[x * nx + ((m >> (n * x)) & (nx - 1))]
                if vmin is None or val < vmin:
                    vmin, nmin = val, 1
                elif val == vmin:
                    nmin += 1
                if target is not None and val == target:
                    ntarget += 1
                    keep = keep or store == 2
            if keep:
                if max_store and len(stored) >= max_store:
                    raise BudgetExceeded(f"more than {max_store} vertices requested for storage")
                stored.append(m)
    return {"count": count, "min": vmin, "argmin_count": nmin, "target_count": ntarget, "masks": stored}


def any_causal(masks, n, partitions, ordered=False):
    """List of bools: response i is causal for at least one of ``partitions``."""
    parts = [tuple(p) for p in partitions]
    return [any(is_causal(int(m), n, p, ordered) for p in parts) for m in masks]
