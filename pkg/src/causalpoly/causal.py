"""Causal classes, deterministic classification and vertex enumeration.

A deterministic correlation is P-causal when some block acts first (its
outputs depend on its own inputs only) and, for each value of that block's
inputs, the remaining parties are causal for the remaining blocks.  The
lazy scenario with n <= 4 goes through the compiled kernel; any other
scenario uses the generic recursion below.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import BudgetExceeded
from .partition import Partition, iter_partitions
from .scenario import (Correlation, DetCorrelation, Scenario, all_deterministic, count_deterministic,
                       det_to_mask, make_lazy_scenario, mask_to_det)

DEFAULT_MAX_VERTICES = 5_000_000


# ---------------------------------------------------------------------------
# classes

@dataclass(frozen=True)
class FullyCausal:
    def partitions(self, n):
        return [Partition.singletons(n)]

    def __str__(self):
        return "fully"


@dataclass(frozen=True)
class TwoCausal:
    def partitions(self, n):
        if n == 1:
            return [Partition.trivial(1)]
        return list(iter_partitions(n, min_blocks=2))

    def __str__(self):
        return "2causal"


@dataclass(frozen=True)
class MCausal:
    m: int
    exact_blocks: bool = False

    def partitions(self, n):
        if not 1 <= self.m <= n:
            raise ValueError(f"M must lie in [1, {n}], got {self.m}")
        if n == 1:
            return [Partition.trivial(1)]
        if self.m == 1 and not self.exact_blocks:
            return [Partition.trivial(n)]
        return list(iter_partitions(n, min_blocks=self.m, exact_blocks=self.m if self.exact_blocks else None))

    def __str__(self):
        return f"{'m=' if self.exact_blocks else 'm:'}{self.m}"


@dataclass(frozen=True)
class SizeSCausal:
    s: int

    def partitions(self, n):
        if not 1 <= self.s <= n:
            raise ValueError(f"S must lie in [1, {n}], got {self.s}")
        if n == 1 or self.s == n:
            return [Partition.trivial(n)]
        return list(iter_partitions(n, max_block_size=self.s))

    def __str__(self):
        return f"s:{self.s}"


@dataclass(frozen=True)
class PCausal:
    partition: Partition

    def partitions(self, n):
        if self.partition.n != n:
            raise ValueError(f"partition {self.partition} is not over {n} parties")
        return [self.partition]

    def __str__(self):
        return f"p:{self.partition}"


@dataclass(frozen=True)
class FixedOrder:
    """Singletons acting in the fixed order ``order`` (0-based parties)."""

    order: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError(f"not a permutation: {self.order}")

    def partitions(self, n):
        if len(self.order) != n:
            raise ValueError(f"order {self.order} is not over {n} parties")
        return [Partition.singletons(n)]

    def __str__(self):
        return "order:" + ",".join(str(k + 1) for k in self.order)


CausalClass = FullyCausal | TwoCausal | MCausal | SizeSCausal | PCausal | FixedOrder


def parse_class(text: str) -> CausalClass:
    """'fully', '2causal', 'm:3', 'm=3' (exactly 3 blocks), 's:2', 'p:1|2,3', 'order:2,1,3'."""
    t = text.strip().lower()
    try:
        if t in ("fully", "fullycausal", "causal"):
            return FullyCausal()
        if t in ("2causal", "2-causal", "two"):
            return TwoCausal()
        if t.startswith("m:"):
            return MCausal(int(t[2:]))
        if t.startswith("m="):
            return MCausal(int(t[2:]), exact_blocks=True)
        if t.startswith("s:"):
            return SizeSCausal(int(t[2:]))
        if t.startswith("p:"):
            return PCausal(Partition.parse(t[2:]))
        if t.startswith("order:"):
            return FixedOrder(tuple(int(v) - 1 for v in t[6:].split(",")))
    except ValueError as exc:
        raise ValueError(f"malformed class {text!r}: {exc}") from exc
    raise ValueError(f"unknown class {text!r}")


def check_class(cls: CausalClass, n: int) -> None:
    cls.partitions(n)


def enumeration_blocks(cls: CausalClass, n: int) -> tuple[list[tuple[int, ...]], bool]:
    """Party-bitmask blocks per partition for the kernels, and the ordered flag.

    For TwoCausal only the bipartitions are listed: the first block of a
    deterministic P-causal response acts before everyone else, so the
    response is also {first, rest}-causal.
    """
    if isinstance(cls, FixedOrder):
        if len(cls.order) != n:
            raise ValueError(f"order {cls.order} is not over {n} parties")
        return [tuple(1 << (n - 1 - k) for k in cls.order)], True
    parts = cls.partitions(n)
    if isinstance(cls, TwoCausal) and n > 1:
        parts = [p for p in parts if len(p) == 2]
    return [partition_masks(p) for p in parts], False


def partition_masks(p: Partition) -> tuple[int, ...]:
    n = p.n
    return tuple(sum(1 << (n - 1 - k) for k in b) for b in p.blocks)


# ---------------------------------------------------------------------------
# compatibility with a fixed order of groups

@dataclass(frozen=True)
class GroupOrder:
    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        groups = tuple(tuple(sorted(g)) for g in self.groups)
        flat = [k for g in groups for k in g]
        if any(not g for g in groups) or len(flat) != len(set(flat)):
            raise ValueError(f"groups must be nonempty and disjoint: {groups}")
        object.__setattr__(self, "groups", groups)

    @classmethod
    def parse(cls, text: str) -> "GroupOrder":
        """'1<2,3' means {A1} before {A2, A3}."""
        return cls(tuple(tuple(int(v) - 1 for v in g.split(",")) for g in text.split("<")))


def is_compatible_with_order(p: Correlation | DetCorrelation, order: GroupOrder) -> bool:
    """Marginals of every prefix of groups ignore the inputs of the later groups."""
    if isinstance(p, DetCorrelation):
        p = p.to_correlation()
    s = p.scenario
    if sorted(k for g in order.groups for k in g) != list(range(s.n)):
        raise ValueError("order must cover every party exactly once")
    for j in range(1, len(order.groups)):
        prefix = [k for g in order.groups[:j] for k in g]
        later = [k for g in order.groups[j:] for k in g]
        for x in s.inputs:
            x0 = list(x)
            for k in later:
                x0[k] = 0
            if p.marginal_table(prefix, x) != p.marginal_table(prefix, x0):
                return False
    return True


# ---------------------------------------------------------------------------
# deterministic classification

def _generic_causal(d: DetCorrelation, blocks: Sequence[Sequence[int]], ordered: bool,
                    ctx: dict[int, int]) -> bool:
    if len(blocks) <= 1:
        return True
    s = d.scenario
    xs = [x for x in s.inputs if all(x[k] == v for k, v in ctx.items())]
    for i in range(1 if ordered else len(blocks)):
        b = blocks[i]
        seen: dict[tuple[int, ...], tuple[int, ...]] = {}
        ok = True
        for x in xs:
            key = tuple(x[k] for k in b)
            out = tuple(d(x)[k] for k in b)
            if seen.setdefault(key, out) != out:
                ok = False
                break
        if not ok:
            continue
        rest = list(blocks[:i]) + list(blocks[i + 1:])
        if all(_generic_causal(d, rest, ordered, {**ctx, **dict(zip(b, key))}) for key in seen):
            return True
    return False


def _lazy_fast(s: Scenario) -> bool:
    return s.is_lazy and s.n <= _kernels.ENUM_MAX_N


def is_det_P_causal(d: DetCorrelation, p: Partition) -> bool:
    if p.n != d.scenario.n:
        raise ValueError("partition and correlation have different party counts")
    if _lazy_fast(d.scenario):
        return _kernels.enum_kernel(p.n).is_causal(det_to_mask(d), p.n, partition_masks(p))
    return _generic_causal(d, p.blocks, False, {})


def is_det_order_causal(d: DetCorrelation, order: Sequence[int]) -> bool:
    """Compatible with the fixed chain order[0] < order[1] < ..."""
    return _generic_causal(d, [(k,) for k in order], True, {})


def is_det_in_class(d: DetCorrelation, cls: CausalClass) -> bool:
    n = d.scenario.n
    if isinstance(cls, FixedOrder):
        return is_compatible_with_order(d, GroupOrder(tuple((k,) for k in cls.order)))
    if _lazy_fast(d.scenario):
        blocks, ordered = enumeration_blocks(cls, n)
        return bool(_kernels.enum_kernel(n).any_causal([det_to_mask(d)], n, blocks, ordered)[0])
    return any(is_det_P_causal(d, p) for p in cls.partitions(n))


def classify_masks(n: int, masks, cls: CausalClass):
    """Boolean array: which lazy responses (bitmasks) lie in the class."""
    blocks, ordered = enumeration_blocks(cls, n)
    return np.asarray(_kernels.enum_kernel(n).any_causal(masks, n, blocks, ordered), dtype=bool)


def pairwise_ignorance_holds(d: DetCorrelation, p: Partition) -> bool:
    """For every pair of blocks and every input of the others, one block ignores the other's input."""
    s = d.scenario
    for l, m in itertools.combinations(range(len(p)), 2):
        bl, bm = p.blocks[l], p.blocks[m]
        others = [k for k in range(s.n) if k not in bl and k not in bm]
        groups: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
        for x in s.inputs:
            groups.setdefault(tuple(x[k] for k in others), []).append(x)
        for xs in groups.values():
            if not (_ignores(d, xs, bl, bm) or _ignores(d, xs, bm, bl)):
                return False
    return True


def _ignores(d, xs, target, source) -> bool:
    seen = {}
    for x in xs:
        key = tuple(x[k] for k in range(len(x)) if k not in source)
        out = tuple(d(x)[k] for k in target)
        if seen.setdefault(key, out) != out:
            return False
    return True


# ---------------------------------------------------------------------------
# enumeration

def canonical_sort_masks(masks, n: int):
    """Sort lazy response masks into canonical order (input 0...0 most significant)."""
    nx = 1 << n
    full = nx - 1
    if isinstance(masks, np.ndarray) and masks.dtype == np.uint64:
        key = np.zeros_like(masks)
        for x in range(nx):
            key |= ((masks >> np.uint64(n * x)) & np.uint64(full)) << np.uint64(n * (nx - 1 - x))
        return masks[np.argsort(key, kind="stable")]

    def k(m):
        return sum(((m >> (n * x)) & full) << (n * (nx - 1 - x)) for x in range(nx))
    return sorted((int(m) for m in masks), key=k)


def _scan(n, cls, **kw):
    blocks, ordered = enumeration_blocks(cls, n)
    return _kernels.enum_kernel(n).scan_class(n, blocks, ordered, **kw)


def vertex_masks(n: int, cls: CausalClass, max_vertices: int = DEFAULT_MAX_VERTICES,
                 time_limit: float = 0.0):
    """Canonically sorted bitmasks of the deterministic lazy responses in the class."""
    res = _scan(n, cls, store=1, max_store=max_vertices, time_limit=time_limit)
    masks = res["masks"]
    if not isinstance(masks, np.ndarray) and n <= 4:
        masks = np.array(masks, dtype=np.uint64)
    return canonical_sort_masks(masks, n)


def count_vertices(n: int, cls: CausalClass, time_limit: float = 0.0) -> int:
    return _scan(n, cls, time_limit=time_limit)["count"]


def enumerate_vertices(s: Scenario, cls: CausalClass, max_vertices: int = DEFAULT_MAX_VERTICES,
                       time_limit: float = 0.0) -> list[DetCorrelation]:
    """Deterministic correlations of the class, duplicate free, in canonical order."""
    check_class(cls, s.n)
    if s.is_lazy:
        return [mask_to_det(s, int(m)) for m in vertex_masks(s.n, cls, max_vertices, time_limit)]
    # mixed scenarios are only used for small witnesses: filter every response
    total = count_deterministic(s)
    if total > max_vertices:
        raise BudgetExceeded(f"{total} response functions exceed the budget of {max_vertices}")
    out = [d for d in all_deterministic(s) if is_det_in_class(d, cls)]
    return sorted(out, key=lambda d: d.table_key())


def scaled_weights(weights: Sequence) -> tuple[list[int], int]:
    """Integer weights and the common denominator they were scaled by."""
    fr = [Fraction(w) for w in weights]
    den = lcm(*(f.denominator for f in fr)) if fr else 1
    return [int(f * den) for f in fr], den


def scan_functional(n: int, cls: CausalClass, weights: Sequence, target=None, store: int = 0,
                    max_store: int = 0, time_limit: float = 0.0) -> dict:
    """Stream the class vertices through the functional sum_x w[x, a(x)].

    ``weights`` is indexed by x * 2**n + a (bitmask integers).  Returns the
    vertex count, the exact minimum, how many vertices attain it, how many
    attain ``target`` and, if requested, the stored masks.
    """
    iw, den = scaled_weights(weights)
    it = None if target is None else Fraction(target) * den
    if it is not None and it.denominator != 1:
        res = _scan(n, cls, weights=iw, time_limit=time_limit)
        res["target_count"] = 0
    else:
        res = _scan(n, cls, weights=iw, target=None if it is None else int(it), store=store,
                    max_store=max_store, time_limit=time_limit)
    res["min"] = None if res["min"] is None else Fraction(res["min"], den)
    return res


def membership_brute_small(p: Correlation, cls: CausalClass, max_vertices: int = 100_000) -> bool:
    """LP membership in the hull of the class vertices (reference oracle)."""
    from .geometry import Weights, lp_membership
    from .scenario import to_parameter_vector

    verts = enumerate_vertices(p.scenario, cls, max_vertices=max_vertices)
    res = lp_membership(to_parameter_vector(p), [v.parameter_vector() for v in verts])
    return isinstance(res, Weights)


# ---------------------------------------------------------------------------
# independent count oracle for the 2-causal class (lazy scenario)

def two_causal_count_inclusion_exclusion(n: int) -> int:
    """Number of deterministic 2-causal lazy responses by inclusion-exclusion.

    S_K = responses where a_K depends on x_K only.  On an intersection over a
    family F, party i may depend only on D_i = the intersection of the sets
    in F that contain i, leaving 2**(2**(|D_i| - 1)) choices for it.
    """
    if n == 1:
        return 2
    subsets = [frozenset(c) for r in range(1, n) for c in itertools.combinations(range(n), r)]
    total = 0
    for size in range(1, len(subsets) + 1):
        sign = 1 if size % 2 else -1
        for fam in itertools.combinations(subsets, size):
            prod = 1
            for i in range(n):
                d = frozenset(range(n))
                for K in fam:
                    if i in K:
                        d &= K
                prod *= 2 ** (2 ** (len(d) - 1))
            total += sign * prod
    return total


def brute_two_causal_count(n: int) -> int:
    """Filter every lazy response: some nonempty strict group K acts first, the rest afterwards."""
    s = make_lazy_scenario(n)
    subsets = [c for r in range(1, n) for c in itertools.combinations(range(n), r)]
    count = 0
    for d in all_deterministic(s):
        if n == 1 or any(_generic_causal(d, [K, tuple(k for k in range(n) if k not in K)], True, {})
                         for K in subsets):
            count += 1
    return count


__all__ = [
    "FullyCausal", "TwoCausal", "MCausal", "SizeSCausal", "PCausal", "FixedOrder", "CausalClass",
    "GroupOrder", "parse_class", "is_compatible_with_order", "is_det_P_causal", "is_det_in_class",
    "enumerate_vertices", "count_vertices", "vertex_masks", "membership_brute_small",
    "scan_functional", "pairwise_ignorance_holds", "two_causal_count_inclusion_exclusion",
]
