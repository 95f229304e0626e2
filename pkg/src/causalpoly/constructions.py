"""Explicit correlations used as witnesses and saturators."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .partition import Partition, is_coarse_graining
from .scenario import (LAZY_PARTY, Correlation, DetCorrelation, PartySpec, Scenario,
                       make_lazy_scenario, mixture)


@dataclass(frozen=True)
class PermutationSigma:
    """rank[l] = position (0-based) of block l in the causal order."""

    rank: tuple[int, ...]

    def __post_init__(self):
        r = tuple(int(v) for v in self.rank)
        if sorted(r) != list(range(len(r))):
            raise ValueError(f"not a permutation: {r}")
        object.__setattr__(self, "rank", r)

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "PermutationSigma":
        """order lists block indices from first to last."""
        rank = [0] * len(order)
        for pos, b in enumerate(order):
            rank[b] = pos
        return cls(tuple(rank))

    @property
    def order(self) -> tuple[int, ...]:
        return tuple(sorted(range(len(self.rank)), key=self.rank.__getitem__))


def _trigger(s: Scenario, k: int, xk: int) -> int:
    # lazy: the input bit itself; otherwise input 1 plays the role of the lazy "1"
    return 1 if xk == 1 else 0


def build_p_sigma(p: Partition, sigma: PermutationSigma | Sequence[int], s: Scenario | None = None) -> DetCorrelation:
    """Each party outputs the product of the inputs of its own block and all earlier blocks.

    Outside the lazy scenario, input 1 is the active input, every other input
    gets output 0, and output 1 is used as the product value.
    """
    if not isinstance(sigma, PermutationSigma):
        sigma = PermutationSigma(tuple(sigma))
    if len(sigma.rank) != len(p):
        raise ValueError("sigma must permute the blocks of the partition")
    s = s or make_lazy_scenario(p.n)
    if s.n != p.n:
        raise ValueError("scenario and partition have different party counts")
    for k, party in enumerate(s.parties):
        if party.input_count < 2 or party.outputs[1] < 2:
            raise ValueError(f"party {k + 1} needs two outputs on input 1")
    block = [p.block_of(k) for k in range(p.n)]

    def f(x):
        z = [all(_trigger(s, k, x[k]) for k in b) for b in p.blocks]
        out = []
        for k in range(p.n):
            lvl = sigma.rank[block[k]]
            v = all(z[m] for m in range(len(p)) if sigma.rank[m] <= lvl)
            out.append(int(v) if x[k] == 1 else 0)
        return out

    return DetCorrelation.from_function(s, f)


def build_order_mixture(n: int = 3) -> Correlation:
    """Uniform mixture of the singleton-partition response over all n! orders."""
    p = Partition.singletons(n)
    dets = [build_p_sigma(p, PermutationSigma.from_order(o)).to_correlation()
            for o in itertools.permutations(range(n))]
    return mixture(dets)


def _copy_if_two(bits: Sequence[int]) -> tuple[int, ...]:
    return tuple(bits) if sum(bits) == 2 else (0,) * len(bits)


def build_pairwise_saturator(n: int, block: Sequence[int]) -> DetCorrelation:
    """Parties in ``block`` (0-based) copy their inputs iff exactly two of them are 1; others output 0."""
    block = tuple(sorted(set(int(k) for k in block)))
    if not block:
        raise ValueError("block must be nonempty")
    if block[0] < 0 or block[-1] >= n:
        raise ValueError(f"block must lie in 0..{n - 1}")
    return build_blockwise_saturator(n, [block])


def build_blockwise_saturator(n: int, blocks: Sequence[Sequence[int]]) -> DetCorrelation:
    """Each listed block applies the copy-iff-two rule on its own inputs; unlisted parties output 0."""
    s = make_lazy_scenario(n)

    def f(x):
        out = [0] * n
        for b in blocks:
            for k, v in zip(b, _copy_if_two([x[k] for k in b])):
                out[k] = v
        return out

    return DetCorrelation.from_function(s, f)


def m_causal_partition(n: int, m: int) -> Partition:
    """M-1 singletons followed by one block of the remaining N-M+1 parties."""
    if not 1 <= m <= n:
        raise ValueError(f"M must lie in [1, {n}]")
    return Partition(tuple((k,) for k in range(m - 1)) + (tuple(range(m - 1, n)),))


def size_s_partition(n: int, s: int) -> Partition:
    """floor(n/s) consecutive blocks of size s plus a remainder block."""
    if not 1 <= s <= n:
        raise ValueError(f"S must lie in [1, {n}]")
    blocks = [tuple(range(i, min(i + s, n))) for i in range(0, n, s)]
    return Partition(tuple(blocks))


def build_m_causal_saturator(n: int, m: int) -> DetCorrelation:
    return build_pairwise_saturator(n, m_causal_partition(n, m).blocks[-1])


def build_size_s_saturator(n: int, s: int) -> DetCorrelation:
    return build_blockwise_saturator(n, size_s_partition(n, s).blocks)


DYNAMICAL_PERMUTATIONS = tuple(itertools.permutations(range(3)))


def dynamical_scenario() -> Scenario:
    return Scenario((PartySpec((1,) * 6), LAZY_PARTY, LAZY_PARTY, LAZY_PARTY))


def build_dynamical_order() -> DetCorrelation:
    """Party 1 (six inputs, one output) picks the order of three lazy parties.

    For order (f, s, t): b_f = 0, b_s = y_f y_s, b_t = y_s y_t.  Input x selects
    the x-th permutation of (B1, B2, B3) in lexicographic order.
    """
    s = dynamical_scenario()

    def f(x):
        first, second, third = DYNAMICAL_PERMUTATIONS[x[0]]
        y = x[1:]
        b = [0, 0, 0]
        b[second] = y[first] * y[second]
        b[third] = y[second] * y[third]
        return [0] + b

    return DetCorrelation.from_function(s, f)


def named_correlation(name: str) -> DetCorrelation | Correlation:
    """Small catalogue of tripartite lazy examples used in tests and by the CLI."""
    s = make_lazy_scenario(3)
    table = {
        "all-xyz": lambda x: [x[0] * x[1] * x[2]] * 3,
        "zero-yz-yz": lambda x: [0, x[1] * x[2], x[1] * x[2]],
        "x-xy-yz": lambda x: [x[0], x[0] * x[1], x[1] * x[2]],
        "zero": lambda x: [0, 0, 0],
    }
    if name == "order-mixture":
        return build_order_mixture(3)
    if name == "dynamical-order":
        return build_dynamical_order()
    if name not in table:
        raise ValueError(f"unknown correlation {name!r}; known: {sorted(table) + ['order-mixture', 'dynamical-order']}")
    return DetCorrelation.from_function(s, table[name])


# ---------------------------------------------------------------------------
# witness choice for separating two partitions

def separation_sigma(p: Partition, q: Partition) -> PermutationSigma:
    """Order of p's blocks making the p-causal response fail q-causality.

    If q coarse-grains p, put a block of p that q keeps apart between two
    blocks that q merges; otherwise any order works.
    """
    if p == q:
        raise ValueError("partitions must differ")
    if not is_coarse_graining(p, q):
        return PermutationSigma(tuple(range(len(p))))
    if len(q) < 2:
        raise ValueError("coarse-graining must have at least two blocks")
    owner = [q.block_of(b[0]) for b in p.blocks]
    for l, l2 in itertools.combinations(range(len(p)), 2):
        if owner[l] != owner[l2]:
            continue
        for m in range(len(p)):
            if owner[m] != owner[l]:
                rest = [i for i in range(len(p)) if i not in (l, m, l2)]
                return PermutationSigma.from_order([l, m, l2] + rest)
    raise ValueError(f"{q} does not merge two blocks of {p}")


__all__ = [
    "PermutationSigma", "build_p_sigma", "build_order_mixture", "build_pairwise_saturator",
    "build_blockwise_saturator", "build_m_causal_saturator", "build_size_s_saturator",
    "m_causal_partition", "size_s_partition", "build_dynamical_order", "dynamical_scenario",
    "named_correlation", "separation_sigma",
]
