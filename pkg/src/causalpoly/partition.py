"""Set partitions of the parties and the pair-counting bound arithmetic.

Parties are 0-based internally; the text form ("1,2|3") is 1-based to match
the usual party labels A_1..A_N.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Sequence


@dataclass(frozen=True, order=True)
class Partition:
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0] if b else -1))
        if any(not b for b in blocks):
            raise ValueError("partition blocks must be nonempty")
        flat = [k for b in blocks for k in b]
        if len(flat) != len(set(flat)):
            raise ValueError(f"blocks overlap: {blocks}")
        if sorted(flat) != list(range(len(flat))):
            raise ValueError(f"blocks must cover 0..{len(flat) - 1}: {blocks}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __str__(self) -> str:
        return "|".join(",".join(str(k + 1) for k in b) for b in self.blocks)

    def block_of(self, k: int) -> int:
        for i, b in enumerate(self.blocks):
            if k in b:
                return i
        raise KeyError(k)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        try:
            blocks = [tuple(int(t) - 1 for t in part.split(",")) for part in text.strip().split("|")]
        except ValueError as exc:
            raise ValueError(f"malformed partition {text!r}") from exc
        return cls(tuple(blocks))

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(tuple((k,) for k in range(n)))

    @classmethod
    def trivial(cls, n: int) -> "Partition":
        return cls((tuple(range(n)),))

    @classmethod
    def from_rgs(cls, rgs: Sequence[int]) -> "Partition":
        blocks: list[list[int]] = []
        for k, b in enumerate(rgs):
            if b == len(blocks):
                blocks.append([])
            blocks[b].append(k)
        return cls(tuple(tuple(b) for b in blocks))

    def rgs(self) -> tuple[int, ...]:
        out = [0] * self.n
        for i, b in enumerate(self.blocks):
            for k in b:
                out[k] = i
        return tuple(out)


def max_block_size(p: Partition) -> int:
    return max(len(b) for b in p.blocks)


def _rgs_iter(n: int, min_blocks: int, max_size: int) -> Iterator[tuple[int, ...]]:
    # restricted growth strings with pruning on block count and block size
    rgs = [0] * n
    sizes = [0] * n

    def rec(k: int, used: int):
        if k == n:
            if used >= min_blocks:
                yield tuple(rgs)
            return
        remaining = n - k
        if used + remaining < min_blocks:
            return
        for b in range(used + 1 if used < n else used):
            if sizes[b] >= max_size:
                continue
            rgs[k] = b
            sizes[b] += 1
            yield from rec(k + 1, max(used, b + 1))
            sizes[b] -= 1

    yield from rec(0, 0)


def iter_partitions(n: int, min_blocks: int = 1, max_block_size: int | None = None,
                    exact_blocks: int | None = None) -> Iterator[Partition]:
    if max_block_size is None:
        max_block_size = n
    for rgs in _rgs_iter(n, min_blocks, max_block_size):
        if exact_blocks is not None and max(rgs) + 1 != exact_blocks:
            continue
        yield Partition.from_rgs(rgs)


def enumerate_partitions(n: int, min_blocks: int = 1, max_block_size: int | None = None) -> list[Partition]:
    """All partitions of n parties with >= min_blocks blocks and no block larger than max_block_size."""
    if n < 1:
        raise ValueError("n must be positive")
    if max_block_size is None:
        max_block_size = n
    if not 1 <= min_blocks <= n:
        raise ValueError(f"min_blocks must lie in [1, {n}], got {min_blocks}")
    if not 1 <= max_block_size <= n:
        raise ValueError(f"max_block_size must lie in [1, {n}], got {max_block_size}")
    return list(iter_partitions(n, min_blocks, max_block_size))


def is_coarse_graining(fine: Partition, coarse: Partition) -> bool:
    """True iff every block of ``fine`` sits inside a block of ``coarse``."""
    if fine.n != coarse.n:
        raise ValueError(f"partitions of different sets ({fine.n} vs {coarse.n} parties)")
    owner = coarse.rgs()
    return all(len({owner[k] for k in b}) == 1 for b in fine.blocks)


def pair_bound_L(p: Partition) -> int:
    """Minus the number of party pairs that share a block."""
    return -sum(comb(len(b), 2) for b in p.blocks)


def m_causal_bound(n: int, m: int) -> int:
    if not 1 <= m <= n:
        raise ValueError(f"M must lie in [1, {n}], got {m}")
    return -comb(n - m + 1, 2)


def size_s_bound(n: int, s: int) -> int:
    if not 1 <= s <= n:
        raise ValueError(f"S must lie in [1, {n}], got {s}")
    q = n // s
    return -q * comb(s, 2) - comb(n - q * s, 2)


def class_bound_J2(n: int, cls) -> Fraction:
    """Lower bound of the summed pairwise LGYNI functional for a causal class.

    ``cls`` is a :class:`causalpoly.causal.CausalClass`.
    """
    from .causal import FullyCausal, MCausal, PCausal, SizeSCausal, TwoCausal, FixedOrder

    if n < 2:
        raise ValueError("the pairwise functional needs n >= 2")
    if isinstance(cls, TwoCausal):
        return Fraction(-comb(n - 1, 2))
    if isinstance(cls, (FullyCausal, FixedOrder)):
        return Fraction(0)
    if isinstance(cls, MCausal):
        if cls.exact_blocks:
            return Fraction(-comb(n - cls.m + 1, 2))
        return Fraction(m_causal_bound(n, cls.m))
    if isinstance(cls, SizeSCausal):
        return Fraction(size_s_bound(n, cls.s))
    if isinstance(cls, PCausal):
        if cls.partition.n != n:
            raise ValueError("partition size does not match n")
        return Fraction(pair_bound_L(cls.partition))
    raise TypeError(f"no J2 bound for class {cls!r}")


def brute_min_L(partitions: Iterable[Partition]) -> int:
    return min(pair_bound_L(p) for p in partitions)


def check_size_number_relation(p: Partition) -> bool:
    """|P| - 1 + s(P) <= n <= |P| s(P)."""
    n, m, s = p.n, len(p), max_block_size(p)
    return m - 1 + s <= n <= m * s
