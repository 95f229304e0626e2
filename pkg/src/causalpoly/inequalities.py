"""Named inequality families of the lazy scenario and their game forms.

A family is first written as a functional on table entries P(a|x) (inputs
and outputs as bitmask integers, party 1 most significant) and then
projected to parameter coordinates by eliminating the last outcome of every
input block.  Game scores are computed directly from the correlation, which
gives an independent check of the functional identities.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .causal import CausalClass, MCausal, PCausal, SizeSCausal, TwoCausal, scan_functional
from .geometry import Inequality
from .partition import Partition, class_bound_J2
from .scenario import Correlation, DetCorrelation, Scenario, lazy_bits, lazy_x_int, make_lazy_scenario


def _bit(k: int, n: int) -> int:
    return 1 << (n - 1 - k)


@dataclass
class TableFunctional:
    """sum over table entries w[x, a] * P(a|x) + const >= bound (lazy scenario)."""

    n: int
    terms: dict = field(default_factory=dict)
    const: Fraction = Fraction(0)
    bound: Fraction = Fraction(0)
    name: str = ""

    def add(self, x: int, a: int, w) -> None:
        if a & ~x:
            raise ValueError(f"output {a:b} not allowed on input {x:b}")
        self.terms[(x, a)] = self.terms.get((x, a), Fraction(0)) + Fraction(w)

    def add_marginal(self, x: int, parties_mask: int, values_mask: int, w) -> None:
        """w * P(a_K = values | x), K given as a party bitmask."""
        for a in _submasks(x):
            if (a & parties_mask) == values_mask:
                self.add(x, a, w)

    def value(self, p: Correlation | DetCorrelation) -> Fraction:
        if isinstance(p, DetCorrelation):
            p = p.to_correlation()
        n = self.n
        total = Fraction(self.const)
        for (x, a), w in self.terms.items():
            total += w * p.prob(lazy_bits(a, n), lazy_bits(x, n))
        return total

    def det_weights(self) -> list[Fraction]:
        """Flat weights w[x * 2**n + a] with the constant folded into input 0."""
        nx = 1 << self.n
        w = [Fraction(0)] * (nx * nx)
        for (x, a), v in self.terms.items():
            w[x * nx + a] += v
        w[0] += self.const
        return w

    def to_inequality(self, s: Scenario | None = None) -> Inequality:
        s = s or make_lazy_scenario(self.n)
        coeffs = [Fraction(0)] * s.dimension
        const = Fraction(self.const)
        n = self.n
        for i, (x, outs) in enumerate(zip(s.inputs, s.allowed_outputs)):
            xi = lazy_x_int(x)
            last = lazy_x_int(outs[-1])
            wl = self.terms.get((xi, last), Fraction(0))
            const += wl
            for j, a in enumerate(outs[:-1]):
                coeffs[s.param_offsets[i] + j] = self.terms.get((xi, lazy_x_int(a)), Fraction(0)) - wl
        del n
        return Inequality(tuple(coeffs), self.bound, const)

    def __add__(self, other: "TableFunctional") -> "TableFunctional":
        out = TableFunctional(self.n, dict(self.terms), self.const + other.const, self.bound + other.bound)
        for k, v in other.terms.items():
            out.terms[k] = out.terms.get(k, Fraction(0)) + v
        return out


def _submasks(b: int):
    v = b
    while True:
        yield v
        if v == 0:
            return
        v = (v - 1) & b


# ---------------------------------------------------------------------------
# families

def lgyni(n: int, i: int, j: int) -> TableFunctional:
    """Conditional LGYNI term for parties i, j (0-based), others' inputs 0; bound 0."""
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"need two distinct parties in 0..{n - 1}")
    bi, bj = _bit(i, n), _bit(j, n)
    f = TableFunctional(n, name=f"lgyni:{i + 1},{j + 1}")
    f.add_marginal(bi, bi, bi, 1)
    f.add_marginal(bj, bj, bj, 1)
    f.add_marginal(bi | bj, bi | bj, bi | bj, -1)
    return f


def j1(n: int) -> TableFunctional:
    """Sum over nonempty strict K of P(a_K = 1 | x_K = 1, rest 0) minus P(a = 1 | x = 1); bound 0."""
    if n < 2:
        raise ValueError("J1 needs n >= 2")
    full = (1 << n) - 1
    f = TableFunctional(n, name=f"j1:{n}")
    for K in range(1, full):
        f.add_marginal(K, K, K, 1)
    f.add_marginal(full, full, full, -1)
    return f


def j2(n: int) -> TableFunctional:
    """Sum of all pairwise LGYNI terms with the 2-causal bound -C(n-1, 2)."""
    if n < 2:
        raise ValueError("J2 needs n >= 2")
    f = TableFunctional(n)
    for i, j in itertools.combinations(range(n), 2):
        f = f + lgyni(n, i, j)
    f.bound = Fraction(-comb(n - 1, 2))
    f.name = f"j2:{n}"
    return f


def i1() -> TableFunctional:
    f = j1(3)
    f.name = "i1"
    return f


def i2() -> TableFunctional:
    """1 + 2 * singles - pairs >= 0, i.e. the three LGYNI terms plus 1."""
    f = j2(3)
    f.const += 1
    f.bound = Fraction(0)
    f.name = "i2"
    return f


def i3() -> TableFunctional:
    n = 3
    A, B, C = _bit(0, n), _bit(1, n), _bit(2, n)
    f = TableFunctional(n, const=Fraction(2), name="i3")
    for k in (A, B, C):
        f.add_marginal(k, k, k, 1)
    f.add_marginal(A | C, A, A, -1)
    f.add_marginal(A | B, B, B, -1)
    f.add_marginal(B | C, C, C, -1)
    return f


def split_lgyni(p: Partition) -> TableFunctional:
    """LGYNI between the two groups of a bipartition: P(a_K=1|x_K=1) + P(a_L=1|x_L=1) - P(a=1|x=1) >= 0."""
    if len(p) != 2:
        raise ValueError("needs a bipartition")
    n = p.n
    K = sum(_bit(k, n) for k in p.blocks[0])
    L = sum(_bit(k, n) for k in p.blocks[1])
    f = TableFunctional(n, name=f"blgyni:{p}")
    f.add_marginal(K, K, K, 1)
    f.add_marginal(L, L, L, 1)
    f.add_marginal(K | L, K | L, K | L, -1)
    return f


@dataclass(frozen=True)
class Family:
    kind: str                 # i1 i2 i3 lgyni j1 j2 blgyni
    n: int
    params: tuple = ()

    def __str__(self):
        if self.kind in ("i1", "i2", "i3"):
            return self.kind
        if self.kind == "lgyni":
            return f"lgyni:{self.params[0] + 1},{self.params[1] + 1}" + ("" if self.n == 3 else f"@{self.n}")
        if self.kind == "blgyni":
            return f"blgyni:{self.params[0]}"
        return f"{self.kind}:{self.n}"


def parse_family(text: str, n: int | None = None) -> Family:
    """i1, i2, i3, lgyni:i,j[@n], j1:N, j2:N, blgyni:1|2,3."""
    t = text.strip().lower()
    try:
        if t in ("i1", "i2", "i3"):
            return Family(t, 3)
        if t.startswith("lgyni:"):
            body, _, nn = t[6:].partition("@")
            i, j = (int(v) - 1 for v in body.split(","))
            return Family("lgyni", int(nn) if nn else (n or 3), (i, j))
        if t.startswith("j1:") or t.startswith("j2:"):
            return Family(t[:2], int(t[3:]))
        if t.startswith("blgyni:"):
            p = Partition.parse(t[7:])
            return Family("blgyni", p.n, (p,))
    except ValueError as exc:
        raise ValueError(f"malformed family {text!r}: {exc}") from exc
    raise ValueError(f"unknown family {text!r}")


def functional(f: Family) -> TableFunctional:
    if f.kind == "i1":
        return i1()
    if f.kind == "i2":
        return i2()
    if f.kind == "i3":
        return i3()
    if f.kind == "lgyni":
        return lgyni(f.n, *f.params)
    if f.kind == "j1":
        return j1(f.n)
    if f.kind == "j2":
        return j2(f.n)
    if f.kind == "blgyni":
        return split_lgyni(f.params[0])
    raise ValueError(f"unknown family {f}")


def build_family(f: Family | str) -> Inequality:
    if isinstance(f, str):
        f = parse_family(f)
    return functional(f).to_inequality()


def eval_inequality(ineq: Inequality | TableFunctional, p: Correlation | DetCorrelation) -> Fraction:
    """Exact left-hand side at p."""
    if isinstance(ineq, TableFunctional):
        return ineq.value(p)
    if isinstance(p, DetCorrelation):
        theta = p.parameter_vector()
    else:
        theta = tuple(v for block in p.table for v in block[:-1])
    if len(theta) != ineq.dim:
        raise ValueError(f"dimension mismatch: {len(theta)} vs {ineq.dim}")
    return ineq.lhs(theta)


# ---------------------------------------------------------------------------
# games with uniform inputs

def _avg(p: Correlation, score) -> Fraction:
    s = p.scenario
    total = Fraction(0)
    for x, outs, block in zip(s.inputs, s.allowed_outputs, p.table):
        for a, pr in zip(outs, block):
            if pr:
                total += pr * score(x, a)
    return total / len(s.inputs)


def _product_game(x, a) -> int:
    lhs = 1
    for xk, ak in zip(x, a):
        lhs *= ak if xk else 1
    rhs = 1
    for xk in x:
        rhs *= xk
    return int(lhs == rhs)


def _i3_game(x, a) -> int:
    X, Y, Z = x
    A, B, C = a
    return int(X * (Y ^ 1) * (A ^ Z) == 0 and Y * (Z ^ 1) * (B ^ X) == 0 and Z * (X ^ 1) * (C ^ Y) == 0)


def _pair_score(x, a) -> int:
    n = len(x)
    score = 0
    for i, j in itertools.combinations(range(n), 2):
        if any(x[k] for k in range(n) if k not in (i, j)):
            continue
        win = (x[i] == 0 or a[i] == x[j]) and (x[j] == 0 or a[j] == x[i])
        score += int(win)
    return score


GAMES = ("i1", "i3", "j1", "i2", "j2")


def game_success_probability(kind: str, p: Correlation | DetCorrelation) -> Fraction:
    """Winning probability (or average score for the scored games i2 / j2), uniform inputs."""
    if isinstance(p, DetCorrelation):
        p = p.to_correlation()
    s = p.scenario
    if not s.is_lazy:
        raise ValueError("games are defined on the lazy scenario")
    if kind in ("i1", "j1"):
        if kind == "i1" and s.n != 3:
            raise ValueError("the I1 game is tripartite")
        return _avg(p, _product_game)
    if kind == "i3":
        if s.n != 3:
            raise ValueError("the I3 game is tripartite")
        return _avg(p, _i3_game)
    if kind in ("i2", "j2"):
        if kind == "i2" and s.n != 3:
            raise ValueError("the I2 game is tripartite")
        return _avg(p, _pair_score)
    raise ValueError(f"no game for {kind!r}")


def game_from_value(kind: str, n: int, value: Fraction) -> Fraction:
    """Game score implied by the functional value (affine relation for uniform inputs)."""
    N = 1 << n
    if kind in ("i1", "j1"):
        # input 0...0 always loses; the losses elsewhere add up to 1 + J1
        return 1 - Fraction(2, N) - Fraction(value, N)
    if kind == "i3":
        # losing inputs contribute I3 + 1 in total
        return 1 - Fraction(value + 1, N)
    if kind == "i2":
        value -= 1    # back to the plain sum of LGYNI terms
    if kind in ("i2", "j2"):
        return Fraction(3 * comb(n, 2), N) - Fraction(value, N)
    raise ValueError(kind)


# ---------------------------------------------------------------------------
# bound verification

def class_bound(f: Family, cls: CausalClass) -> Fraction | None:
    """Known lower bound of the family on the class (None if the functional is unbounded there)."""
    if f.kind == "j2":
        return class_bound_J2(f.n, cls)
    if f.kind == "i2":
        return class_bound_J2(f.n, cls) + 1
    if f.kind == "lgyni":
        # 0 when every partition of the class separates the pair, else a shared block reaches -1
        i, j = f.params
        together = any(p.block_of(i) == p.block_of(j) for p in cls.partitions(f.n))
        return Fraction(-1) if together else Fraction(0)
    if f.kind == "blgyni":
        if isinstance(cls, PCausal) and cls.partition == f.params[0]:
            return Fraction(0)
        return None
    if isinstance(cls, (MCausal,)) and cls.m == 1:
        return None
    if isinstance(cls, SizeSCausal) and cls.s == f.n:
        return None
    return Fraction(0)


@dataclass
class BoundReport:
    family: str
    cls: str
    bound: Fraction | None
    minimum: Fraction | None
    saturated: bool | None
    vertices: int | None
    arithmetic_bound: Fraction | None
    ok: bool

    def lines(self):
        yield f"family {self.family} class {self.cls}"
        yield f"  claimed bound       {self.bound}"
        if self.minimum is not None:
            yield f"  minimum on vertices {self.minimum} over {self.vertices} vertices, saturated={self.saturated}"
        if self.arithmetic_bound is not None:
            yield f"  partition bound     {self.arithmetic_bound}"
        yield f"  {'PASS' if self.ok else 'FAIL'}"


def verify_family_bound(f: Family | str, cls: CausalClass, enumerate_limit_n: int = 4,
                        time_limit: float = 0.0) -> BoundReport:
    """Check the class bound by streaming the vertices and, for J2, by partition arithmetic."""
    if isinstance(f, str):
        f = parse_family(f)
    fn = functional(f)
    bound = class_bound(f, cls)
    arith = None
    if f.kind in ("j2", "i2"):
        arith = class_bound_J2(f.n, cls) + (f.kind == "i2")
    minimum = saturated = count = None
    if f.n <= enumerate_limit_n:
        res = scan_functional(f.n, cls, fn.det_weights(), target=bound, time_limit=time_limit)
        minimum, count = res["min"], res["count"]
        saturated = bound is not None and minimum == bound
    elif arith is None:
        from .errors import BudgetExceeded
        raise BudgetExceeded(f"n={f.n} is beyond the enumeration limit and {f} has no arithmetic bound")
    ok = True
    if minimum is not None and bound is not None:
        ok = minimum >= bound
    if arith is not None and bound is not None:
        ok = ok and arith == bound
    return BoundReport(str(f), str(cls), bound, minimum, saturated, count, arith, ok)


__all__ = [
    "TableFunctional", "Family", "parse_family", "build_family", "functional", "eval_inequality",
    "game_success_probability", "verify_family_bound", "lgyni", "j1", "j2", "i1", "i2", "i3",
    "split_lgyni", "class_bound", "TwoCausal",
]
