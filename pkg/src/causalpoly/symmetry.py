"""Relabelling symmetries (party permutations, output permutations) and facet orbits.

Inputs are never relabelled.  A group element g maps party k to position
perm[k] and relabels its output on input value x by outs[k][x].  On
correlations (gP)(a'|x') = P(a|x); on functionals (g.w)(gP) = w(P).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded
from .geometry import Inequality
from .scenario import Correlation, DetCorrelation, Scenario


@dataclass(frozen=True)
class SymmetryElement:
    perm: tuple[int, ...]
    outs: tuple[tuple[tuple[int, ...], ...], ...]

    def compose(self, other: "SymmetryElement") -> "SymmetryElement":
        """self after other."""
        perm = tuple(self.perm[other.perm[k]] for k in range(len(self.perm)))
        outs = tuple(
            tuple(tuple(self.outs[other.perm[k]][x][other.outs[k][x][a]] for a in range(len(other.outs[k][x])))
                  for x in range(len(other.outs[k])))
            for k in range(len(self.perm)))
        return SymmetryElement(perm, outs)

    def inverse(self) -> "SymmetryElement":
        n = len(self.perm)
        inv = [0] * n
        for k, j in enumerate(self.perm):
            inv[j] = k
        outs = [None] * n
        for k in range(n):
            per_x = []
            for tau in self.outs[k]:
                t = [0] * len(tau)
                for a, b in enumerate(tau):
                    t[b] = a
                per_x.append(tuple(t))
            outs[self.perm[k]] = tuple(per_x)
        return SymmetryElement(tuple(inv), tuple(outs))

    def is_identity(self) -> bool:
        return (self.perm == tuple(range(len(self.perm)))
                and all(tau == tuple(range(len(tau))) for per in self.outs for tau in per))


def identity(s: Scenario) -> SymmetryElement:
    return SymmetryElement(tuple(range(s.n)),
                           tuple(tuple(tuple(range(o)) for o in p.outputs) for p in s.parties))


def group_order(s: Scenario) -> int:
    from math import factorial, prod
    classes: dict = {}
    for p in s.parties:
        classes[p] = classes.get(p, 0) + 1
    return prod(factorial(c) for c in classes.values()) * prod(
        factorial(o) for p in s.parties for o in p.outputs)


def symmetry_group(s: Scenario, max_order: int = 1_000_000) -> list[SymmetryElement]:
    """All elements, identity first."""
    order = group_order(s)
    if order > max_order:
        raise BudgetExceeded(f"symmetry group of order {order} exceeds budget {max_order}")
    perms = [p for p in itertools.permutations(range(s.n))
             if all(s.parties[k] == s.parties[p[k]] for k in range(s.n))]
    per_party = [list(itertools.product(*(itertools.permutations(range(o)) for o in p.outputs)))
                 for p in s.parties]
    group = [SymmetryElement(perm, outs)
             for perm in perms for outs in itertools.product(*per_party)]
    return group


# ---------------------------------------------------------------------------
# actions

def _table_entries(s: Scenario):
    return [(x, a) for x, outs in zip(s.inputs, s.allowed_outputs) for a in outs]


def table_permutation(g: SymmetryElement, s: Scenario) -> list[int]:
    """src[i'] = index of the table entry of P that lands on entry i' of gP."""
    entries = _table_entries(s)
    pos = {e: i for i, e in enumerate(entries)}
    inv = g.inverse()
    src = []
    for xp, ap in entries:
        x = tuple(xp[g.perm[k]] for k in range(s.n))
        a = tuple(inv.outs[g.perm[k]][x[k]][ap[g.perm[k]]] for k in range(s.n))
        src.append(pos[(x, a)])
    return src


def act_on_correlation(g: SymmetryElement, p: Correlation) -> Correlation:
    s = p.scenario
    flat = [v for block in p.table for v in block]
    src = table_permutation(g, s)
    new = [flat[i] for i in src]
    table, k = [], 0
    for outs in s.allowed_outputs:
        table.append(tuple(new[k:k + len(outs)]))
        k += len(outs)
    return Correlation(s, tuple(table))


def act_on_det(g: SymmetryElement, d: DetCorrelation) -> DetCorrelation:
    s = d.scenario

    def f(xp):
        x = tuple(xp[g.perm[k]] for k in range(s.n))
        a = d(x)
        out = [0] * s.n
        for k in range(s.n):
            out[g.perm[k]] = g.outs[k][x[k]][a[k]]
        return out

    return DetCorrelation.from_function(s, f)


def param_action_matrix(g: SymmetryElement, s: Scenario) -> np.ndarray:
    """Integer matrix M with (c', c0') = (c, c0) @ M for a row c . theta + c0 >= 0."""
    D = s.dimension
    entries = _table_entries(s)
    # lift: param row -> table weights (last outputs get 0), const carried along
    lift = np.zeros((D + 1, len(entries) + 1), dtype=np.int64)
    proj = np.zeros((len(entries) + 1, D + 1), dtype=np.int64)
    t = 0
    for i, outs in enumerate(s.allowed_outputs):
        off = s.param_offsets[i]
        last = t + len(outs) - 1
        for j in range(len(outs) - 1):
            lift[off + j, t + j] = 1
            proj[t + j, off + j] = 1
            proj[last, off + j] = -1
        proj[last, D] = 1
        t += len(outs)
    lift[D, len(entries)] = 1
    proj[len(entries), D] = 1
    src = table_permutation(g, s)
    perm = np.zeros((len(entries) + 1, len(entries) + 1), dtype=np.int64)
    for ip, i in enumerate(src):
        perm[i, ip] = 1
    perm[len(entries), len(entries)] = 1
    return lift @ perm @ proj


def _row(ineq: Inequality) -> tuple[int, ...]:
    return ineq.key()


def _from_row(row: Sequence[int]) -> Inequality:
    return Inequality(tuple(int(v) for v in row[:-1]), Fraction(-int(row[-1])))


def act_on_inequality(g: SymmetryElement, ineq: Inequality, s: Scenario) -> Inequality:
    if ineq.dim != s.dimension:
        raise ValueError(f"inequality has dimension {ineq.dim}, scenario {s.dimension}")
    row = np.array(_row(ineq), dtype=object)
    out = row.dot(param_action_matrix(g, s).astype(object))
    return _from_row(out).canonical()


def positivity_inequalities(s: Scenario) -> list[Inequality]:
    """P(a|x) >= 0 for every table entry, in parameter coordinates."""
    D = s.dimension
    out = []
    for i, outs in enumerate(s.allowed_outputs):
        off = s.param_offsets[i]
        for j in range(len(outs) - 1):
            c = [0] * D
            c[off + j] = 1
            out.append(Inequality(tuple(c)))
        c = [0] * D
        for j in range(len(outs) - 1):
            c[off + j] = -1
        out.append(Inequality(tuple(c), 0, 1))
    # blocks with a single output give the empty constraint 1 >= 0
    return [q.canonical() for q in out if any(q.coeffs)]


# ---------------------------------------------------------------------------
# orbits

@dataclass
class OrbitRecord:
    representative: Inequality
    size: int
    members: list[int] = field(default_factory=list)
    trivial: bool = False
    flags: dict = field(default_factory=dict)

    def line(self) -> str:
        fl = " ".join(f"{k}={int(v)}" for k, v in sorted(self.flags.items()))
        return f"{self.representative.line()} ; size={self.size} trivial={int(self.trivial)}" + (f" {fl}" if fl else "")


def orbit_keys(rows: np.ndarray, mats: Sequence[np.ndarray]) -> list[tuple[int, ...]]:
    """Lexicographically least image of every row (rows are already canonical integer rows)."""
    best = None
    for M in mats:
        img = rows @ M
        if best is None:
            best = img
            continue
        # row-wise lexicographic min of best and img
        diff = img - best
        nz = diff != 0
        first = np.where(nz.any(axis=1), nz.argmax(axis=1), 0)
        take = diff[np.arange(len(diff)), first] < 0
        best = np.where(take[:, None], img, best)
    return [tuple(int(v) for v in r) for r in best]


def classify_orbits(ineqs: Sequence[Inequality], s: Scenario,
                    group: Sequence[SymmetryElement] | None = None) -> list[OrbitRecord]:
    """Partition the inequalities into orbits; records sorted by representative."""
    group = group if group is not None else symmetry_group(s)
    mats = [param_action_matrix(g, s) for g in group]
    if not ineqs:
        return []
    keys = [_row(q) for q in ineqs]
    big = max(abs(v) for k in keys for v in k)
    if big * (s.dimension + 1) < 2 ** 62:
        reps = orbit_keys(np.array(keys, dtype=np.int64), mats)
    else:
        omats = [M.astype(object) for M in mats]
        reps = [min(tuple(int(v) for v in np.array(k, dtype=object).dot(M)) for M in omats) for k in keys]
    trivial = {_row(q) for q in positivity_inequalities(s)}
    orbits: dict[tuple[int, ...], OrbitRecord] = {}
    for i, r in enumerate(reps):
        rec = orbits.get(r)
        if rec is None:
            rec = orbits[r] = OrbitRecord(_from_row(r), 0)
        rec.members.append(i)
    for r, rec in orbits.items():
        images = {tuple(int(v) for v in np.array(r, dtype=object).dot(M.astype(object))) for M in mats}
        rec.size = len(images)
        rec.trivial = bool(images & trivial)
    return [orbits[r] for r in sorted(orbits)]


def orbit_of(ineq: Inequality, s: Scenario, group: Sequence[SymmetryElement] | None = None) -> set[Inequality]:
    group = group if group is not None else symmetry_group(s)
    return {act_on_inequality(g, ineq, s) for g in group}


__all__ = [
    "SymmetryElement", "identity", "group_order", "symmetry_group", "table_permutation",
    "act_on_correlation", "act_on_det", "act_on_inequality", "param_action_matrix",
    "positivity_inequalities", "OrbitRecord", "classify_orbits", "orbit_of", "orbit_keys",
]
