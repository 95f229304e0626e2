"""Exact polytope geometry: LP membership, affine rank, facets by double description.

Points are rational vectors in the canonical parameter space.  Nothing here
uses floating point; fast paths work modulo primes only where a bound makes
the result exact, and every certificate is re-checked in exact arithmetic.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt, lcm
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import BudgetExceeded, CertificateError

P31 = (1 << 31) - 1
P61 = (1 << 61) - 1


# ---------------------------------------------------------------------------
# inequalities

@dataclass(frozen=True)
class Inequality:
    """coeffs . theta + const >= bound."""

    coeffs: tuple
    bound: Fraction = Fraction(0)
    const: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(_q(c) for c in self.coeffs))
        object.__setattr__(self, "bound", _q(self.bound))
        object.__setattr__(self, "const", _q(self.const))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def lhs(self, theta: Sequence) -> Fraction:
        if len(theta) != len(self.coeffs):
            raise ValueError(f"dimension mismatch: {len(theta)} vs {len(self.coeffs)}")
        return sum((c * _q(t) for c, t in zip(self.coeffs, theta) if c), self.const)

    def slack(self, theta: Sequence) -> Fraction:
        return self.lhs(theta) - self.bound

    def holds(self, theta: Sequence) -> bool:
        return self.slack(theta) >= 0

    def canonical(self) -> "Inequality":
        """Integer coefficients, constant folded into the bound, content 1."""
        rhs = self.bound - self.const
        den = lcm(rhs.denominator, *(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        b = int(rhs * den)
        g = gcd(b, *ints)
        if g > 1:
            ints = [v // g for v in ints]
            b //= g
        return Inequality(tuple(ints), Fraction(b))

    def key(self) -> tuple[int, ...]:
        c = self.canonical()
        return tuple(int(v) for v in c.coeffs) + (-int(c.bound),)

    def line(self) -> str:
        c = self.canonical()
        return " ".join(str(int(v)) for v in c.coeffs) + f" >= {int(c.bound)}"

    @classmethod
    def from_line(cls, text: str) -> "Inequality":
        left, _, right = text.partition(">=")
        if not _:
            raise ValueError(f"expected 'c1 ... cD >= b', got {text!r}")
        return cls(tuple(Fraction(t) for t in left.split()), Fraction(right.strip()))

    def negated(self) -> "Inequality":
        return Inequality(tuple(-c for c in self.coeffs), -self.bound, -self.const)

    def __eq__(self, other):
        if not isinstance(other, Inequality):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def _q(v) -> Fraction:
    if isinstance(v, float):
        raise TypeError("floating point values are not accepted")
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True)
class Weights:
    weights: dict

    @property
    def support(self):
        return sorted(self.weights)


@dataclass(frozen=True)
class Separation:
    inequality: Inequality
    value: Fraction = Fraction(0)


MembershipResult = Weights | Separation


# ---------------------------------------------------------------------------
# integer helpers

def to_integer_matrix(points) -> tuple[np.ndarray | list, int]:
    """Scale rational points by a common denominator; int64 array when it fits."""
    if isinstance(points, np.ndarray) and points.dtype.kind in "iub":
        return points.astype(np.int64), 1
    rows = [[_q(v) for v in p] for p in points]
    den = lcm(1, *(v.denominator for r in rows for v in r))
    ints = [[int(v * den) for v in r] for r in rows]
    big = max((abs(v) for r in ints for v in r), default=0)
    if big < 1 << 62:
        return np.array(ints, dtype=np.int64).reshape(len(ints), -1), den
    return ints, den


def _modp_basis(rows: np.ndarray, p: int = P31, target: int | None = None,
                basis: list | None = None, chunk: int = 65536):
    """Greedy row basis modulo p.  Returns (basis, picked) with picked = chosen row indices.

    ``basis`` is a list of (pivot, row) with row[pivot] = 1 and can be passed
    back in to continue over more rows.
    """
    basis = [] if basis is None else basis
    picked = []
    n, d = rows.shape
    for start in range(0, n, chunk):
        X = np.mod(rows[start:start + chunk].astype(np.int64), p)
        for pc, br in basis:
            f = X[:, pc].copy()
            nz = f != 0
            if nz.any():
                X[nz] = np.mod(X[nz] - np.mod(f[nz, None] * br[None, :], p), p)
        while True:
            live = np.flatnonzero(X.any(axis=1))
            if live.size == 0:
                break
            i = live[0]
            row = X[i]
            pc = int(np.flatnonzero(row)[0])
            inv = pow(int(row[pc]), p - 2, p)
            br = np.mod(row * inv, p)
            basis.append((pc, br))
            picked.append(start + int(i))
            f = X[:, pc].copy()
            nz = f != 0
            X[nz] = np.mod(X[nz] - np.mod(f[nz, None] * br[None, :], p), p)
            if target is not None and len(basis) >= target:
                return basis, picked
    return basis, picked


def _nullspace(rows: list[list[int]], d: int) -> list[list[int]]:
    """Integer basis of {y : rows . y = 0} by exact elimination."""
    M = [[Fraction(v) for v in r] for r in rows]
    pivots = []
    r = 0
    for col in range(d):
        piv = next((i for i in range(r, len(M)) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        pv = M[r][col]
        M[r] = [v / pv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][col] != 0:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(d) if c not in pivots]
    out = []
    for fc in free:
        y = [Fraction(0)] * d
        y[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            y[pc] = -M[i][fc]
        den = lcm(*(v.denominator for v in y))
        yi = [int(v * den) for v in y]
        g = gcd(*yi)
        out.append([v // g for v in yi])
    return out


def _products_vanish(X: np.ndarray, y: Sequence[int]) -> bool:
    """Exactly X @ y == 0 for small-entry integer X and arbitrary integer y (limb arithmetic)."""
    if X.shape[0] == 0:
        return True
    xmax = int(np.abs(X).max()) if X.size else 0
    if xmax == 0:
        return True
    limb_bits = 20
    if xmax * X.shape[1] >= 1 << 40:
        return all(sum(int(a) * b for a, b in zip(row, y)) == 0 for row in X.tolist())
    base = 1 << limb_bits
    limbs = []
    rest = [int(v) for v in y]
    while any(rest):
        limbs.append([((v % base) if v >= 0 else -((-v) % base)) for v in rest])
        rest = [(v - l) >> limb_bits for v, l in zip(rest, limbs[-1])]
    carry = np.zeros(X.shape[0], dtype=np.int64)
    for lb in limbs:
        t = X @ np.array(lb, dtype=np.int64) + carry
        if np.any(t % base):
            return False
        carry = t >> limb_bits
    return not carry.any()


@dataclass
class AffineHull:
    """Affine hull of a point set: base point, chosen coordinates and equations."""

    base: list
    coords: list[int]
    equations: list[list[int]]       # y with y . (theta - base) = 0
    rank: int
    basis_rows: list[int] = field(default_factory=list)


def affine_hull(points, exact: bool = True) -> AffineHull:
    """Affine rank, a coordinate subset on which projection is injective, and hull equations."""
    X, den = to_integer_matrix(points)
    if isinstance(X, list):
        X = np.array(X, dtype=object)
    if len(X) == 0:
        raise ValueError("empty point set")
    base = X[0]
    D = X.shape[1]
    diffs = (X - base).astype(np.int64) if X.dtype != object else X - base
    if diffs.dtype == object or (diffs.size and int(np.abs(diffs).max()) >= P31):
        return _affine_hull_slow([list(map(int, r)) for r in X.tolist()], den)
    basis, picked = _modp_basis(diffs)
    r = len(picked)
    coords = sorted(pc for pc, _ in basis)
    eqs = []
    if exact:
        eqs = _nullspace([list(map(int, diffs[i])) for i in picked], D) if r else [
            [int(i == j) for j in range(D)] for i in range(D)]
        for y in eqs:
            if not _products_vanish(diffs, y):
                # a prime divided a minor: fall back to exact elimination
                return _affine_hull_slow([list(map(int, row)) for row in X.tolist()], den)
    return AffineHull([Fraction(int(v), den) for v in base], coords, eqs, r, [int(i) for i in picked])


def _affine_hull_slow(X: list[list[int]], den: int) -> AffineHull:
    base = X[0]
    D = len(base)
    diffs = [[a - b for a, b in zip(row, base)] for row in X]
    M = [[Fraction(v) for v in row] for row in diffs]
    picked, coords = [], []
    ech: list[tuple[int, list[Fraction]]] = []
    for i, row in enumerate(M):
        r = list(row)
        for pc, br in ech:
            if r[pc]:
                f = r[pc]
                r = [a - f * b for a, b in zip(r, br)]
        pc = next((j for j, v in enumerate(r) if v), None)
        if pc is not None:
            r = [v / r[pc] for v in r]
            ech.append((pc, r))
            picked.append(i)
            coords.append(pc)
    eqs = _nullspace([diffs[i] for i in picked], D) if picked else [[int(i == j) for j in range(D)] for i in range(D)]
    return AffineHull([Fraction(v, den) for v in base], sorted(coords), eqs, len(picked), picked)


def affine_rank(points) -> int:
    return affine_hull(points).rank


def polytope_dimension(vertices) -> int:
    """Affine dimension of the convex hull of the vertices."""
    return affine_rank(vertices)


def rank_lower_bound_stream(chunks: Iterable[np.ndarray], target: int) -> tuple[int, list]:
    """Affine rank of streamed integer points, stopping once ``target`` is reached.

    Independence modulo a prime implies independence over the rationals, so
    the returned value is an exact lower bound on the affine rank.
    """
    base = None
    basis: list = []
    kept = []
    for X in chunks:
        X = np.asarray(X, dtype=np.int64)
        if X.shape[0] == 0:
            continue
        if base is None:
            base = X[0].copy()
            kept.append(base)
        basis, picked = _modp_basis(X - base, target=target, basis=basis)
        kept.extend(X[i] for i in picked)
        if len(basis) >= target:
            break
    return len(basis), kept


# ---------------------------------------------------------------------------
# LP membership

def _solve_rational(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(M)
    A = [list(r) + [b] for r, b in zip(M, rhs)]
    for col in range(n):
        piv = next(i for i in range(col, n) if A[i][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        A[col] = [v / pv for v in A[col]]
        for i in range(n):
            if i != col and A[i][col] != 0:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[col])]
    return [A[i][n] for i in range(n)]


class HullOracle:
    """Exact membership in conv(vertices) by phase-I simplex; the vertex matrix is built once."""

    def __init__(self, vertices, verify: bool = True):
        V, self.vden = to_integer_matrix(vertices)
        if isinstance(V, list):
            V = np.array(V, dtype=object)
        if len(V) == 0:
            raise ValueError("need at least one vertex")
        self.V = V
        self.m, self.dim = V.shape
        A = np.empty((self.dim + 1, self.m), dtype=V.dtype)
        A[:self.dim] = V.T
        A[self.dim] = self.vden
        self.A = A
        self.verify = verify
        self.small = V.dtype != object and int(np.abs(V).max(initial=0)) < 1 << 20

    def membership(self, point: Sequence) -> MembershipResult:
        if len(point) != self.dim:
            raise ValueError(f"dimension mismatch: point has {len(point)}, vertices {self.dim}")
        pt = [_q(v) for v in point]
        pden = lcm(1, *(v.denominator for v in pt))
        # variables w' = pden * w:  V^T w' = pden*vden*point,  1 . w' * vden = pden * vden
        b = [int(v * pden * self.vden) for v in pt] + [pden * self.vden]
        sign = [1 if v >= 0 else -1 for v in b]
        b = [abs(v) for v in b]
        A = self.A if all(s > 0 for s in sign) else self.A * np.array(sign, dtype=self.A.dtype)[:, None]
        res = None
        if self.small and max(b) < 1 << 40:
            res = _kernels.simplex_kernel().phase1(A, np.array(b, dtype=np.int64))
        if res is None or res[0] == _kernels.pysimplex.OVERFLOW:
            res = _kernels.pysimplex.phase1(A.tolist(), b)
        status, basis, rhs, zart, det = res
        if status == _kernels.pysimplex.PIVOT_LIMIT:
            raise RuntimeError("simplex pivot limit reached")
        if status == _kernels.pysimplex.FEASIBLE:
            w = {}
            for i, col in enumerate(basis):
                if col < self.m and rhs[i]:
                    w[col] = Fraction(int(rhs[i]), int(det) * pden)
            out = Weights(dict(sorted(w.items())))
            if self.verify:
                self._check_weights(out, pt)
            return out
        # Farkas: Y = det * y with y . A_j <= 0 for every vertex column and y . b > 0
        Y = [(int(det) - int(z)) * s for z, s in zip(zart, sign)]
        coeffs = [-Fraction(self.vden * y) for y in Y[:self.dim]]
        const = -Fraction(Y[self.dim] * self.vden)
        ineq = Inequality(tuple(coeffs), Fraction(0), const).canonical()
        out = Separation(ineq, ineq.slack(pt))
        if self.verify:
            self._check_separation(out, pt)
        return out

    def _check_weights(self, res: Weights, pt) -> None:
        w = res.weights
        if any(v < 0 for v in w.values()) or sum(w.values()) != 1:
            raise CertificateError("weights are not a probability vector")
        for i in range(self.dim):
            s = sum((v * int(self.V[j, i]) for j, v in w.items()), Fraction(0))
            if s != pt[i] * self.vden:
                raise CertificateError("weights do not reproduce the point")

    def _check_separation(self, res: Separation, pt) -> None:
        ineq = res.inequality
        if not ineq.slack(pt) < 0:
            raise CertificateError("separating inequality is not violated by the point")
        c = [int(v) for v in ineq.coeffs]
        b = int(ineq.bound)
        if self.V.dtype != object and max(map(abs, c), default=0) * self.dim * int(np.abs(self.V).max(initial=1)) < 1 << 62:
            vals = self.V @ np.array(c, dtype=np.int64)
            ok = bool(np.all(vals >= b * self.vden))
        else:
            ok = all(sum(int(x) * y for x, y in zip(row, c)) >= b * self.vden for row in self.V.tolist())
        if not ok:
            raise CertificateError("separating inequality is violated by a vertex")


def lp_membership(point: Sequence, vertices, verify: bool = True) -> MembershipResult:
    """Weights expressing the point as a convex combination, or a separating inequality."""
    V = vertices if isinstance(vertices, np.ndarray) else list(vertices)
    if len(V) == 0:
        raise ValueError("need at least one vertex")
    if any(len(v) != len(point) for v in V):
        raise ValueError("dimension mismatch between point and vertices")
    return HullOracle(V, verify).membership(point)


# ---------------------------------------------------------------------------
# validity and facets

def _slacks_int(ineq: Inequality, X: np.ndarray, den: int = 1):
    c = ineq.canonical()
    coeffs = [int(v) for v in c.coeffs]
    if X.dtype != object and max(map(abs, coeffs), default=0) * X.shape[1] * int(np.abs(X).max(initial=1)) < 1 << 62:
        return X @ np.array(coeffs, dtype=np.int64) - int(c.bound) * den
    return np.array([sum(int(a) * b for a, b in zip(row, coeffs)) - int(c.bound) * den for row in X.tolist()],
                    dtype=object)


def is_valid_inequality(ineq: Inequality, vertices) -> bool:
    X, den = to_integer_matrix(vertices)
    X = np.asarray(X, dtype=np.int64 if not isinstance(X, list) else object)
    if X.shape[1] != ineq.dim:
        raise ValueError(f"dimension mismatch: {X.shape[1]} vs {ineq.dim}")
    return bool(np.all(_slacks_int(ineq, X, den) >= 0))


def tight_points(ineq: Inequality, vertices):
    X, den = to_integer_matrix(vertices)
    X = np.asarray(X, dtype=np.int64 if not isinstance(X, list) else object)
    return X[_slacks_int(ineq, X, den) == 0], den


def is_facet(ineq: Inequality, vertices, dim: int | None = None) -> bool:
    """Valid and the tight vertices span an affine space of dimension dim - 1."""
    if not is_valid_inequality(ineq, vertices):
        raise ValueError("inequality is not valid on the vertex set")
    if dim is None:
        dim = polytope_dimension(vertices)
    T, _ = tight_points(ineq, vertices)
    if len(T) == 0:
        return dim == 0
    return affine_rank(T) == dim - 1


def facet_streaming(tight_chunks: Iterable[np.ndarray], dim: int) -> tuple[bool, int]:
    """Facet-positive test: stop as soon as the tight points reach affine rank dim - 1.

    Returns (reached, rank found).  A False answer is only a lower bound.
    """
    r, _ = rank_lower_bound_stream(tight_chunks, dim - 1)
    return r >= dim - 1, r


# ---------------------------------------------------------------------------
# double description

@dataclass
class FacetResult:
    facets: list[Inequality]
    hull: AffineHull
    order: str
    peak_rays: int
    seconds: float
    backend: str


def _row_order(H: list[list[int]], order: str) -> list[int]:
    idx = list(range(len(H)))
    if order == "lex":
        idx.sort(key=lambda i: H[i])
    elif order == "lexmax":
        idx.sort(key=lambda i: H[i], reverse=True)
    elif order.startswith("random"):
        seed = int(order.partition(":")[2] or 0)
        random.Random(seed).shuffle(idx)
    elif order in ("input", "maxcutoff"):
        pass
    else:
        raise ValueError(f"unknown insertion order {order!r}")
    return idx


def _initial_cone(H: list[list[int]], idx: list[int]):
    d = len(H[0])
    _, picked = _modp_basis(np.array([H[i] for i in idx], dtype=np.int64), P31, target=d)
    if len(picked) < d:
        raise ValueError("rows do not span the homogenised space")
    init = [idx[i] for i in picked]
    M = [[Fraction(v) for v in H[i]] for i in init]
    # rays = columns of M^-1
    inv_cols = []
    for j in range(d):
        e = [Fraction(int(i == j)) for i in range(d)]
        col = _solve_rational(M, e)
        den = lcm(*(v.denominator for v in col))
        ints = [int(v * den) for v in col]
        g = gcd(*ints)
        inv_cols.append([v // g for v in ints])
    return init, inv_cols


def _maxcutoff_order(H, init, rays):
    # rows tight on the most initial rays first, then lexicographic
    rest = [i for i in range(len(H)) if i not in set(init)]
    tight = {i: sum(1 for r in rays if sum(a * b for a, b in zip(H[i], r)) == 0) for i in rest}
    rest.sort(key=lambda i: (-tight[i], H[i]))
    return rest


def double_description(vertices, order: str = "lex", max_rays: int = 0, time_limit: float = 0.0,
                       progress=None) -> FacetResult:
    """All facets of conv(vertices), in canonical form and canonical order."""
    t0 = time.monotonic()
    hull = affine_hull(vertices)
    X, den = to_integer_matrix(vertices)
    Xl = X.tolist() if isinstance(X, np.ndarray) else X
    J = hull.coords
    D = len(Xl[0])
    if hull.rank == 0:
        return FacetResult([], hull, order, 0, time.monotonic() - t0, "none")
    H = [[1] + [int(row[j]) for j in J] for row in Xl]
    d = len(H[0])
    idx = _row_order(H, order)
    init, rays = _initial_cone(H, idx)
    if order == "maxcutoff":
        rest = _maxcutoff_order(H, init, rays)
    else:
        s = set(init)
        rest = [i for i in idx if i not in s]
    A = [H[i] for i in init + rest]
    norms = sorted((isqrt(sum(v * v for v in row)) + 1 for row in H), reverse=True)
    hb = 1
    for v in norms[:max(d - 2, 0)]:
        hb *= v
    kern = _kernels.dd_kernel()
    backend = "compiled" if kern is not _kernels.pydd else "python"
    if hb >= P61 or max(abs(v) for row in A for v in row) >= 1 << 62:
        kern, backend = _kernels.pydd, "python"
    if kern is _kernels.pydd:
        out, status, _, peak = kern.dd_core(A, rays, max_rays, time_limit, progress)
    else:
        out, status, _, peak = kern.dd_core(np.array(A, dtype=np.int64), np.array(rays, dtype=np.int64),
                                            max_rays, time_limit, progress)
        if status == _kernels.pydd.OVERFLOW:
            out, status, _, peak = _kernels.pydd.dd_core(A, rays, max_rays, time_limit, progress)
            backend = "python"
    if status == _kernels.pydd.RAY_BUDGET:
        raise BudgetExceeded(f"double description exceeded {max_rays} intermediate rays")
    if status == _kernels.pydd.TIME_BUDGET:
        raise BudgetExceeded(f"double description exceeded {time_limit}s")
    facets = set()
    for ray in (out.tolist() if isinstance(out, np.ndarray) else out):
        coeffs = [Fraction(0)] * D
        for k, j in enumerate(J):
            coeffs[j] = Fraction(int(ray[k + 1]) * den)
        facets.add(Inequality(tuple(coeffs), Fraction(0), Fraction(int(ray[0]))).canonical())
    facets = sorted(facets, key=lambda f: f.key())
    return FacetResult(facets, hull, order, int(peak), time.monotonic() - t0, backend)


def facet_enumeration(vertices, order: str = "lex", max_rays: int = 0, time_limit: float = 0.0,
                      progress=None) -> list[Inequality]:
    return double_description(vertices, order, max_rays, time_limit, progress).facets


def vertices_from_facets(facets: Sequence[Inequality], dim: int) -> list[tuple[Fraction, ...]]:
    """Vertices of a bounded full-dimensional H-polytope (the reverse conversion)."""
    H = []
    for f in facets:
        c = f.canonical()
        H.append([-int(c.bound)] + [int(v) for v in c.coeffs])
    # points are rays (t, t*x) of {y : H y >= 0} with t > 0; the cone also needs t >= 0
    H.append([1] + [0] * dim)
    idx = list(range(len(H)))
    init, rays = _initial_cone(H, idx)
    s = set(init)
    A = [H[i] for i in init + [i for i in idx if i not in s]]
    out, status, _, _ = _kernels.pydd.dd_core(A, rays)
    pts = set()
    for r in out:
        if r[0] <= 0:
            raise ValueError("H-polytope is unbounded")
        pts.add(tuple(Fraction(v, r[0]) for v in r[1:]))
    return sorted(pts)


# ---------------------------------------------------------------------------
# file formats

def write_hrep(path, ineqs: Sequence[Inequality], header: dict | None = None) -> None:
    """Plain H-file: '# key: value' comments, then 'c1 ... cD >= b' lines."""
    with open(path, "w") as fh:
        for k, v in (header or {}).items():
            fh.write(f"# {k}: {v}\n")
        for f in ineqs:
            fh.write(f.line() + "\n")


def read_hrep(path) -> tuple[list[Inequality], dict]:
    header, out = {}, []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                k, _, v = line[1:].partition(":")
                header[k.strip()] = v.strip()
                continue
            out.append(Inequality.from_line(line))
    return out, header


def write_ine(path, ineqs: Sequence[Inequality], comment: str = "") -> None:
    """cdd-style matrix form: each row [-b, c] means -b + c . x >= 0."""
    with open(path, "w") as fh:
        if comment:
            fh.write(f"* {comment}\n")
        fh.write("H-representation\nbegin\n")
        d = ineqs[0].dim if ineqs else 0
        fh.write(f" {len(ineqs)} {d + 1} integer\n")
        for f in ineqs:
            c = f.canonical()
            fh.write(" " + " ".join(str(int(v)) for v in (-c.bound,) + c.coeffs) + "\n")
        fh.write("end\n")


def read_ine(path) -> list[Inequality]:
    rows = _read_cdd_matrix(path, "H-representation")
    return [Inequality(tuple(r[1:]), -r[0]).canonical() for r in rows]


def write_ext(path, points: Sequence[Sequence], comment: str = "") -> None:
    pts = [[_q(v) for v in p] for p in points]
    kind = "integer" if all(v.denominator == 1 for p in pts for v in p) else "rational"
    with open(path, "w") as fh:
        if comment:
            fh.write(f"* {comment}\n")
        fh.write("V-representation\nbegin\n")
        fh.write(f" {len(pts)} {len(pts[0]) + 1 if pts else 1} {kind}\n")
        for p in pts:
            fh.write(" 1 " + " ".join(str(v) for v in p) + "\n")
        fh.write("end\n")


def read_ext(path) -> list[tuple[Fraction, ...]]:
    rows = _read_cdd_matrix(path, "V-representation")
    out = []
    for r in rows:
        if r[0] != 1:
            raise ValueError("rays are not supported in V-files")
        out.append(tuple(r[1:]))
    return out


def _read_cdd_matrix(path, kind):
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("*")]
    if kind not in lines or "begin" not in lines or "end" not in lines:
        raise ValueError(f"not a {kind} file: {path}")
    b = lines.index("begin")
    e = lines.index("end")
    m, d, _ = lines[b + 1].split()
    rows = [[Fraction(t) for t in ln.split()] for ln in lines[b + 2:e]]
    if len(rows) != int(m) or any(len(r) != int(d) for r in rows):
        raise ValueError(f"matrix size does not match header in {path}")
    return rows
