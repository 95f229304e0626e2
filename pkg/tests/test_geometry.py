import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from scipy.spatial import ConvexHull

from causalpoly import _kernels
from causalpoly.errors import BudgetExceeded
from causalpoly.geometry import (HullOracle, Inequality, Separation, Weights, affine_hull, affine_rank,
                                 double_description, facet_enumeration, facet_streaming, is_facet,
                                 is_valid_inequality, lp_membership, polytope_dimension, read_ext, read_hrep,
                                 read_ine, tight_points, vertices_from_facets, write_ext, write_hrep, write_ine)

CUBE = [list(p) for p in itertools.product([0, 1], repeat=3)]


def _scipy_facets(pts):
    """Facet count from qhull, merging coplanar simplices by their rounded equations."""
    hull = ConvexHull(np.array(pts, dtype=float))
    eqs = {tuple(np.round(e / np.abs(e[:-1]).max(), 9)) for e in hull.equations}
    return len(eqs)


def test_inequality_canonical():
    f = Inequality((Fraction(1, 2), Fraction(-3, 4)), Fraction(1, 4), Fraction(1))
    c = f.canonical()
    assert c.coeffs == (2, -3) and c.bound == -3
    assert f == c
    assert Inequality.from_line(f.line()) == f
    with pytest.raises(TypeError):
        Inequality((0.5, 1))
    with pytest.raises(ValueError):
        f.lhs([1])


def test_cube_facets():
    fs = facet_enumeration(CUBE)
    assert len(fs) == 6
    assert sorted(f.line() for f in fs) == sorted(
        ["1 0 0 >= 0", "0 1 0 >= 0", "0 0 1 >= 0", "-1 0 0 >= -1", "0 -1 0 >= -1", "0 0 -1 >= -1"])
    assert sorted(vertices_from_facets(fs, 3)) == sorted(tuple(Fraction(v) for v in p) for p in CUBE)


def test_lower_dimensional_hull():
    square = [[a, b, a + b] for a in (0, 1) for b in (0, 1)]
    h = affine_hull(square)
    assert h.rank == 2
    assert len(h.equations) == 1
    fs = facet_enumeration(square)
    assert len(fs) == 4
    assert all(is_valid_inequality(f, square) for f in fs)


def test_affine_rank_against_sympy():
    rng = np.random.default_rng(5)
    for _ in range(20):
        X = rng.integers(-3, 4, size=(int(rng.integers(1, 8)), 6))
        X[:, 3] = X[:, 0] + 2 * X[:, 1]
        base = X[0]
        expect = sympy.Matrix((X - base).tolist()).rank()
        assert affine_rank(X) == expect


def test_membership_certificates():
    oracle = HullOracle(CUBE)
    inside = oracle.membership([Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)])
    assert isinstance(inside, Weights)
    assert sum(inside.weights.values()) == 1
    out = oracle.membership([Fraction(3, 2), 0, 0])
    assert isinstance(out, Separation)
    assert out.value < 0
    assert is_valid_inequality(out.inequality, CUBE)
    with pytest.raises(ValueError):
        lp_membership([0, 0], CUBE)
    with pytest.raises(TypeError):
        lp_membership([0.5, 0, 0], CUBE)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 7), st.integers(3, 40))
def test_python_and_compiled_simplex_agree(seed, rows, cols):
    rng = np.random.default_rng(seed)
    V = rng.integers(0, 2, size=(cols, rows))
    A = np.vstack([V.T, np.ones(cols, dtype=np.int64)])
    b = np.concatenate([rng.integers(0, 4, size=rows), [int(rng.integers(1, 4))]])
    r1 = _kernels.pysimplex.phase1(A.tolist(), [int(v) for v in b])
    r2 = _kernels.simplex_kernel().phase1(A, b)
    # same pivot rule and scaling, so every returned integer must match
    norm = lambda r: (r[0], list(r[1]), [int(v) for v in r[2]], [int(v) for v in r[3]], int(r[4]))
    assert norm(r1) == norm(r2)


def test_facets_and_tight_points():
    f = Inequality((1, 0, 0))
    assert is_facet(f, CUBE)
    assert not is_facet(Inequality((1, 1, 0)), CUBE)
    T, den = tight_points(f, CUBE)
    assert len(T) == 4 and den == 1
    ok, r = facet_streaming([T[:2], T[2:]], 3)
    assert ok and r == 2
    with pytest.raises(ValueError):
        is_facet(Inequality((1, 0, 0), 1), CUBE)


def test_dd_budget():
    pts = [list(p) for p in itertools.product([0, 1], repeat=5)]
    with pytest.raises(BudgetExceeded):
        double_description(pts, max_rays=3)


def test_dd_orders_agree():
    rng = np.random.default_rng(2)
    pts = rng.integers(0, 2, size=(14, 5)).tolist()
    ref = facet_enumeration(pts, order="lex")
    for order in ("lexmax", "random:3", "maxcutoff", "input"):
        assert facet_enumeration(pts, order=order) == ref
    with pytest.raises(ValueError):
        facet_enumeration(pts, order="nope")


def test_python_dd_matches_compiled(monkeypatch):
    rng = np.random.default_rng(8)
    pts = rng.integers(0, 2, size=(18, 6)).tolist()
    ref = facet_enumeration(pts)
    monkeypatch.setattr(_kernels, "dd_kernel", lambda: _kernels.pydd)
    assert facet_enumeration(pts) == ref


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(*[st.integers(0, 1)] * 4), min_size=6, max_size=14, unique=True))
def test_facets_against_qhull(pts):
    pts = [list(p) for p in pts]
    if polytope_dimension(pts) < 4:
        return
    fs = facet_enumeration(pts)
    assert len(fs) == _scipy_facets(pts)
    for f in fs:
        assert is_facet(f, pts, dim=4)
    # round trip V -> H -> V gives back the extreme points
    back = vertices_from_facets(fs, 4)
    assert set(back) <= {tuple(Fraction(v) for v in p) for p in pts}
    hull = ConvexHull(np.array(pts, dtype=float))
    assert len(back) == len(hull.vertices)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 9), min_size=8, max_size=8), st.integers(0, 7))
def test_mixtures_are_members(ws, drop):
    tot = sum(ws)
    pt = [sum(Fraction(w, tot) * v[i] for w, v in zip(ws, CUBE)) for i in range(3)]
    res = lp_membership(pt, CUBE)
    assert isinstance(res, Weights)
    outside = [pt[0] + 2, pt[1], pt[2]]
    assert isinstance(lp_membership(outside, CUBE), Separation)


def test_file_formats(tmp_path):
    fs = facet_enumeration(CUBE)
    write_hrep(tmp_path / "c.h", fs, {"dim": 3})
    back, hdr = read_hrep(tmp_path / "c.h")
    assert back == fs and hdr["dim"] == "3"
    write_ine(tmp_path / "c.ine", fs, "cube")
    assert read_ine(tmp_path / "c.ine") == fs
    write_ext(tmp_path / "c.ext", CUBE)
    assert read_ext(tmp_path / "c.ext") == [tuple(Fraction(v) for v in p) for p in CUBE]
    (tmp_path / "bad.ine").write_text("H-representation\nbegin\n 2 3 integer\n 1 0 0\nend\n")
    with pytest.raises(ValueError):
        read_ine(tmp_path / "bad.ine")
