"""Compiled vs pure-Python kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import itertools
import time

import numpy as np

from causalpoly import _kernels
from causalpoly.catalog import vertex_matrix
from causalpoly.causal import FullyCausal, TwoCausal, enumeration_blocks
from causalpoly.geometry import _initial_cone


def best_of(fn, repeat):
    ts = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        ts.append(time.perf_counter() - t)
    return min(ts), out


def bench_enum(repeat):
    blocks, ordered = enumeration_blocks(TwoCausal(), 3)
    w = list(np.random.default_rng(0).integers(-3, 4, 64))
    for name, mod in (("compiled", _kernels.enum_kernel(3)), ("python", _kernels.pyenum)):
        t, res = best_of(lambda: mod.scan_class(3, blocks, ordered, weights=w), repeat)
        yield "enum n=3 2causal weighted scan", name, t, res["count"]


def _dd_input(vertices):
    H = [[1] + [int(v) for v in row] for row in vertices]
    idx = sorted(range(len(H)), key=lambda i: H[i])
    init, rays = _initial_cone(H, idx)
    rest = [i for i in idx if i not in set(init)]
    return [H[i] for i in init + rest], rays


def bench_dd(repeat):
    V = np.array([p for p in itertools.product([0, 1], repeat=8) if sum(p) % 3 != 1])
    A, rays = _dd_input(V)
    An, Rn = np.array(A, dtype=np.int64), np.array(rays, dtype=np.int64)
    for name, fn in (("compiled", lambda: _kernels.dd_kernel().dd_core(An, Rn)),
                     ("python", lambda: _kernels.pydd.dd_core(A, rays))):
        t, res = best_of(fn, repeat)
        yield f"dd 0/1 polytope ({len(V)} vertices, dim 8)", name, t, len(res[0])


def bench_simplex(repeat):
    V = vertex_matrix(3, FullyCausal())
    A = np.vstack([V.T, np.ones(len(V), dtype=np.int64)])
    rng = np.random.default_rng(1)
    rhs = []
    for _ in range(20):
        w = rng.integers(0, 5, len(V))
        w[rng.random(len(V)) < 0.97] = 0
        w[0] += 1
        rhs.append(np.concatenate([V.T @ w, [w.sum()]]))
    Al = A.tolist()
    for name, fn in (("compiled", lambda: [_kernels.simplex_kernel().phase1(A, b)[0] for b in rhs]),
                     ("python", lambda: [_kernels.pysimplex.phase1(Al, [int(v) for v in b])[0] for b in rhs])):
        t, res = best_of(fn, repeat)
        yield "simplex 20 memberships in the n=3 fully causal hull", name, t, sum(s == 0 for s in res)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"backend at import: {_kernels.BACKEND}")
    print(f"{'kernel':52s} {'impl':9s} {'seconds':>9s}  result")
    for bench in (bench_enum, bench_dd, bench_simplex):
        rows = list(bench(args.repeat))
        for label, name, t, res in rows:
            print(f"{label:52s} {name:9s} {t:9.4f}  {res}")
        print(f"{'':52s} speedup {rows[1][2] / rows[0][2]:8.1f}x")


if __name__ == "__main__":
    main()
