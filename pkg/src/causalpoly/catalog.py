"""Family catalogue flags and facet checks on class polytopes."""
from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from .causal import FixedOrder, FullyCausal, scan_functional, vertex_masks
from .errors import BudgetExceeded
from .geometry import Inequality, affine_hull, polytope_dimension, rank_lower_bound_stream
from .scenario import Scenario, make_lazy_scenario
from .symmetry import classify_orbits, symmetry_group


def vertex_matrix(n: int, cls, max_vertices: int = 5_000_000, time_limit: float = 0.0) -> np.ndarray:
    """Parameter vectors (int64 rows) of the class vertices in canonical order."""
    s = make_lazy_scenario(n)
    masks = vertex_masks(n, cls, max_vertices=max_vertices, time_limit=time_limit)
    return masks_to_params(s, masks)


def masks_to_params(s: Scenario, masks) -> np.ndarray:
    """Vectorised mask -> parameter vector for the lazy scenario."""
    n = s.n
    masks = np.asarray(masks, dtype=np.uint64)
    out = np.zeros((len(masks), s.dimension), dtype=np.int64)
    full = np.uint64((1 << n) - 1)
    for i, (x, outs) in enumerate(zip(s.inputs, s.allowed_outputs)):
        xi = sum(b << (n - 1 - k) for k, b in enumerate(x))
        a = (masks >> np.uint64(n * xi)) & full
        off = s.param_offsets[i]
        for j, o in enumerate(outs[:-1]):
            oi = sum(b << (n - 1 - k) for k, b in enumerate(o))
            out[:, off + j] = (a == np.uint64(oi))
    return out


def fixed_order_matrix(n: int) -> np.ndarray:
    """Vertices compatible with at least one fixed order of single parties."""
    masks = set()
    for order in itertools.permutations(range(n)):
        masks.update(int(m) for m in vertex_masks(n, FixedOrder(order)))
    from .causal import canonical_sort_masks
    return masks_to_params(make_lazy_scenario(n), canonical_sort_masks(np.array(sorted(masks), dtype=np.uint64), n))


def _slacks(rows: np.ndarray, X: np.ndarray) -> np.ndarray:
    """rows are canonical keys (c, -b): slack = X c - b."""
    R = np.asarray(rows, dtype=np.int64)
    return X @ R[:, :-1].T + R[:, -1][None, :]


def family_catalog(ineqs: Sequence[Inequality], s: Scenario, flags: bool = False, time_limit: float = 0.0):
    """Orbit records; with ``flags`` also sat_fully, sat_fixed and facet_fully (lazy scenario)."""
    orbits = classify_orbits(ineqs, s, symmetry_group(s))
    if not flags:
        return orbits
    if not s.is_lazy:
        raise ValueError("catalogue flags need the lazy scenario")
    F = vertex_matrix(s.n, FullyCausal(), time_limit=time_limit)
    X = fixed_order_matrix(s.n)
    dim_f = polytope_dimension(F)
    reps = np.array([o.representative.key() for o in orbits], dtype=np.int64)
    sf = _slacks(reps, F)
    sx = _slacks(reps, X)
    for k, o in enumerate(orbits):
        tight_f = F[sf[:, k] == 0]
        o.flags["sat_fully"] = bool(len(tight_f))
        o.flags["sat_fixed"] = bool(np.any(sx[:, k] == 0))
        o.flags["facet_fully"] = bool(len(tight_f)) and bool(np.all(sf[:, k] >= 0)) and \
            affine_hull(tight_f).rank == dim_f - 1
    return orbits


def facet_check(fn, cls, time_limit: float = 0.0, max_store: int = 20_000_000, exhaustive: bool = True) -> dict:
    """Validity and facet test of a table functional on a lazy class polytope.

    The tight vertices are streamed from the enumeration kernel.  A facet is
    confirmed as soon as their affine rank reaches dim - 1; refuting it needs
    the exact rank of the whole tight set.
    """
    n = fn.n
    s = make_lazy_scenario(n)
    res = scan_functional(n, cls, fn.det_weights(), target=fn.bound, store=2, max_store=max_store,
                          time_limit=time_limit)
    valid = res["min"] is not None and res["min"] >= fn.bound
    out = {"valid": bool(valid), "min": str(res["min"]), "vertices": res["count"],
           "tight": res["target_count"], "facet": False, "rank": None, "dim": None}
    if not valid:
        return out
    # polytope dimension from the class vertices themselves (streamed rank of all vertices)
    dim = class_dimension(n, cls, time_limit=time_limit)
    out["dim"] = dim
    masks = res["masks"]
    chunks = (masks_to_params(s, masks[i:i + 4096]) for i in range(0, len(masks), 4096))
    r, _ = rank_lower_bound_stream(chunks, dim - 1)
    if r >= dim - 1:
        out.update(facet=True, rank=r)
        return out
    if not exhaustive:
        out["rank"] = f">={r}"
        return out
    hull = affine_hull(masks_to_params(s, masks))
    out["rank"] = hull.rank
    out["facet"] = hull.rank == dim - 1
    return out


def class_dimension(n: int, cls, time_limit: float = 0.0, max_vertices: int = 2_000_000) -> int:
    """Affine dimension of the class polytope, exact.

    Small classes are ranked directly.  Otherwise the fixed-order vertices
    that belong to the class give a lower bound, which is exact once it
    reaches the ambient dimension.
    """
    from .causal import classify_masks, count_vertices
    s = make_lazy_scenario(n)
    if n >= 4:
        masks = set()
        for order in itertools.permutations(range(n)):
            masks.update(int(m) for m in vertex_masks(n, FixedOrder(order)))
        masks = np.array(sorted(masks), dtype=np.uint64)
        masks = masks[classify_masks(n, masks, cls)]
        X = masks_to_params(s, masks)
        r, _ = rank_lower_bound_stream((X[i:i + 4096] for i in range(0, len(X), 4096)), s.dimension)
        if r >= s.dimension:
            return r
    if count_vertices(n, cls, time_limit=time_limit) > max_vertices:
        raise BudgetExceeded(f"class {cls} has too many vertices for an exact dimension")
    return polytope_dimension(vertex_matrix(n, cls, time_limit=time_limit))


__all__ = ["vertex_matrix", "masks_to_params", "fixed_order_matrix", "family_catalog", "facet_check",
           "class_dimension", "BudgetExceeded"]
