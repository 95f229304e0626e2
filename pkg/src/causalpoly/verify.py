"""Bundled structural checks with pass/fail reports and counterexamples."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from math import ceil, comb

from .causal import FullyCausal, MCausal, SizeSCausal, TwoCausal, is_det_in_class, is_det_P_causal
from .constructions import (PermutationSigma, build_dynamical_order, build_m_causal_saturator, build_p_sigma,
                            build_size_s_saturator, m_causal_partition, separation_sigma, size_s_partition)
from .inequalities import j2
from .partition import (class_bound_J2, is_coarse_graining, iter_partitions, m_causal_bound,
                        max_block_size, pair_bound_L, size_s_bound, check_size_number_relation)


@dataclass
class Report:
    name: str
    passed: bool = True
    checked: int = 0
    lines: list[str] = field(default_factory=list)
    counterexample: object = None
    seconds: float = 0.0

    def fail(self, msg: str, payload=None) -> None:
        if self.passed:
            self.counterexample = payload if payload is not None else msg
        self.passed = False
        self.lines.append("FAIL " + msg)

    def text(self) -> str:
        head = f"{self.name}: {'PASS' if self.passed else 'FAIL'} ({self.checked} checks, {self.seconds:.2f}s)"
        return "\n".join([head] + ["  " + s for s in self.lines])

    def to_json(self) -> dict:
        ce = self.counterexample
        return {"name": self.name, "passed": self.passed, "checked": self.checked, "lines": self.lines,
                "counterexample": None if ce is None else str(ce), "seconds": round(self.seconds, 3)}


def _timed(fn):
    def wrapper(*a, **kw):
        t = time.monotonic()
        rep = fn(*a, **kw)
        rep.seconds = time.monotonic() - t
        return rep
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def partition_separation(n: int) -> Report:
    """Every ordered pair of distinct partitions with >= 2 blocks is separated by a P-sigma response."""
    rep = Report(f"partition-separation n={n}")
    parts = list(iter_partitions(n, min_blocks=2))
    for p, q in itertools.permutations(parts, 2):
        sigma = separation_sigma(p, q)
        w = build_p_sigma(p, sigma)
        rep.checked += 1
        if not is_det_P_causal(w, p) or is_det_P_causal(w, q):
            rep.fail(f"P={p} P'={q} sigma={sigma.order}", (str(p), str(q), sigma.order))
    rep.lines.append(f"{len(parts)} partitions, {rep.checked} ordered pairs")
    return rep


@_timed
def size_number_relation(n_max: int = 8) -> Report:
    """|P| - 1 + s(P) <= N <= |P| s(P) for all partitions, and the class inclusions it implies."""
    rep = Report(f"size-number relation n<={n_max}")
    for n in range(1, n_max + 1):
        parts = list(iter_partitions(n))
        for p in parts:
            rep.checked += 1
            if not check_size_number_relation(p):
                rep.fail(f"n={n} P={p}", str(p))
        for m in range(1, n + 1):
            # every partition with >= m blocks has blocks of size <= n - m + 1
            bad = [p for p in parts if len(p) >= m and max_block_size(p) > n - m + 1]
            rep.checked += 1
            if bad:
                rep.fail(f"n={n} M={m}: {bad[0]} has a block larger than {n - m + 1}", str(bad[0]))
        for s in range(1, n + 1):
            bad = [p for p in parts if max_block_size(p) <= s and len(p) < ceil(n / s)]
            rep.checked += 1
            if bad:
                rep.fail(f"n={n} S={s}: {bad[0]} has fewer than {ceil(n / s)} blocks", str(bad[0]))
        rep.lines.append(f"n={n}: {len(parts)} partitions")
    return rep


def _witness_outside(p, others) -> tuple[bool, object]:
    w = build_p_sigma(p, tuple(range(len(p))))
    if not is_det_P_causal(w, p):
        return False, ("not P-causal", str(p))
    for q in others:
        if is_det_P_causal(w, q):
            return False, (str(p), str(q))
    return True, None


@_timed
def noninclusion_witnesses(n: int) -> Report:
    """Witnesses that M-causal is not inside size-S for S < N-M+1 and size-S not inside M-causal for M > ceil(N/S)."""
    rep = Report(f"non-inclusion witnesses n={n}")
    all_parts = list(iter_partitions(n))
    for m in range(1, n + 1):
        p = m_causal_partition(n, m)
        for s in range(1, n - m + 1):
            others = [q for q in all_parts if max_block_size(q) <= s]
            ok, ce = _witness_outside(p, others)
            rep.checked += 1
            if not ok:
                rep.fail(f"M={m} S={s}", ce)
    for s in range(1, n + 1):
        p = size_s_partition(n, s)
        for m in range(ceil(n / s) + 1, n + 1):
            others = [q for q in all_parts if len(q) >= m]
            ok, ce = _witness_outside(p, others)
            rep.checked += 1
            if not ok:
                rep.fail(f"S={s} M={m}", ce)
    return rep


@_timed
def coarse_graining_witnesses(n: int) -> Report:
    """P-sigma (all sigma) is P'-causal for no partition P' that fails to coarse-grain P."""
    rep = Report(f"coarse-graining witnesses n={n}")
    parts = list(iter_partitions(n))
    for p in parts:
        others = [q for q in parts if not is_coarse_graining(p, q)]
        for order in itertools.permutations(range(len(p))):
            w = build_p_sigma(p, PermutationSigma.from_order(order))
            rep.checked += 1
            if not is_det_P_causal(w, p):
                rep.fail(f"P={p} sigma={order} not P-causal", (str(p), order))
                continue
            for q in others:
                rep.checked += 1
                if is_det_P_causal(w, q):
                    rep.fail(f"P={p} sigma={order} is {q}-causal", (str(p), order, str(q)))
    return rep


@_timed
def dynamical_order() -> Report:
    """The dynamical-order correlation is fully causal but P'-causal for no 3-block partition."""
    rep = Report("dynamical order")
    d = build_dynamical_order()
    rep.checked += 1
    if not is_det_in_class(d, FullyCausal()):
        rep.fail("not fully causal", "fully")
    for q in iter_partitions(4, exact_blocks=3):
        rep.checked += 1
        if is_det_P_causal(d, q):
            rep.fail(f"is {q}-causal", str(q))
        else:
            rep.lines.append(f"not {q}-causal")
    return rep


@_timed
def pairwise_bounds(n_max: int = 8, saturate_max: int = 6) -> Report:
    """Partition arithmetic for the summed LGYNI bounds, and saturation by explicit responses."""
    rep = Report(f"pairwise bounds n<={n_max}")
    for n in range(2, n_max + 1):
        parts = list(iter_partitions(n))
        for m in range(1, n + 1):
            brute = min(pair_bound_L(p) for p in parts if len(p) >= m)
            rep.checked += 1
            if brute != m_causal_bound(n, m) or class_bound_J2(n, MCausal(m)) != brute:
                rep.fail(f"n={n} M={m}: brute {brute} vs {m_causal_bound(n, m)}", (n, m))
        for s in range(1, n + 1):
            brute = min(pair_bound_L(p) for p in parts if max_block_size(p) <= s)
            rep.checked += 1
            if brute != size_s_bound(n, s):
                rep.fail(f"n={n} S={s}: brute {brute} vs {size_s_bound(n, s)}", (n, s))
        rep.checked += 1
        if class_bound_J2(n, TwoCausal()) != -comb(n - 1, 2):
            rep.fail(f"n={n} 2-causal bound", n)
        if n <= saturate_max:
            f = j2(n)
            for m in range(1, n + 1):
                rep.checked += 1
                v = f.value(build_m_causal_saturator(n, m))
                if v != m_causal_bound(n, m):
                    rep.fail(f"n={n} M={m} saturator gives {v}", (n, m, str(v)))
            for s in range(1, n + 1):
                rep.checked += 1
                v = f.value(build_size_s_saturator(n, s))
                if v != size_s_bound(n, s):
                    rep.fail(f"n={n} S={s} saturator gives {v}", (n, s, str(v)))
    return rep


TARGETS = {
    "partition-separation": lambda n=4: [partition_separation(k) for k in range(3, n + 1)],
    "inclusions": lambda n=8: [size_number_relation(n)] + [noninclusion_witnesses(k) for k in (4, 5)],
    "pairwise-bounds": lambda n=8: [pairwise_bounds(n)],
    "dynamical-order": lambda n=None: [dynamical_order()],
    "coarse-graining": lambda n=4: [coarse_graining_witnesses(k) for k in range(3, n + 1)],
}


def run_target(name: str, n: int | None = None) -> list[Report]:
    if name not in TARGETS:
        raise ValueError(f"unknown target {name!r}; known: {sorted(TARGETS)}")
    fn = TARGETS[name]
    return fn() if n is None else fn(n)


__all__ = ["Report", "partition_separation", "size_number_relation", "noninclusion_witnesses",
           "coarse_graining_witnesses", "dynamical_order", "pairwise_bounds", "TARGETS", "run_target",
           "SizeSCausal"]
