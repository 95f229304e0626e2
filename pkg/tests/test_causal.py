import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from causalpoly import _kernels
from causalpoly.causal import (FixedOrder, FullyCausal, GroupOrder, MCausal, PCausal, SizeSCausal, TwoCausal,
                               brute_two_causal_count, classify_masks, count_vertices, enumerate_vertices,
                               is_compatible_with_order, is_det_in_class, is_det_P_causal,
                               membership_brute_small, pairwise_ignorance_holds, parse_class, scan_functional,
                               two_causal_count_inclusion_exclusion, vertex_masks)
from causalpoly.partition import Partition, iter_partitions
from causalpoly.scenario import PartySpec, Scenario, all_deterministic, det_to_mask, make_lazy_scenario, mask_to_det


def test_frozen_counts():
    assert count_vertices(1, TwoCausal()) == 2
    assert count_vertices(2, TwoCausal()) == 12
    assert count_vertices(3, TwoCausal()) == 1520
    assert count_vertices(3, FullyCausal()) == 680
    assert count_vertices(3, FixedOrder((0, 1, 2))) == 128


def test_two_causal_count_oracles():
    for n in (1, 2, 3):
        assert two_causal_count_inclusion_exclusion(n) == count_vertices(n, TwoCausal())
    assert brute_two_causal_count(2) == 12
    assert brute_two_causal_count(3) == 1520
    # n = 4 only through the arithmetic oracle; the full scan is too slow for the unit suite
    assert two_causal_count_inclusion_exclusion(4) == 136_818_592


def test_class_hierarchy_n3():
    n = 3
    two = set(vertex_masks(n, TwoCausal()).tolist())
    fully = set(vertex_masks(n, FullyCausal()).tolist())
    assert set(vertex_masks(n, MCausal(2)).tolist()) == two
    assert set(vertex_masks(n, MCausal(3)).tolist()) == fully
    assert set(vertex_masks(n, SizeSCausal(1)).tolist()) == fully
    assert set(vertex_masks(n, SizeSCausal(2)).tolist()) == two
    union = set()
    for p in iter_partitions(n, min_blocks=2):
        part = set(vertex_masks(n, PCausal(p)).tolist())
        assert part <= two
        if len(p) == 2:
            # a fully causal response with a dynamical order can escape one bipartition
            assert not fully <= part
        union |= part
    assert fully <= two
    assert union == two
    orders = set()
    for order in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
        orders |= set(vertex_masks(n, FixedOrder(order)).tolist())
    assert orders < fully


def test_kernels_agree():
    for n in (2, 3):
        for cls in (TwoCausal(), FullyCausal(), FixedOrder(tuple(range(n)))):
            from causalpoly.causal import enumeration_blocks
            blocks, ordered = enumeration_blocks(cls, n)
            a = _kernels.pyenum.scan_class(n, blocks, ordered, store=1)
            b = _kernels.enum_kernel(n).scan_class(n, blocks, ordered, store=1)
            assert a["count"] == b["count"]
            assert sorted(int(m) for m in a["masks"]) == sorted(int(m) for m in b["masks"])


def test_generic_recursion_matches_kernel():
    n = 3
    s = make_lazy_scenario(n)
    for cls in (TwoCausal(), FullyCausal(), PCausal(Partition.parse("1|2,3")), FixedOrder((2, 0, 1))):
        verts = set(vertex_masks(n, cls).tolist())
        dets = list(all_deterministic(s))
        masks = np.array([det_to_mask(d) for d in dets], dtype=np.uint64)
        flags = classify_masks(n, masks, cls)
        assert int(flags.sum()) == len(verts)
        for d, f in list(zip(dets, flags))[::3]:
            assert is_det_in_class(d, cls) == bool(f) == (det_to_mask(d) in verts)


def test_pairwise_ignorance_equivalence_n3():
    s = make_lazy_scenario(3)
    for p in iter_partitions(3, min_blocks=2):
        for d in all_deterministic(s):
            if is_det_P_causal(d, p):
                assert pairwise_ignorance_holds(d, p)


def test_coarse_graining_does_not_transfer():
    # the fine partition is P-causal but the coarse one need not be
    s = make_lazy_scenario(3)
    fine, coarse = Partition.singletons(3), Partition.parse("1|2,3")
    gaps = [d for d in all_deterministic(s) if is_det_P_causal(d, fine) and not is_det_P_causal(d, coarse)]
    assert gaps


def test_parse_class():
    assert parse_class("2causal") == TwoCausal()
    assert parse_class("m:2") == MCausal(2)
    assert parse_class("p:1|2,3") == PCausal(Partition.parse("1|2,3"))
    assert parse_class("order:2,1,3") == FixedOrder((1, 0, 2))
    for bad in ("m:x", "bogus", "p:1|1"):
        with pytest.raises(ValueError):
            parse_class(bad)
    with pytest.raises(ValueError):
        count_vertices(3, MCausal(4))


def test_mixed_scenario_enumeration():
    s = Scenario((PartySpec((1, 2)), PartySpec((2, 2))))
    verts = enumerate_vertices(s, TwoCausal())
    assert verts == sorted(verts, key=lambda d: d.table_key())
    assert len(verts) == len(set(verts))
    # the bipartite Bell-type scenario: a vertex is causal iff one party ignores the other's input
    for d in all_deterministic(s):
        a_first = all(d((x, 0))[0] == d((x, 1))[0] for x in (0, 1))
        b_first = all(d((0, y))[1] == d((1, y))[1] for y in (0, 1))
        one_way = a_first or b_first
        assert is_det_in_class(d, TwoCausal()) == one_way


def test_group_order_compatibility():
    s = make_lazy_scenario(3)
    order = GroupOrder.parse("1<2,3")
    # a single-party order is a refinement of 1 < {2,3}
    for m in vertex_masks(3, FixedOrder((0, 2, 1))).tolist()[::4]:
        assert is_compatible_with_order(mask_to_det(s, m), order)
    ident = mask_to_det(s, int(vertex_masks(3, FixedOrder((0, 1, 2)))[5]))
    assert is_compatible_with_order(ident, order)


def test_scan_functional_min():
    w = [0] * (8 * 8)
    w[7 * 8 + 7] = 1
    res = scan_functional(3, TwoCausal(), w, target=0, store=2)
    assert res["count"] == 1520
    assert res["min"] == 0


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_membership_brute_matches_classification(data):
    s = make_lazy_scenario(2)
    dets = list(all_deterministic(s))
    d = data.draw(st.sampled_from(dets))
    assert membership_brute_small(d.to_correlation(), TwoCausal()) == is_det_in_class(d, TwoCausal())
