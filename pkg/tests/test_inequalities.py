from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from causalpoly.causal import FullyCausal, MCausal, SizeSCausal, TwoCausal, vertex_masks
from causalpoly.constructions import build_order_mixture, named_correlation
from causalpoly.inequalities import (build_family, class_bound, eval_inequality, functional, game_from_value,
                                     game_success_probability, i1, i2, i3, j1, j2, lgyni, parse_family,
                                     split_lgyni, verify_family_bound)
from causalpoly.partition import Partition
from causalpoly.scenario import all_deterministic, make_lazy_scenario, mask_to_det, mixture


def test_i2_is_sum_of_lgyni_terms():
    f = lgyni(3, 0, 1) + lgyni(3, 0, 2) + lgyni(3, 1, 2)
    assert f.terms == i2().terms
    assert (i2().const, i2().bound) == (1, 0)
    # moving the constant gives the LGYNI sum >= -1
    assert j2(3).bound == -1 and j2(3).const == 0
    assert build_family("i2") == build_family("j2:3")


def test_j1_two_parties_is_lgyni():
    assert j1(2).terms == lgyni(2, 0, 1).terms
    assert j1(3).terms == i1().terms


def test_bounds_as_built():
    assert [build_family(k).bound for k in ("i1", "i3", "j1:4")] == [0, 0, 0]
    assert build_family("j2:5").bound == -comb(4, 2)
    with pytest.raises(ValueError):
        parse_family("j3:4")
    with pytest.raises(ValueError):
        lgyni(3, 1, 1)


def test_spec_values():
    assert eval_inequality(build_family("i2"), named_correlation("zero-yz-yz")) == 0
    assert i2().value(named_correlation("zero-yz-yz")) == 0
    assert i1().value(named_correlation("all-xyz")) == -1
    assert eval_inequality(build_family("i1"), named_correlation("all-xyz")) == -1
    mix = build_order_mixture(3)
    assert split_lgyni(Partition.parse("1|2,3")).value(mix) == Fraction(-1, 3)
    assert eval_inequality(build_family("blgyni:1|2,3"), mix) == Fraction(-1, 3)


def test_games_on_examples():
    zero = named_correlation("zero")
    assert game_success_probability("i1", zero) == Fraction(3, 4)
    s = make_lazy_scenario(3)
    from causalpoly.scenario import DetCorrelation
    d = DetCorrelation.from_function(s, lambda x: [x[0], x[0] * x[1], x[1] * x[2]])
    assert game_success_probability("i3", d) == Fraction(7, 8)
    with pytest.raises(ValueError):
        game_success_probability("lgyni", zero)


def test_game_identities_on_all_responses():
    s = make_lazy_scenario(3)
    fs = {"i1": i1(), "i3": i3(), "i2": i2()}
    for d in list(all_deterministic(s))[::11]:
        for kind, f in fs.items():
            assert game_success_probability(kind, d) == game_from_value(kind, 3, f.value(d))


def test_game_maxima_over_two_causal():
    s = make_lazy_scenario(3)
    dets = [mask_to_det(s, m) for m in vertex_masks(3, TwoCausal()).tolist()]
    assert max(game_success_probability("i1", d) for d in dets) == Fraction(3, 4)
    assert max(game_success_probability("i2", d) for d in dets) == Fraction(5, 4)
    assert max(game_success_probability("i3", d) for d in dets) == Fraction(7, 8)


def test_j1_game_bound_n4():
    # 1 - 2**(1 - n) via the affine relation at the minimum J1 = 0
    assert game_from_value("j1", 4, 0) == 1 - Fraction(1, 8)


def test_algebraic_minimum_j2_n3():
    s = make_lazy_scenario(3)
    assert min(j2(3).value(d) for d in all_deterministic(s)) == -comb(3, 2)


def test_fully_causal_lgyni_terms_nonnegative():
    s = make_lazy_scenario(3)
    terms = [lgyni(3, i, j) for i, j in ((0, 1), (0, 2), (1, 2))]
    for m in vertex_masks(3, FullyCausal()).tolist():
        d = mask_to_det(s, m)
        assert all(t.value(d) >= 0 for t in terms)


def test_verify_bounds():
    rep = verify_family_bound("j2:3", TwoCausal())
    assert rep.ok and rep.minimum == -1 and rep.saturated
    rep = verify_family_bound("j2:5", MCausal(3))
    assert rep.ok and rep.bound == -3 and rep.minimum is None
    rep = verify_family_bound("j2:6", SizeSCausal(4))
    assert rep.bound == -7 and rep.ok
    for k in ("i1", "i3"):
        rep = verify_family_bound(k, TwoCausal())
        assert rep.ok and rep.minimum == 0
    assert class_bound(parse_family("lgyni:1,2"), FullyCausal()) == 0
    assert class_bound(parse_family("lgyni:1,2"), TwoCausal()) == -1


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_functional_and_parameter_forms_agree(data):
    s = make_lazy_scenario(3)
    dets = list(all_deterministic(s))
    picks = data.draw(st.lists(st.sampled_from(dets), min_size=1, max_size=3))
    p = mixture([d.to_correlation() for d in picks], [Fraction(1, len(picks))] * len(picks))
    name = data.draw(st.sampled_from(["i1", "i2", "i3", "lgyni:1,3", "blgyni:1,2|3"]))
    fam = parse_family(name)
    fn = functional(fam)
    ineq = fn.to_inequality(s)
    assert ineq.lhs(tuple(v for b in p.table for v in b[:-1])) - ineq.bound == fn.value(p) - fn.bound


@settings(max_examples=30, deadline=None)
@given(st.integers(0, (1 << 24) - 1))
def test_two_causal_vertices_satisfy_named_inequalities(idx):
    masks = vertex_masks(3, TwoCausal())
    d = mask_to_det(make_lazy_scenario(3), int(masks[idx % len(masks)]))
    for f in (i1(), i2(), i3()):
        assert f.value(d) >= f.bound
