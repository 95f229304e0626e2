import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from causalpoly.scenario import (Correlation, DetCorrelation, PartySpec, Scenario, all_deterministic,
                                 count_deterministic, det_to_mask, from_parameter_vector, lazy_dimension_formula,
                                 make_lazy_scenario, mask_to_det, mixture, to_parameter_vector,
                                 uniform_correlation)


def test_lazy_dimensions():
    assert [make_lazy_scenario(n).dimension for n in (1, 2, 3, 4)] == [1, 5, 19, 65]
    for n in range(1, 7):
        assert make_lazy_scenario(n).dimension == lazy_dimension_formula(n) == 3 ** n - 2 ** n


def test_canonical_order_n2():
    s = make_lazy_scenario(2)
    assert s.inputs == ((0, 0), (0, 1), (1, 0), (1, 1))
    assert s.allowed_outputs[3] == ((0, 0), (0, 1), (1, 0), (1, 1))
    # last outcome of each block is dropped
    assert s.param_labels == (((0, 1), (0, 0)), ((1, 0), (0, 0)),
                              ((1, 1), (0, 0)), ((1, 1), (0, 1)), ((1, 1), (1, 0)))
    assert s.param_index((1, 1), (1, 1)) is None


def test_deterministic_count():
    assert count_deterministic(make_lazy_scenario(3)) == 2 ** 3 * 4 ** 3 * 8
    assert sum(1 for _ in all_deterministic(make_lazy_scenario(2))) == 16


def test_rejects_bad_tables():
    s = make_lazy_scenario(1)
    with pytest.raises(ValueError):
        Correlation(s, ((Fraction(1),), (Fraction(1, 2), Fraction(1, 3))))
    with pytest.raises(ValueError):
        Correlation(s, ((Fraction(1),), (Fraction(3, 2), Fraction(-1, 2))))
    with pytest.raises(ValueError):
        DetCorrelation(s, ((1,), (0,)))
    with pytest.raises(ValueError):
        PartySpec(())


def test_marginal():
    s = make_lazy_scenario(2)
    d = DetCorrelation.from_function(s, lambda x: (x[0] * x[1], x[1]))
    p = d.to_correlation()
    assert p.marginal([1], (1,), (0, 1)) == 1
    assert p.marginal([0], (1,), (1, 1)) == 1
    assert p.marginal([0], (1,), (1, 0)) == 0


def test_mixed_scenario_roundtrip():
    s = Scenario((PartySpec((1, 1, 1)), PartySpec((1, 2))))
    assert s.dimension == 3
    assert Scenario.from_json(json.loads(json.dumps(s.to_json()))) == s
    u = uniform_correlation(s)
    assert Correlation.from_json(json.loads(u.dumps())) == u


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.data())
def test_parameter_roundtrip(n, data):
    s = make_lazy_scenario(n)
    dets = list(all_deterministic(s))
    picks = data.draw(st.lists(st.sampled_from(dets), min_size=1, max_size=4))
    ws = data.draw(st.lists(st.integers(1, 9), min_size=len(picks), max_size=len(picks)))
    tot = sum(ws)
    p = mixture([d.to_correlation() for d in picks], [Fraction(w, tot) for w in ws])
    assert from_parameter_vector(s, to_parameter_vector(p)) == p
    assert Correlation.from_json(json.loads(p.dumps())) == p


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.data())
def test_mask_roundtrip(n, data):
    s = make_lazy_scenario(n)
    resp = tuple(data.draw(st.sampled_from(outs)) for outs in s.allowed_outputs)
    d = DetCorrelation(s, resp)
    assert mask_to_det(s, det_to_mask(d)) == d
    assert DetCorrelation.from_line(s, d.line()) == d
    assert to_parameter_vector(d) == to_parameter_vector(d.to_correlation())
