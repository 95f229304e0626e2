import itertools

from hypothesis import given, settings, strategies as st

from causalpoly.inequalities import build_family
from causalpoly.scenario import PartySpec, Scenario, all_deterministic, make_lazy_scenario, to_parameter_vector
from causalpoly.symmetry import (act_on_correlation, act_on_det, act_on_inequality, classify_orbits, group_order,
                                 identity, orbit_of, positivity_inequalities, symmetry_group)

S3 = make_lazy_scenario(3)
G3 = symmetry_group(S3)


def test_group_orders():
    assert group_order(S3) == len(G3) == 48
    assert len(symmetry_group(make_lazy_scenario(2))) == 8
    mixed = Scenario((PartySpec((1, 2)), PartySpec((2, 2))))
    assert group_order(mixed) == len(symmetry_group(mixed)) == 8
    assert G3[0].is_identity() and G3[0] == identity(S3)


def test_group_closed_under_composition():
    keys = set(G3)
    for g, h in itertools.product(G3[::5], G3[::7]):
        assert g.compose(h) in keys
        assert g.compose(g.inverse()).is_identity()


def test_orbit_sizes():
    assert len(orbit_of(build_family("i1"), S3, G3)) == 8
    assert len(orbit_of(build_family("i3"), S3, G3)) == 16
    pos = positivity_inequalities(S3)
    orbits = classify_orbits(pos, S3, G3)
    assert len(orbits) == 3
    assert all(o.trivial for o in orbits)
    assert sum(len(o.members) for o in orbits) == len(pos)


def test_named_families_are_nontrivial():
    recs = classify_orbits([build_family(k) for k in ("i1", "i2", "i3")], S3, G3)
    assert len(recs) == 3
    assert not any(r.trivial for r in recs)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 47), st.integers(0, 47), st.integers(0, 511))
def test_actions_are_consistent(gi, hi, di):
    g, h = G3[gi], G3[hi]
    d = list(all_deterministic(S3))[di % 512]
    p = d.to_correlation()
    # group action on correlations
    assert act_on_correlation(g.compose(h), p) == act_on_correlation(g, act_on_correlation(h, p))
    assert act_on_det(g, d).to_correlation() == act_on_correlation(g, p)
    # contravariance on functionals: (g.f)(g.p) = f(p)
    for name in ("i1", "i3", "lgyni:2,3"):
        f = build_family(name)
        gf = act_on_inequality(g, f, S3)
        assert gf.slack(to_parameter_vector(act_on_correlation(g, p))) == f.slack(to_parameter_vector(p))
