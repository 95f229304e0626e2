import pytest

from causalpoly.verify import (TARGETS, coarse_graining_witnesses, dynamical_order, noninclusion_witnesses,
                               pairwise_bounds, partition_separation, run_target, size_number_relation)


def test_partition_separation():
    for n in (3, 4):
        rep = partition_separation(n)
        assert rep.passed, rep.text()
    assert partition_separation(4).checked == 14 * 13


def test_inclusions():
    assert size_number_relation(8).passed
    for n in (4, 5):
        assert noninclusion_witnesses(n).passed


def test_coarse_graining_and_dynamical():
    assert coarse_graining_witnesses(4).passed
    rep = dynamical_order()
    assert rep.passed and rep.checked == 7


def test_pairwise_bounds():
    rep = pairwise_bounds(8, saturate_max=6)
    assert rep.passed, rep.text()


def test_report_json():
    rep = run_target("dynamical-order")[0]
    js = rep.to_json()
    assert js["passed"] and js["counterexample"] is None
    assert set(TARGETS) == {"partition-separation", "inclusions", "pairwise-bounds", "dynamical-order",
                            "coarse-graining"}
    with pytest.raises(ValueError):
        run_target("nope")
