import json

import pytest

from causalpoly.cli import main
from causalpoly.constructions import build_order_mixture, named_correlation


def run(tmp_path, *argv):
    man = tmp_path / "manifest.json"
    code = main(["--manifest", str(man), *argv])
    return code, json.loads(man.read_text())


def _write_corr(tmp_path, name, corr):
    path = tmp_path / f"{name}.json"
    c = corr.to_correlation() if hasattr(corr, "to_correlation") else corr
    path.write_text(c.dumps())
    return str(path)


def test_vertex_counts(tmp_path, capsys):
    code, man = run(tmp_path, "vertices", "--lazy", "3", "--class", "2causal", "--count-only")
    assert code == 0 and man["summary"]["count"] == 1520
    assert capsys.readouterr().out.strip() == "1520"
    code, man = run(tmp_path, "vertices", "--lazy", "1", "--class", "fully", "--count-only")
    assert man["summary"]["count"] == 2
    assert man["exit_code"] == 0 and man["command"] == "vertices"


def test_vertices_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.ext", tmp_path / "b.ext"
    run(tmp_path, "vertices", "--lazy", "2", "--out", str(a))
    run(tmp_path, "vertices", "--lazy", "2", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_large_needs_flag(tmp_path):
    code, man = run(tmp_path, "vertices", "--lazy", "4")
    assert code == 3 and "allow-large" in man["error"]


def test_bad_input_exit_code(tmp_path):
    code, _ = run(tmp_path, "vertices", "--lazy", "3", "--class", "m:9", "--count-only")
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _ = run(tmp_path, "membership", "--correlation", str(bad))
    assert code == 2


def test_membership(tmp_path):
    ok = _write_corr(tmp_path, "fn4", named_correlation("zero-yz-yz"))
    code, man = run(tmp_path, "membership", "--correlation", ok, "--class", "2causal")
    assert code == 0 and man["summary"]["member"]
    assert ok in man["inputs"]
    bad = _write_corr(tmp_path, "xyz", named_correlation("all-xyz"))
    cert = tmp_path / "cert.json"
    code, _ = run(tmp_path, "membership", "--correlation", bad, "--out", str(cert))
    assert code == 1 and not json.loads(cert.read_text())["member"]
    mix = _write_corr(tmp_path, "mix", build_order_mixture(3))
    code, _ = run(tmp_path, "membership", "--correlation", mix, "--class", "p:1|2,3")
    assert code == 1


def test_ineq_eval_game(tmp_path, capsys):
    path = _write_corr(tmp_path, "x", named_correlation("x-xy-yz"))
    code, man = run(tmp_path, "ineq", "eval", "--family", "i3", "--correlation", path, "--game", "i3")
    assert code == 0 and man["summary"]["game"] == "7/8"


def test_ineq_bound_and_facet(tmp_path):
    code, man = run(tmp_path, "ineq", "bound", "--family", "j2:3", "--class", "2causal")
    assert code == 0 and man["summary"]["min"] == "-1"
    code, man = run(tmp_path, "ineq", "check-facet", "--family", "i1")
    assert code == 0 and man["summary"]["facet"]
    code, _ = run(tmp_path, "ineq", "check-facet", "--family", "j1:4")
    assert code == 3


def test_facets_and_classify(tmp_path):
    h = tmp_path / "two.h"
    code, man = run(tmp_path, "facets", "--lazy", "2", "--out", str(h))
    assert code == 0 and man["summary"]["dimension"] == 5
    n = man["summary"]["facets"]
    fam = tmp_path / "fam.txt"
    code, man = run(tmp_path, "classify", "--lazy", "2", "--facets", str(h), "--out", str(fam))
    assert code == 0 and man["summary"]["inequalities"] == n
    assert man["summary"]["trivial"] >= 1
    code, _ = run(tmp_path, "facets", "--lazy", "2", "--max-rays", "2")
    assert code == 3


def test_construct_roundtrip(tmp_path):
    out = tmp_path / "ps.json"
    code, _ = run(tmp_path, "construct", "p-sigma", "--partition", "1|2,3", "--order", "2,1", "--out", str(out))
    assert code == 0
    code, man = run(tmp_path, "membership", "--correlation", str(out), "--class", "p:1|2,3")
    assert code == 0
    code, _ = run(tmp_path, "construct", "size-saturator", "--n", "3", "--s", "9")
    assert code == 2


@pytest.mark.parametrize("target", ["dynamical-order", "pairwise-bounds"])
def test_verify(tmp_path, target):
    code, man = run(tmp_path, "verify", target)
    assert code == 0 and man["summary"]["passed"]


def test_verify_unknown(tmp_path):
    code, _ = run(tmp_path, "verify", "nope")
    assert code == 2


def test_env_budget(tmp_path, monkeypatch):
    monkeypatch.setenv("CAUSALPOLY_MAX_RAYS", "2")
    code, man = run(tmp_path, "facets", "--lazy", "2")
    assert code == 3 and man["budgets"]["max_rays"] == 2
