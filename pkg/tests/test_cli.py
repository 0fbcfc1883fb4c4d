import json

import pytest

from slimcon.cli import run
from slimcon.order import Poset, crown


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def fd3(tmp_path):
    path = tmp_path / "fd3.json"
    assert run(["build", "fd3", "--out", str(path)]) == 0
    return path


def test_build_crown(tmp_path):
    out = tmp_path / "k8.json"
    assert run(["build", "crown", "--n", "8", "--out", str(out)]) == 0
    p = Poset.from_json(json.loads(out.read_text()))
    assert p.up == crown(8).up


@pytest.mark.parametrize("kind", ["circle", "fence", "chain", "grid", "zn", "ln"])
def test_build_kinds(capsys, kind):
    code, out, _ = call(capsys, "build", kind, "--n", "4")
    assert code == 0 and json.loads(out)["size"] > 0


def test_build_downset(capsys, tmp_path):
    src = tmp_path / "k3.json"
    src.write_text(crown(3).dumps())
    code, out, _ = call(capsys, "build", "downset", "--in", str(src))
    assert code == 0 and json.loads(out)["size"] == 18


def test_check_dcep_negative_and_recheck(capsys, fd3, tmp_path):
    report = tmp_path / "r.json"
    assert run(["check", "dcep", "--in", str(fd3), "--out", str(report)]) == 1
    assert json.loads(report.read_text())["verdict"] is False
    code, out, _ = call(capsys, "check", "dcep", "--in", str(fd3), "--recheck-witness", str(report))
    assert code == 0 and json.loads(out)["witness_accepted"] is True


@pytest.mark.parametrize("prop", ["two-cover", "bmep", "cyclic", "multicyclic", "slim", "semimodular", "distributive"])
def test_negative_checks_recheck(capsys, fd3, tmp_path, prop):
    code, out, _ = call(capsys, "check", prop, "--in", str(fd3))
    assert code in (0, 1)
    report = tmp_path / "r.json"
    report.write_text(out)
    code2, out2, _ = call(capsys, "check", prop, "--in", str(fd3), "--recheck-witness", str(report))
    assert code2 == 0, out2


def test_recheck_rejects_wrong_property(capsys, fd3, tmp_path):
    report = tmp_path / "r.json"
    run(["check", "bmep", "--in", str(fd3), "--out", str(report)])
    code, _, err = call(capsys, "check", "dcep", "--in", str(fd3), "--recheck-witness", str(report))
    assert code == 2 and "not 'dcep'" in err


def test_check_bipartite(capsys, tmp_path):
    g = tmp_path / "c5.json"
    run(["build", "circle", "--n", "5", "--out", str(g)])
    code, out, _ = call(capsys, "check", "bipartite", "--in", str(g))
    assert code == 1 and len(json.loads(out)["witness"]["odd_cycle"]) == 5


def test_eval(capsys, tmp_path):
    k = tmp_path / "k5.json"
    run(["build", "crown", "--n", "5", "--out", str(k)])
    assert call(capsys, "eval", "--builtin", "delta1", "--in", str(k))[0] == 0
    assert call(capsys, "eval", "--builtin", "xi:5", "--in", str(k))[0] == 1
    code, out, _ = call(capsys, "eval", "--formula", "x <= y", "--assign", "x=5,y=0", "--in", str(k))
    assert code == 0 and json.loads(out)["value"] is True
    assert call(capsys, "eval", "--builtin", "lambda:-1", "--in", str(k))[0] == 1


def test_con_and_ln(capsys, tmp_path):
    path = tmp_path / "l4.json"
    assert run(["ln", "--n", "4", "--out", str(path)]) == 0
    code, out, _ = call(capsys, "con", "--in", str(path), "--jir")
    assert code == 0 and json.loads(out)["size"] == 8
    code, out, _ = call(capsys, "con", "--in", str(path))
    assert code == 0 and "blocks" in json.loads(out)
    code, out, _ = call(capsys, "ln", "--n", "4", "--dot")
    assert out.startswith("digraph")


def test_export_dot(capsys, fd3):
    code, out, _ = call(capsys, "export", "--dot", "--in", str(fd3))
    assert code == 0 and out.startswith("digraph")


def test_verify(capsys, tmp_path):
    out_file = tmp_path / "run.json"
    code, out, _ = call(capsys, "verify", "theorem-b", "--max-poset", "4", "--out", str(out_file))
    assert code == 0 and out.startswith("theorem-B: pass")
    first = out_file.read_text()
    run(["verify", "theorem-b", "--max-poset", "4", "--out", str(out_file)])
    assert out_file.read_text() == first
    code, out, _ = call(capsys, "verify", "remark-18", "--max-poset", "5")
    assert code == 1 and "fail" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["build", "crown"],
        ["build", "crown", "--n", "1"],
        ["check", "dcep", "--in", "/nonexistent.json"],
        ["eval", "--in", "x.json"],
        ["verify", "theorem-b", "--workers", "0"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == 2 and err


def test_malformed_json(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = call(capsys, "check", "bmep", "--in", str(bad))
    assert code == 2 and "malformed JSON" in err
    poset = tmp_path / "k3.json"
    poset.write_text(crown(3).dumps())
    code, _, err = call(capsys, "check", "dcep", "--in", str(poset))
    assert code == 2 and "not a lattice" in err
