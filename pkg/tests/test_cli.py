import csv
import json

import pytest

from dehnlab.cli import Config, UsageError, load_config, run


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_solve(capsys):
    assert run(["solve", "--presentation", "lysenok", "--word", "bcd"]) == 0
    assert _json(capsys)["trivial"] is True
    assert run(["solve", "--word", "ab"]) == 1
    assert _json(capsys)["trivial"] is False
    assert run(["solve", "--presentation", "gamma_t", "--word", "tbTD"]) == 0
    assert run(["solve", "--presentation", "gamma1", "--word", "acacacacacacacac"]) == 1


def test_decompose_verify_diagram(tmp_path, capsys):
    cert = tmp_path / "c.json"
    assert run(["decompose", "--word", "acacacacacacacac", "--target", "r", "--out", str(cert)]) == 0
    capsys.readouterr()
    assert run(["verify", "--cert", str(cert)]) == 0
    assert _json(capsys)["valid"] is True
    assert run(["diagram", "--cert", str(cert), "--fold", "--stats"]) == 0
    out = _json(capsys)
    assert out["v"] - out["e"] + out["f"] == 1
    assert set(out) == {"v", "e", "f", "boundary", "one_regular"}


def test_tampered_certificate(tmp_path, capsys):
    cert = tmp_path / "c.json"
    run(["decompose", "--word", "bcd", "--out", str(cert)])
    data = json.loads(cert.read_text())
    data["factors"][0]["sign"] = -data["factors"][0]["sign"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    capsys.readouterr()
    assert run(["verify", "--cert", str(bad)]) == 1
    data["factors"][0]["relator"] = "ab"
    bad.write_text(json.dumps(data))
    assert run(["verify", "--cert", str(bad)]) == 1


def test_decompose_nontrivial(capsys):
    assert run(["decompose", "--word", "ab"]) == 1
    assert run(["decompose", "--presentation", "ex23", "--word", "bbbbb"]) == 0


def test_sweep_csv(tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert run(["sweep", "--presentation", "ex21", "--max-len", "8", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert [r["x"] for r in rows] == [str(x) for x in range(1, 9)]
    assert {"x", "f2_exact", "f1_upper", "f0_upper", "flags"} <= set(rows[0])
    assert rows[-1]["f2_exact"] == "3"
    assert "seed=" in capsys.readouterr().err


def test_relators_and_audit(capsys):
    assert run(["relators", "--presentation", "gamma2", "--max-len", "40"]) == 0
    assert len(_json(capsys)) == 8
    assert run(["audit", "--series", "relators", "--max-x", "48"]) == 0
    rep = _json(capsys)
    assert rep["all_verified"] and rep["seed"] == 20240601
    assert run(["--seed", "7", "audit", "--series", "gamma_t", "--max-x", "10", "--samples", "20"]) == 0
    assert _json(capsys)["seed"] == 7


def test_errors(capsys):
    assert run(["solve", "--presentation", "nope", "--word", "a"]) == 2
    assert run(["solve", "--word", "xyz"]) == 2
    assert run(["bogus"]) == 2
    assert run(["verify", "--cert", "/nonexistent.json"]) == 2


def test_config(tmp_path, monkeypatch):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"max_factors": 3, "seed": 5}))
    monkeypatch.setenv("DEHNLAB_THREADS", "2")
    cfg = load_config(str(path))
    assert cfg == Config(max_factors=3, seed=5, threads=2)
    path.write_text(json.dumps({"budget": 0}))
    with pytest.raises(UsageError):
        load_config(str(path))
    path.write_text(json.dumps({"colour": 1}))
    with pytest.raises(UsageError):
        load_config(str(path))


def test_threads_give_same_rows(tmp_path, monkeypatch):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["sweep", "--presentation", "ex23", "--max-len", "4", "--out", str(a)]) == 0
    monkeypatch.setenv("DEHNLAB_THREADS", "2")
    assert run(["sweep", "--presentation", "ex23", "--max-len", "4", "--out", str(b)]) == 0
    assert a.read_text() == b.read_text()
