from __future__ import annotations

import json
import subprocess
import sys

import pytest

from bwcantor import codec
from bwcantor.cli import main
from bwcantor.errors import BUDGET_ENV_VAR


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_generate(capsys):
    code, doc, _ = run(capsys, "generate", "--seed", "affine:1,0", "--blocks", "2")
    assert code == 0
    assert [b["stage"] for b in doc["blocks"]] == ["1", "5"]
    assert codec.schedule_to_json(codec.schedule_from_json(doc)) == doc


def test_exit_codes(capsys):
    assert run(capsys, "generate", "--seed", "affine:1,0", "--blocks", "4")[0] == 3
    assert run(capsys, "generate", "--seed", "affine:0,1")[0] == 2
    assert run(capsys, "generate", "--seed", "prefix:1", "--blocks", "2")[0] == 2
    code, _, err = run(capsys, "check-cantor", "--spec", "bogus")
    assert code == 2 and json.loads(err)["error"] == "ValidationError"


def test_budget_precedence(capsys, monkeypatch):
    monkeypatch.setenv(BUDGET_ENV_VAR, "2")  # n_2 = 5 needs three bits
    assert run(capsys, "generate", "--seed", "affine:1,0", "--blocks", "2")[0] == 3
    assert run(capsys, "generate", "--seed", "affine:1,0", "--blocks", "2", "--budget-bits", "64")[0] == 0


def test_check_cantor(capsys):
    code, doc, _ = run(capsys, "check-cantor", "--spec", "cs:affine:1,0", "--stage", str(2**36 + 4))
    assert code == 0 and doc["verdict"]["kind"] == "diverges-certified"
    assert codec.series_from_json(doc["series"]).partial_sum == 2
    code, doc, _ = run(capsys, "check-cantor", "--spec", "standard:(1)")
    assert doc["verdict"]["reason"] == "series-converges"


def test_compare(capsys):
    code, doc, _ = run(capsys, "compare", "--seed-a", "affine:2,0", "--seed-b", "affine:2,1")
    assert code == 0 and doc["result"] == "certificate"
    assert codec.certificate_to_json(codec.certificate_from_json(doc)) == doc
    code, doc, _ = run(capsys, "compare", "--seed-a", "affine:1,0", "--seed-b", "affine:2,0")
    assert code == 0 and doc["result"] == "no-certificate"


def test_rigidity_and_witness_replay(capsys, tmp_path):
    code, doc, _ = run(capsys, "rigidity", "--seed", "affine:1,0", "--pair", "(0)", "(1)", "--random", "5")
    assert code == 0 and doc["ok"] and len(doc["pairs"]) == 6
    w = tmp_path / "w.json"
    w.write_text(json.dumps(doc["pairs"][0]["witness_doc"]))
    code, rep, _ = run(capsys, "verify-witness", str(w))
    assert code == 0 and rep["ok"]
    bad = doc["pairs"][0]["witness_doc"]
    bad["witness"]["larger"] = "a" if bad["witness"]["larger"] == "b" else "b"
    w.write_text(json.dumps(bad))
    assert run(capsys, "verify-witness", str(w))[0] == 4


def test_index(capsys):
    assert run(capsys, "index", "--chain", "BWB")[1]["index"] == "8"
    assert run(capsys, "index", "--stages", "2", "5")[1]["index"] == "8"
    assert run(capsys, "index")[0] == 2


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"seed": "affine:2,1", "blocks": 1}))
    code, doc, _ = run(capsys, "generate", "--config", str(cfg))
    assert code == 0 and doc["seed"] == "affine:2,1" and len(doc["blocks"]) == 1
    cfg.write_text(json.dumps({"colour": "red"}))
    assert run(capsys, "generate", "--config", str(cfg))[0] == 2


def test_mesh(capsys, tmp_path):
    obj, curves = tmp_path / "m.obj", tmp_path / "c.json"
    code, doc, _ = run(capsys, "mesh", "--spec", "zeros:1", "--depth", "1", "--params", '{"samples": 64}',
                       "--obj", str(obj), "--curves", str(curves), "--out", str(tmp_path / "r.json"))
    assert code == 0 and obj.exists() and curves.exists()
    doc = json.loads((tmp_path / "r.json").read_text())
    assert doc["report"]["passed"] and doc["tori"] == ["root", "0_bing-left", "1_bing-right"]
    assert codec.report_to_json(codec.report_from_json(doc["report"])) == doc["report"]
    code, doc, _ = run(capsys, "mesh", "--spec", "zeros:1", "--depth", "1",
                       "--params", '{"samples": 64, "clearance_fraction": 1.0}')
    assert code == 4 and not doc["report"]["passed"]
    assert run(capsys, "mesh", "--spec", "zeros:1", "--params", '{"nope": 1}')[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "bwcantor", "index", "--chain", "BW"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["index"] == "4"


def test_missing_arguments(capsys):
    with pytest.raises(SystemExit):
        main(["generate", "--blocks", "x"])
    capsys.readouterr()
    assert run(capsys, "generate")[0] == 2
