#!/usr/bin/env python3
"""End-to-end tests for main.py: exit codes, outputs and seed precedence."""
import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from main import SEED_ENV, main, resolve_seed
from src.config_validator import load_settings
from src.errors import MalformedConfigError

SCRIPTS_DIR = Path(__file__).parent / "data" / "scripts"


def test_run_corpus_exit_codes(capsys):
    expected = json.loads((SCRIPTS_DIR / "expected.json").read_text(encoding="utf-8"))
    for name, code in sorted(expected.items()):
        assert main(["run", str(SCRIPTS_DIR / name)]) == code, name
    err = capsys.readouterr().err
    assert "model header required" in err
    print("✓ PASS: run exit codes match the corpus")


def test_run_writes_artifacts(tmp_path):
    assert main(["run", str(SCRIPTS_DIR / "add_sample.dsl"), "--out", str(tmp_path)]) == 0
    assert (tmp_path / "fig-add.svg").read_text(encoding="utf-8").count("<svg") == 1
    trace = json.loads((tmp_path / "fig-add.trace.json").read_text(encoding="utf-8"))
    assert trace["steps"][-1]["label"] == "C"
    summary = json.loads((tmp_path / "run_report.json").read_text(encoding="utf-8"))
    assert summary["passed"] is True and "artifacts" not in summary


def test_run_missing_script(tmp_path):
    assert main(["run", str(tmp_path / "nope.dsl")]) == 2


def test_run_rejects_escaping_emit_names(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", str(SCRIPTS_DIR / "escaping_emit.dsl"), "--out", str(out)]) == 2
    assert "[invalid-name]" in capsys.readouterr().err
    assert list(tmp_path.iterdir()) == []


def test_verify_prints_control_counterexample(capsys):
    argv = ["verify", "--model", "gf:7", "--check", "control.printed", "--trials", "1", "--workers", "1"]
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert "Expected counterexamples:" in out
    assert "first: A=(1, 0), B=(1, 0), C=(2, 0)" in out
    assert "first: A=(1, 0), B=(6, 0)" in out
    assert main(["verify", "--check", "field.oracle", "--workers", "-1"]) == 2


def test_verify_exit_codes(tmp_path):
    out = tmp_path / "report.json"
    assert main(["verify", "--model", "gf:5", "--check", "field.oracle", "--exhaustive", "--out", str(out)]) == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["ok"] is True and data["model"] == "gf(5)"
    assert {r["case"] for r in data["results"]} == {"add", "mul"}
    assert main(["verify", "--check", "bogus"]) == 2
    assert main(["verify", "--model", "gf:9"]) == 2
    assert main(["verify", "--model", "rational", "--check", "field.oracle", "--exhaustive"]) == 2
    assert main(["verify", "--trials", "0"]) == 2


def test_verify_checks_split_on_commas(tmp_path):
    out = tmp_path / "report.json"
    argv = ["verify", "--model", "rational", "--trials", "5", "--seed", "1",
            "--check", "inv2.inversion,rel.2to3", "--check", "pres2.trans", "--out", str(out)]
    assert main(argv) == 0
    ids = [r["id"] for r in json.loads(out.read_text(encoding="utf-8"))["results"]]
    assert ids == ["inv2.inversion", "rel.2to3", "pres2.trans"]


def test_enumerate(capsys):
    assert main(["enumerate", "5"]) == 0
    assert "points: 25" in capsys.readouterr().out
    assert main(["enumerate", "4"]) == 2
    assert main(["enumerate", "17"]) == 2


def test_figure(tmp_path, capsys):
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"
    assert main(["figure", "add", "a=3", "b=5", "--out", str(first)]) == 0
    assert main(["figure", "add", "a=3", "b=5", "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    capsys.readouterr()
    assert main(["figure", "mul", "a=i", "b=j", "--model", "quaternion"]) == 0
    assert capsys.readouterr().out.lstrip().startswith("<?xml")
    assert main(["figure", "ratio3", "a=1", "b=2", "c=2"]) == 2
    assert main(["figure", "add", "a3"]) == 2
    assert main(["figure", "add", "a=1"]) == 2


def test_bad_settings_file(tmp_path):
    broken = tmp_path / "settings.json"
    broken.write_text("{not json", encoding="utf-8")
    assert main(["--settings", str(broken), "enumerate", "3"]) == 2


def test_seed_precedence(monkeypatch):
    settings = load_settings()
    monkeypatch.delenv(SEED_ENV, raising=False)
    assert resolve_seed(None, settings) == settings["verification"]["seed"]
    monkeypatch.setenv(SEED_ENV, "77")
    assert resolve_seed(None, settings) == 77
    assert resolve_seed(5, settings) == 5
    monkeypatch.setenv(SEED_ENV, "seven")
    with pytest.raises(MalformedConfigError):
        resolve_seed(None, settings)
    assert main(["verify", "--check", "rel.2to3", "--trials", "2"]) == 2


if __name__ == "__main__":
    sys.exit(main(["run", str(SCRIPTS_DIR / "add_sample.dsl")]))
