#!/usr/bin/env python3
"""Tests for text reports, the per-id summary and written artifacts."""
import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from src.dsl import parse
from src.enumeration import enumerate_plane
from src.errors import InvalidNameError
from src.interpreter import evaluate
from src.reporter import Reporter
from src.schemas import TheoremResult, VerificationReport

SCRIPTS_DIR = Path(__file__).parent / "data" / "scripts"


def sample_report():
    return VerificationReport(model="gf(7)", seed=1, trials=10, results=[
        TheoremResult(id="field.oracle", case="add", model="gf(7)", trials=10),
        TheoremResult(id="field.oracle", case="mul", model="gf(7)", trials=10),
        TheoremResult(id="inv2.inversion", model="gf(7)", trials=10, failures=2,
                      counterexamples=[{"A": "(3, 0)", "B": "(2, 0)"}]),
        TheoremResult(id="control.printed", case="equality-criterion", model="gf(7)", trials=10,
                      expect_failure=True),
    ])


def test_summary_groups_cases():
    summary = Reporter().summarize(sample_report())
    assert list(summary.columns) == ["id", "cases", "trials", "failures", "skipped", "passed"]
    assert list(summary["id"]) == ["field.oracle", "inv2.inversion", "control.printed"]
    oracle = summary.iloc[0]
    assert oracle["cases"] == 2 and oracle["trials"] == 20 and bool(oracle["passed"])
    assert not bool(summary.iloc[2]["passed"])


def test_empty_summary():
    summary = Reporter().summarize(VerificationReport(model="rational", seed=0, trials=1))
    assert summary.empty


def test_verification_text():
    text = Reporter().render_verification(sample_report())
    assert "✓ field.oracle" in text
    assert "✗ inv2.inversion" in text
    assert "A=(3, 0), B=(2, 0)" in text
    assert "negative control found no counterexample in 10 trial(s)" in text
    assert text.rstrip().endswith("FAILED (2)")
    print("✓ PASS: verification report lists failures")


def test_enumeration_text():
    text = Reporter().render_enumeration(enumerate_plane(3))
    assert "points: 9 (expected 9)" in text
    assert " 2 |  2  0  1" in text
    assert text.rstrip().endswith("OK")


def test_run_text_and_artifacts(tmp_path):
    source = (SCRIPTS_DIR / "failing_assert.dsl").read_text(encoding="utf-8")
    report = evaluate(parse(source))
    text = Reporter().render_run(report, "failing_assert.dsl")
    assert "✗ 8:1 assert eq(C, point(2, 0))" in text
    assert "C = (1, 0)" in text
    assert text.rstrip().endswith("FAILED")
    written = Reporter().write_artifacts(report, tmp_path / "out")
    assert [p.name for p in written] == ["run_report.json"]
    assert json.loads(written[0].read_text(encoding="utf-8"))["passed"] is False


def test_write_json(tmp_path):
    path = Reporter().write_json(sample_report(), tmp_path / "nested" / "report.json")
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["ok"] is False and len(data["results"]) == 4


def test_found_control_counterexample_is_printed():
    certificate = {"chart": "O=(0, 0) I=(1, 0)", "A": "(1, 0)", "B": "(1, 0)", "C": "(2, 0)"}
    report = VerificationReport(model="gf(7)", seed=1, trials=1, results=[
        TheoremResult(id="control.printed", case="denominator-product", model="gf(7)", trials=2,
                      failures=2, expect_failure=True, counterexamples=[certificate, {"A": "(3, 0)"}]),
    ])
    text = Reporter().render_verification(report)
    assert "Expected counterexamples:" in text
    assert "✓ control.printed [denominator-product] 2 of 2 trial(s) broke it" in text
    assert "first: A=(1, 0), B=(1, 0), C=(2, 0), chart=O=(0, 0) I=(1, 0)" in text
    assert "A=(3, 0)" not in text
    assert "Failures:" not in text and text.rstrip().endswith("OK")


def test_vacuous_case_is_explained():
    report = VerificationReport(model="gf(7)", seed=1, trials=4, results=[
        TheoremResult(id="inv2.inversion", model="gf(7)", skipped=4, vacuous=True),
    ])
    text = Reporter().render_verification(report)
    assert "every one of 4 trial(s) hit a precondition error" in text
    assert text.rstrip().endswith("FAILED (1)")


def test_artifact_names_stay_inside_out_dir(tmp_path):
    report = evaluate(parse((SCRIPTS_DIR / "add_sample.dsl").read_text(encoding="utf-8")))
    for name in ("../escaped", "sub/fig", ""):
        report.artifacts[0].name = name
        with pytest.raises(InvalidNameError):
            Reporter().write_artifacts(report, tmp_path / "out")
    assert list(tmp_path.iterdir()) == []
    report.artifacts[0].name = "fig.v2"
    written = Reporter().write_artifacts(report, tmp_path / "out")
    assert [p.name for p in written] == ["fig.v2.svg", "fig.v2.trace.json", "run_report.json"]


if __name__ == "__main__":
    test_verification_text()
    test_enumeration_text()
