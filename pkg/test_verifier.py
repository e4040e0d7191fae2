#!/usr/bin/env python3
"""Tests for the theorem suites and the Verifier."""
import logging
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from src.config_validator import load_settings
from src.errors import PreconditionError, ScopeTooLargeError
from src.scalar import ModelConfig
from src.schemas import CHECK_IDS
from src.verifier import REGISTRY, Check, Verifier

GF5 = ModelConfig.parse("gf:5")
GF7 = ModelConfig.parse("gf:7")
RATIONAL = ModelConfig.parse("rational")
QUATERNION = ModelConfig.parse("quaternion")


@pytest.fixture(scope="module")
def verifier():
    return Verifier(load_settings())


def test_registry_covers_every_id():
    for check_id in CHECK_IDS:
        assert check_id in REGISTRY or check_id in ("axioms", "desargues")
    assert len(REGISTRY["pres2.dil"]) == 3


def test_sampled_suites_pass_in_each_model(verifier):
    checks = ["inv2.inversion", "inv3.mobius", "rel.2to3", "pres2.trans", "pres3.dil", "pres2.pproj"]
    for model in (GF7, RATIONAL, QUATERNION):
        report = verifier.run(model, checks, trials=15, seed=11)
        assert report.ok, [(r.id, r.case, r.counterexamples) for r in report.failed]
    print("✓ PASS: invariance and preservation suites hold in gf(7), Q and H")


def test_exhaustive_gf5(verifier):
    checks = ["inv2.natdil", "inv3.nattrans", "field.oracle", "field.axioms", "ratio2.identities", "axioms"]
    report = verifier.run(GF5, checks, trials=1, seed=0, exhaustive=True)
    assert report.ok, [(r.id, r.case) for r in report.failed]
    oracle = [r for r in report.results if r.id == "field.oracle"]
    assert all(r.mode == "exhaustive" and r.trials == 25 for r in oracle)


def test_quaternion_suites(verifier):
    report = verifier.run(QUATERNION, ["field.axioms", "ratio3.identities", "witness.pappian",
                                       "witness.noncommutative"], trials=20, seed=5)
    assert report.ok, [(r.id, r.case) for r in report.failed]
    pappian = next(r for r in report.results if r.id == "witness.pappian")
    # a negative expectation: the commutative-only identity must break
    assert pappian.expect_failure and pappian.failures > 0
    assert any(r.case == "units" for r in report.results)


def test_negative_controls_in_gf7(verifier):
    report = verifier.run(GF7, ["control.inv2.nattrans", "control.printed", "witness.pappian"],
                          trials=1, seed=0, exhaustive=True)
    assert report.ok
    controls = [r for r in report.results if r.id.startswith("control.")]
    assert len(controls) == 3
    assert all(r.expect_failure and r.failures > 0 and r.counterexamples for r in controls)
    assert all(len(r.counterexamples) <= 5 for r in controls)
    pappian = next(r for r in report.results if r.id == "witness.pappian")
    assert not pappian.expect_failure and pappian.failures == 0


def test_plane_map_suites(verifier):
    report = verifier.run(RATIONAL, ["maps.defining", "maps.morphism", "maps.compose", "desargues"],
                          trials=10, seed=3)
    assert report.ok, [(r.id, r.case) for r in report.failed]


def test_runs_are_deterministic(verifier):
    first = verifier.run(QUATERNION, ["inv3.inversion", "aux.independence"], trials=8, seed=42)
    second = verifier.run(QUATERNION, ["inv3.inversion", "aux.independence"], trials=8, seed=42)
    strip = lambda report: [r.model_dump(exclude={"seconds"}) for r in report.results]
    assert strip(first) == strip(second)


def test_scope_and_unknown_ids(verifier):
    with pytest.raises(ScopeTooLargeError):
        verifier.run(RATIONAL, ["field.oracle"], trials=1, seed=0, exhaustive=True)
    with pytest.raises(ScopeTooLargeError):
        verifier.run(ModelConfig.parse("gf:17"), ["field.oracle"], trials=1, seed=0, exhaustive=True)
    with pytest.raises(ValueError):
        verifier.run(GF7, ["no.such.theorem"], trials=1, seed=0)


INVARIANCE_IDS = ["inv2.natdil", "inv2.inversion", "inv2.mobius", "inv3.nattrans",
                  "inv3.natdil", "inv3.inversion", "inv3.mobius", "rel.2to3"]
PRESERVATION_CASES = {
    ("pres2.trans", "default"), ("pres3.trans", "default"),
    ("pres2.dil", "center-origin"), ("pres2.dil", "center-on-line"), ("pres2.dil", "center-off-line"),
    ("pres3.dil", "center-origin"), ("pres3.dil", "center-on-line"), ("pres3.dil", "center-off-line"),
    ("pres2.pproj", "intersecting"), ("pres2.pproj", "parallel"),
    ("pres3.pproj", "intersecting"), ("pres3.pproj", "parallel"),
}


def test_invariance_ids_exhaustive_gf5(verifier):
    report = verifier.run(GF5, INVARIANCE_IDS, trials=1, seed=0, exhaustive=True)
    assert [r.id for r in report.results] == INVARIANCE_IDS
    assert report.ok, [(r.id, r.counterexamples) for r in report.failed]
    assert all(r.mode == "exhaustive" and r.trials > 0 for r in report.results)
    # A:pt B:nz n:n over gf(5): 5 * 4 * 4 tuples
    assert report.results[0].trials == 80
    print("✓ PASS: every invariance and relation id holds on all gf(5) tuples")


def test_every_preservation_case(verifier):
    pres = ["pres2.trans", "pres2.dil", "pres2.pproj", "pres3.trans", "pres3.dil", "pres3.pproj"]
    for model in (GF7, RATIONAL, QUATERNION):
        report = verifier.run(model, pres, trials=12, seed=29)
        assert {(r.id, r.case) for r in report.results} == PRESERVATION_CASES
        assert report.ok, [(r.id, r.case, r.counterexamples) for r in report.failed]
        assert all(r.trials > 0 for r in report.results), model.label


def test_controls_fire_with_a_single_trial(verifier):
    checks = ["control.inv2.nattrans", "control.printed", "witness.pappian", "witness.noncommutative"]
    for model in (GF5, GF7, RATIONAL, QUATERNION):
        for seed in (0, 1, 2):
            report = verifier.run(model, checks, trials=1, seed=seed)
            assert report.ok, (model.label, seed, [(r.id, r.case) for r in report.failed])
    report = verifier.run(GF7, ["control.printed"], trials=1, seed=0)
    product, criterion = report.results
    assert product.counterexamples[0] == {"chart": "O=(0, 0) I=(1, 0)", "A": "(1, 0)", "B": "(1, 0)", "C": "(2, 0)"}
    assert criterion.counterexamples[0]["B"] == "(6, 0)"


def test_witnesses_stay_out_of_commutative_runs(verifier):
    # quaternion units are not scalars of gf(p); the case falls back to its trials
    report = verifier.run(GF7, ["witness.noncommutative"], trials=3, seed=0)
    commutes = next(r for r in report.results if r.case == "commutes")
    assert not commutes.expect_failure and commutes.trials == 3 and commutes.passed


def raises_precondition(ctx, sample):
    raise PreconditionError("r(A:B) is undefined for B = O")


def test_all_skipped_case_fails(verifier, caplog):
    starved = Check("inv2.natdil", "starved", (("A", "pt"),), raises_precondition)
    with caplog.at_level(logging.WARNING, logger="src.verifier"):
        result = verifier.run_check(starved, GF7, trials=6, seed=0)
    assert result.skipped == 6 and result.trials == 0
    assert result.vacuous and not result.passed
    assert "none evaluated" in caplog.text
    control = Check("control.printed", "starved", (("A", "pt"),), raises_precondition,
                    expect_failure=lambda model: True)
    assert not verifier.run_check(control, GF7, trials=6, seed=0).passed


def test_worker_processes_give_the_same_report():
    settings = load_settings()
    serial = Verifier({**settings, "verification": {**settings["verification"], "workers": 1}})
    pooled = Verifier({**settings, "verification": {**settings["verification"], "workers": 2}})
    checks = ["inv2.mobius", "control.printed", "pres3.pproj"]
    strip = lambda report: [r.model_dump(exclude={"seconds"}) for r in report.results]
    first = serial.run(RATIONAL, checks, trials=60, seed=13)
    second = pooled.run(RATIONAL, checks, trials=60, seed=13)
    assert strip(first) == strip(second)
    assert all(r.trials + r.skipped >= 60 for r in second.results)


def test_invariance_ids_within_time_budget(verifier):
    started = time.perf_counter()
    for model in (GF7, RATIONAL, QUATERNION):
        report = verifier.run(model, INVARIANCE_IDS, trials=100, seed=7)
        assert report.ok, [(r.id, r.case) for r in report.failed]
    elapsed = time.perf_counter() - started
    # a tenth of the full 1000-trial acceptance run, held to the full run's minute
    assert elapsed < 60, f"{elapsed:.1f}s"
    print(f"✓ PASS: eight ids x three models x 100 trials in {elapsed:.1f}s")


if __name__ == "__main__":
    v = Verifier(load_settings())
    test_sampled_suites_pass_in_each_model(v)
    test_negative_controls_in_gf7(v)
