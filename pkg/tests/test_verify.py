"""The randomized verification suite itself: determinism, thresholds, threading."""

import pytest

from cval_lab import ConfigError, XiModel
from cval_lab.verify import (
    ALL_CHECKS,
    BOUND_CHECKS,
    ERROR_CHECKS,
    run_identity_suite,
    worker_count,
    xi_model_from_kind,
)


def test_suite_passes_and_covers_every_check():
    report = run_identity_suite(seed=1, dims=(2, 4), trials=2)
    assert report.passed
    assert {r.name for r in report.records} == set(ALL_CHECKS)
    for rec in report.records:
        assert rec.instances == 4
        assert rec.passed
        if rec.name in ERROR_CHECKS:
            assert rec.min_slack is None
            assert rec.max_abs_error <= rec.threshold
        else:
            assert rec.min_slack is not None
            assert rec.min_slack >= -rec.threshold
    lines = report.summary_lines()
    assert len(lines) == len(ALL_CHECKS) + 1
    assert lines[-1] == "overall: pass"


def test_suite_is_deterministic_across_worker_counts():
    serial = run_identity_suite(seed=9, dims=(2, 3), trials=3, threads=1)
    threaded = run_identity_suite(seed=9, dims=(2, 3), trials=3, threads=4)
    strip = lambda rep: [r.as_dict() for r in rep.records]
    assert strip(serial) == strip(threaded)


def test_suite_seed_changes_the_numbers():
    a = run_identity_suite(seed=1, dims=(3,), trials=2)
    b = run_identity_suite(seed=2, dims=(3,), trials=2)
    val = lambda rep, name: [r.max_abs_error for r in rep.records if r.name == name][0]
    assert val(a, "expectation_real") != val(b, "expectation_real")


def test_suite_works_for_other_xi_kinds():
    for kind in ("uniform", "gaussian"):
        report = run_identity_suite(seed=3, dims=(2,), trials=2, xi_kind=kind)
        assert report.passed


def test_corrupt_hook_flips_exactly_one_check():
    report = run_identity_suite(seed=1, dims=(2,), trials=1,
                                corrupt_identity="commutator_representation")
    assert not report.passed
    failed = [r.name for r in report.records if not r.passed]
    assert failed == ["commutator_representation"]
    report = run_identity_suite(seed=1, dims=(2,), trials=1,
                                corrupt_identity="estimation_tradeoff")
    failed = [r.name for r in report.records if not r.passed]
    assert failed == ["estimation_tradeoff"]


def test_suite_input_validation():
    with pytest.raises(ConfigError):
        run_identity_suite(seed=1, dims=(1,), trials=1)
    with pytest.raises(ConfigError):
        run_identity_suite(seed=1, dims=(2, 65), trials=1)
    with pytest.raises(ConfigError):
        run_identity_suite(seed=1, dims=(2,), trials=0)
    with pytest.raises(ConfigError):
        run_identity_suite(seed=1, dims=(2,), trials=1, corrupt_identity="nope")
    with pytest.raises(ConfigError):
        run_identity_suite(seed=1, dims=(2,), trials=1, xi_kind="cauchy")


def test_worker_count_env(monkeypatch):
    monkeypatch.delenv("CVAL_LAB_THREADS", raising=False)
    assert worker_count() == 1
    monkeypatch.setenv("CVAL_LAB_THREADS", "6")
    assert worker_count() == 6
    monkeypatch.setenv("CVAL_LAB_THREADS", "0")
    assert worker_count() == 1
    monkeypatch.setenv("CVAL_LAB_THREADS", "many")
    with pytest.raises(ConfigError):
        worker_count()


def test_xi_model_factory():
    model = xi_model_from_kind("uniform", hbar=2.0)
    assert isinstance(model, XiModel)
    assert model.kind == "uniform" and model.hbar == 2.0
    with pytest.raises(ConfigError):
        xi_model_from_kind("triangular", hbar=1.0)


def test_report_dict_shape():
    report = run_identity_suite(seed=4, dims=(2,), trials=1)
    doc = report.as_dict()
    assert set(doc) == {"config", "checks", "passed", "runtime_s"}
    assert set(report.as_dict(include_runtime=False)) == {"config", "checks", "passed"}
    names = [c["name"] for c in doc["checks"]]
    assert names == list(ERROR_CHECKS) + list(BOUND_CHECKS)
