import json

import pytest

from orchestrator import VerificationOrchestrator, aggregate_status, certificate, save_report
from schemas import Certificate


def cert(status):
    return Certificate(check="x", status=status)


def test_aggregate_status():
    assert aggregate_status([cert("verified"), cert("verified")]) == "verified"
    assert aggregate_status([cert("verified"), cert("not_checked")]) == "not_checked"
    assert aggregate_status([cert("not_checked"), cert("refuted")]) == "refuted"
    assert aggregate_status([]) == "not_checked"
    assert aggregate_status([cert("not_checked")], ["boom: x"]) == "error"
    assert aggregate_status([cert("refuted")], ["boom: x"]) == "refuted"


def test_certificate_helper():
    assert certificate("a", True, {}).status == "verified"
    assert certificate("a", False, {"n": 1}).detail == {"n": 1}


def test_defaults_come_from_settings():
    orchestrator = VerificationOrchestrator()
    assert orchestrator.seed == 7
    assert "quartic_family" in orchestrator.check_names
    assert len(orchestrator.check_names) == 16


def test_run_selected_checks():
    orchestrator = VerificationOrchestrator(seed=3, verbose=False)
    report = orchestrator.run_all(["a2_packing_bound", "omitted_vertex_bound", "census", "dwork", "l2_table"])
    assert report.seed == 3
    assert report.status == "verified"
    assert report.success
    checks = {c.check for c in report.certificates}
    assert {"census", "dwork_twisted_cubic"} <= checks
    assert not report.errors


def test_unknown_check_is_rejected():
    with pytest.raises(ValueError):
        VerificationOrchestrator().run_all(["no_such_check"])


def test_failing_step_is_an_error_not_a_skip():
    orchestrator = VerificationOrchestrator(verbose=False)
    orchestrator.steps.append(("boom", "Failing", lambda: [][1]))
    report = orchestrator.run_all(["boom", "census"])
    assert report.status == "error"
    assert not report.success
    assert report.errors and report.errors[0].startswith("boom:")
    assert [c.check for c in report.certificates] == ["census"]
    assert all(c.status != "not_checked" for c in report.certificates)


def test_verbose_progress_goes_to_stderr(capsys):
    VerificationOrchestrator(verbose=True).run_all(["census"])
    captured = capsys.readouterr()
    assert "Step 15: Checking incidence census arithmetic..." in captured.err
    assert captured.out == ""


def test_save_report(tmp_path):
    report = VerificationOrchestrator(seed=11).run_all(["census"])
    path = save_report(report, str(tmp_path))
    assert path.endswith("verify-all-seed11.json")
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    assert data["seed"] == 11
    assert data["certificates"][0]["check"] == "census"


@pytest.mark.slow
def test_full_suite_verifies():
    report = VerificationOrchestrator(seed=7, workers=1, search_budget=9).run_all()
    failed = [c.check for c in report.certificates if c.status != "verified"]
    assert report.status == "verified", failed
