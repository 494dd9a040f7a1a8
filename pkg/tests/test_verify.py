import json

from posmap import verify


def test_default_run_passes():
    report = verify.run()
    assert report.passed, report.failures
    names = {c.name for c in report.checks}
    assert {"golden_chain_k3", "golden_chain_k4", "finding_line_coefficient",
            "finding_mirror_indices", "conjecture_bookkeeping"} <= names
    js = report.to_json()
    json.dumps(js)
    assert js["schema_version"] == 1 and js["failures"] == []


def test_small_dimension_subset():
    report = verify.run(d_max=2, k_max=2)
    assert report.passed
    assert "golden_chain_k3" not in {c.name for c in report.checks}


def test_alt_slope_regression_control():
    report = verify.run(d_max=5, k_max=4, alt_slope=True)
    assert set(report.failures) == {"golden_chain_k3", "golden_chain_k4"}
