import json

import pytest

from adtchoice.replication import CASES, MANIFEST, run_case, run_replication_suite, select_cases, uncovered_anchors

# larger sub-problem bias: at every N its TIIA witnesses shrink a sub-problem
# into the maximizing base case, so "TIIA holds, alphaE fails" is not observed
KNOWN_DISCREPANCIES = {"prop-ind-implies-alpha-v"}


def _param(case):
    marks = [pytest.mark.xfail(strict=True, reason="see decisions ledger")] if case.id in KNOWN_DISCREPANCIES else []
    return pytest.param(case, id=case.id, marks=marks)


@pytest.mark.parametrize("case", [_param(c) for c in CASES])
def test_case(case):
    result = run_case(case)
    assert result.error is None, result.error
    assert result.passed, json.dumps(result.to_json(), indent=1, default=str)


def test_every_anchor_covered():
    assert uncovered_anchors() == []
    assert {c.anchor for c in CASES} <= set(MANIFEST)


def test_case_ids_unique():
    ids = [c.id for c in CASES]
    assert len(ids) == len(set(ids))


def test_provenance_tags():
    assert {c.provenance for c in CASES} <= {"PAPER", "DERIVED", "TRIVIAL"}


def test_select_by_glob_and_substring():
    assert {c.id for c in select_cases("example-*")} == {c.id for c in CASES if c.id.startswith("example-")}
    assert {c.id for c in select_cases("wine")} == {c.id for c in CASES if "wine" in c.id}
    assert select_cases("no-such-case") == []


def test_filtered_report_serializes():
    report = run_replication_suite("extension-example")
    assert report.passed
    doc = report.to_json()
    json.dumps(doc)
    assert doc["summary"] == {"total": 1, "failed": 0}
