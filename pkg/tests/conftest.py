import pytest

from adtchoice.replication import standard_universe


@pytest.fixture
def U3():
    return standard_universe(3)


@pytest.fixture
def U4():
    return standard_universe(4)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        title, ok, problem = results[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {n:2d}  {title}")
        if not ok:
            terminalreporter.write_line(f"      {problem}")
    passed = sum(ok for _, ok, _ in results.values())
    terminalreporter.write_line(f"{passed}/{len(results)} criteria passed")
