import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "fixed", derandomize=True, max_examples=100, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("fixed")

DATA = Path(__file__).parent / "data"
_results: dict = {}


@pytest.fixture
def gamma43_path():
    return str(DATA / "gamma43.json")


@pytest.fixture(autouse=True)
def _clean_budget_env(monkeypatch):
    monkeypatch.delenv("DYERCAT_BUDGET", raising=False)


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    number = int(name[len("test_criterion_"):].split("_")[0])
    if report.when == "call" or report.failed:
        failed = _results.setdefault(number, [])
        if not report.passed:
            failed.append(name)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        failed = _results[number]
        line = f"criterion {number}: {'FAIL' if failed else 'PASS'}"
        if failed:
            line += " (" + ", ".join(failed) + ")"
        terminalreporter.write_line(line)
