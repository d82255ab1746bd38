import pytest

from verdant import default_profile

# Collected outcomes for the acceptance suite, printed as one line per
# criterion at the end of the run.
_acceptance_results: dict[str, str] = {}


@pytest.fixture(scope="session")
def profile():
    return default_profile()


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _acceptance_results[name] = report.outcome
    elif report.outcome in ("failed", "error") and name not in _acceptance_results:
        _acceptance_results[name] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_acceptance_results.items()):
        label = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{label}] {name}")
