"""Collects acceptance outcomes and prints one line per criterion after the run."""
import pytest

ACCEPTANCE = "test_acceptance.py"
PROPERTIES = "test_properties.py"

_criteria: dict = {}
property_outcomes: dict = {}


def pytest_collection_modifyitems(session, config, items):
    # acceptance runs last so criterion 9 can read the property suite's results
    items.sort(key=lambda item: item.nodeid.split("::")[0].endswith(ACCEPTANCE))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    path = item.nodeid.split("::")[0]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if path.endswith(PROPERTIES):
            property_outcomes[item.nodeid] = report.outcome
        elif path.endswith(ACCEPTANCE):
            label = item.function.__doc__.strip().splitlines()[0] if item.function.__doc__ else item.name
            _criteria[item.name] = (label, report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome, seconds in _criteria.values():
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {label}  ({seconds:.1f}s)")
