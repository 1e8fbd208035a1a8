import inspect

_labels = {}
_results = {}


def pytest_collection_finish(session):
    for item in session.items:
        if "test_acceptance.py::test_criterion_" in item.nodeid:
            doc = inspect.getdoc(item.function) or item.name
            _labels[item.nodeid] = doc.splitlines()[0]


def pytest_runtest_logreport(report):
    if report.nodeid in _labels and (report.when == "call" or report.outcome != "passed"):
        _results[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _labels:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, label in _labels.items():
        outcome = _results.get(nodeid, "not run")
        mark = {"passed": "PASS", "failed": "FAIL"}.get(outcome, outcome.upper())
        terminalreporter.write_line(f"{mark}  {label}")
