from collections import OrderedDict

import pytest

from extalg.catalog import load_catalog

_CRITERIA: "OrderedDict[int, dict]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            num, title = m.args
            _CRITERIA.setdefault(num, {"title": title, "passed": 0, "failed": 0, "tests": []})
            _CRITERIA[num]["tests"].append(item.nodeid)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for num, info in _CRITERIA.items():
        if report.nodeid in info["tests"]:
            info["passed" if report.passed else "failed"] += 1


def pytest_terminal_summary(terminalreporter):
    ran = {n: i for n, i in _CRITERIA.items() if i["passed"] + i["failed"]}
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ran):
        info = ran[num]
        verdict = "PASS" if info["failed"] == 0 else "FAIL"
        total = info["passed"] + info["failed"]
        terminalreporter.write_line(f"criterion {num:>2}: {verdict}  {info['title']} ({info['passed']}/{total} tests)")


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture(scope="session")
def R(catalog):
    return catalog.resolve
