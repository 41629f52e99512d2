import pytest

from axlebox.freq_response import VehicleParams
from axlebox.io import load_table1

_criteria = {}


@pytest.fixture
def table1():
    return load_table1()


@pytest.fixture
def params():
    return VehicleParams()


@pytest.fixture
def undamped(params):
    return params.undamped()


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    rep = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None and (rep.when == "call" or rep.failed):
        n, title = mark.args
        ok, _ = _criteria.get(n, (True, title))
        _criteria[n] = (ok and rep.passed, title)
    return rep


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        ok, title = _criteria[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {title}")
