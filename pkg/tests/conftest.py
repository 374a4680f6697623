import importlib

import pytest

from hsdp_caching import _pykernels, kernels

BACKENDS = ["python"]
try:
    _ck = importlib.import_module("hsdp_caching._ckernels")
    BACKENDS.append("cython")
except ImportError:  # extension not built
    _ck = None


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per kernel backend by patching the dispatch module."""
    mod = _pykernels if request.param == "python" else _ck
    monkeypatch.setattr(kernels, "halfsum_counts", mod.halfsum_counts)
    monkeypatch.setattr(kernels, "c4_row_counts", mod.c4_row_counts)
    return request.param


ACCEPTANCE_LINES = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    crit = item.get_closest_marker("criterion")
    if crit is None or rep.when != "call":
        return
    num, title = crit.args
    status = "PASS" if rep.passed else "FAIL"
    detail = ""
    if rep.failed:
        detail = " :: " + str(rep.longrepr.reprcrash.message).splitlines()[0] if hasattr(rep.longrepr, "reprcrash") else ""
    elapsed = f" ({rep.duration:.3f}s)"
    ACCEPTANCE_LINES.append((num, f"{status} criterion {num}: {title}{elapsed}{detail}"))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
