"""Collects acceptance outcomes and prints one line per criterion at the end of the run."""
import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    n = mark.args[0]
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    if hasattr(rep, "wasxfail"):
        status = "FAIL (known)"
    else:
        status = "PASS" if rep.passed else "FAIL"
    prev = _RESULTS.get(n)
    if prev is not None:
        status = prev[0] if prev[0] != "PASS" else status
        detail = f"{prev[2]}; {detail}" if prev[2] else detail
        _RESULTS[n] = (status, prev[1] + rep.duration, detail)
    else:
        _RESULTS[n] = (status, rep.duration, detail)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_RESULTS):
        status, secs, detail = _RESULTS[n]
        tr.write_line(f"criterion {n:2d}: {status:12s} {secs:8.2f} s  {detail}")
