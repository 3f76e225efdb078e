import pytest

_RESULTS: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    crit = getattr(report, "criterion", None)
    if crit is None:
        return
    n, title = crit
    r = _RESULTS.setdefault(n, {"title": title, "passed": 0, "failed": [], "notes": []})
    if report.passed:
        r["passed"] += 1
    else:
        r["failed"].append(report.nodeid.split("::")[-1])
    for name, text in report.user_properties:
        if name == "measured":
            r["notes"].append(text)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep.criterion = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_RESULTS):
        r = _RESULTS[n]
        status = "FAIL" if r["failed"] else "PASS"
        line = f"criterion {n:2d} {status}  {r['title']}"
        if r["failed"]:
            line += f"  (failed: {', '.join(r['failed'])})"
        tr.write_line(line)
        for note in r["notes"]:
            tr.write_line(f"              {note}")
