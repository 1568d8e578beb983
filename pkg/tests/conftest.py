import pytest

CRITERIA = {
    1: "relation suite",
    2: "Deodhar identity",
    3: "light-leaves triangularity",
    4: "double-leaves basis",
    5: "oracle equivalence",
    6: "vertex solver",
    7: "KL sanity",
    8: "defect bookkeeping",
}
_outcomes: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _outcomes.setdefault(mark.args[0], []).append((item.nodeid, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n, name in CRITERIA.items():
        runs = _outcomes.get(n, [])
        passed = sum(ok for _, ok in runs)
        if not runs:
            tr.write_line(f"CRITERION {n} ({name}): NOT RUN")
            continue
        status = "PASS" if passed == len(runs) else "FAIL"
        tr.write_line(f"CRITERION {n} ({name}): {status} [{passed}/{len(runs)} checks]")
