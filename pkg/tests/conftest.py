import pytest

_RESULTS: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(cid, text): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    cid, text = mark.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        ok = rep.passed
        prev = _RESULTS.get(cid, (True, text))
        _RESULTS[cid] = (prev[0] and ok, text)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid in sorted(_RESULTS, key=lambda c: (int("".join(ch for ch in c if ch.isdigit())), c)):
        ok, text = _RESULTS[cid]
        tr.write_line(f"criterion {cid:>3}: {'PASS' if ok else 'FAIL'}  {text}")
