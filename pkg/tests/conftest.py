import pytest

from corpus import BUNDLED, bundled

_results: dict[int, list[tuple[str, bool]]] = {}
_titles: dict[int, str] = {}


@pytest.fixture(scope="session")
def posets():
    return {name: bundled(name) for name in BUNDLED}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    _titles[number] = title
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _results.setdefault(number, []).append((item.name, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        runs = _results[number]
        ok = all(passed for _, passed in runs)
        failed = [name for name, passed in runs if not passed]
        line = f"AC{number:<2} {'PASS' if ok else 'FAIL'}  {_titles[number]}  ({len(runs)} checks)"
        if failed:
            line += "  failing: " + ", ".join(failed)
        terminalreporter.write_line(line)
