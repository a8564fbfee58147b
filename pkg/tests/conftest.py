import pytest

from screengender import build_matcher

from helpers import make_lexicon


@pytest.fixture
def bert_robert():
    lexicon = make_lexicon(FEMALE_NAME=["bert"], MALE_NAME=["robert"])
    return lexicon, build_matcher(lexicon)


_ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(id, description): exit criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    cid, desc = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[cid] = (desc, "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_ACCEPTANCE):
        desc, status = _ACCEPTANCE[cid]
        terminalreporter.write_line(f"{status} {cid}: {desc}")
