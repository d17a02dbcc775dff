from itertools import product

import pytest

from subsetreach.families import bv_counterexample, cerny, fig2_example, fig5_p4


def naive_image(dfa, states, word):
    """Set image by direct table lookups, independent of the bit-mask code."""
    s = set(states)
    for l in word:
        s = {dfa.delta[q - 1][l] for q in s}
    return s


def words_upto(k, max_len):
    for length in range(max_len + 1):
        yield from product(range(k), repeat=length)


@pytest.fixture
def c4():
    return cerny(4)


@pytest.fixture
def fig2():
    return fig2_example()


@pytest.fixture
def bv():
    return bv_counterexample()


@pytest.fixture
def fig5():
    return fig5_p4()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


_criteria = {}


def pytest_runtest_logreport(report):
    label = getattr(report, "criterion", None)
    if label is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        # parametrized criteria fail if any case fails
        if _criteria.get(label, "passed") == "passed":
            _criteria[label] = report.outcome


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return None
    from _pytest.runner import TestReport

    report = TestReport.from_item_and_call(item, call)
    report.criterion = marker.args[0]
    return report


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria):
        status = "PASS" if _criteria[label] == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {label}")
