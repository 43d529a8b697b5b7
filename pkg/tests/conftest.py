import numpy as np
import pytest

# 64-step example: 14 events in bursts; four predictions with identical counts
# (TP=11, FP=7, FN=3, TN=43) but very different timing of their errors.
TOY_EVENTS = [10, 12, 13, 20, 30, 31, 32, 33, 34, 45, 46, 47, 57, 58]
TOY_PREDICTIONS = {
    1: [12, 13, 30, 31, 32, 33, 34, 45, 46, 47, 58, 0, 2, 4, 25, 26, 39, 62],
    2: [10, 13, 30, 31, 32, 33, 34, 45, 46, 47, 58, 0, 2, 4, 25, 26, 39, 62],
    3: [10, 13, 20, 30, 32, 33, 34, 45, 47, 57, 58, 27, 18, 43, 35, 22, 0, 39],
    4: [12, 13, 30, 31, 32, 33, 34, 45, 46, 47, 58, 8, 9, 19, 29, 43, 44, 56],
}


def _indicator(n, idx):
    v = np.zeros(n, dtype=np.int8)
    v[idx] = 1
    return v


@pytest.fixture
def toy_labels():
    return _indicator(64, TOY_EVENTS)


@pytest.fixture
def toy_predictions():
    return {k: _indicator(64, v) for k, v in TOY_PREDICTIONS.items()}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- acceptance summary: one pass/fail line per criterion ---------------------

_ACCEPTANCE = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if call.when == "setup" and call.excinfo is not None:
        _ACCEPTANCE[number] = (title, False)
    elif call.when == "call":
        _ACCEPTANCE[number] = (title, call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok = _ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}")
