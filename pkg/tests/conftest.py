import numpy as np
import pytest

from obfwpt.config import SystemParams


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def fig2():
    """Fig. 2 caption setting with N=2, L=4, ideal combiners."""
    return SystemParams()


def ks_distance(samples, cdf):
    """One-sample Kolmogorov-Smirnov sup-distance."""
    x = np.sort(np.asarray(samples))
    n = x.size
    f = cdf(x)
    upper = np.arange(1, n + 1) / n - f
    lower = f - np.arange(n) / n
    return max(upper.max(), lower.max())


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", help="run long Monte-Carlo tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="long Monte-Carlo run; use --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance verdict; the summary prints them all."""
    def record(number, ok, detail):
        CRITERIA.append((number, bool(ok), detail))
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(CRITERIA, key=lambda c: c[0]):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
