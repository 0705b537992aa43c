import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from collatz_lab import build_height_cache  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "property: module invariant / property suites")


@pytest.fixture(scope="session")
def cache_1e5():
    return build_height_cache(10**5 + 1)


@pytest.fixture(scope="session")
def cache_1e6():
    return build_height_cache(10**6 + 1)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[2].rstrip(":"))):
        terminalreporter.write_line(line)
