import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from foldbranch import charalg, folding, rootsys  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def clear_caches() -> None:
    """Drop every memoised root system, folding and character."""
    rootsys.build_root_system.cache_clear()
    folding.folded_pair.cache_clear()
    charalg._char_full.cache_clear()
    charalg._dominant_multiplicities_cached.cache_clear()


@pytest.fixture
def cold_caches():
    clear_caches()
    yield
    clear_caches()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
