import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import simplylog  # noqa: E402

CORPUS = Path(simplylog.__file__).parent / "corpus"

# (number, title, passed, seconds, limit) for each acceptance criterion run
ACCEPTANCE_RESULTS = []


@pytest.fixture
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture
def criterion():
    """Context manager timing one acceptance criterion against its limit and
    recording a pass/fail line for the end-of-run summary."""

    @contextmanager
    def run(number: int, title: str, limit: float):
        start = time.perf_counter()
        passed = False
        try:
            yield
            elapsed = time.perf_counter() - start
            assert elapsed < limit, f"criterion {number} took {elapsed:.2f}s (limit {limit}s)"
            passed = True
        finally:
            elapsed = time.perf_counter() - start
            line = (f"criterion {number:2d} {title}: {'PASS' if passed else 'FAIL'} "
                    f"({elapsed:.2f}s, limit {limit:g}s)")
            ACCEPTANCE_RESULTS.append((number, line))
            print(line)

    return run


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(line)
