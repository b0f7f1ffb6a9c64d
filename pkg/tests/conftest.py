import time
from contextlib import contextmanager

import pytest

ACCEPTANCE_LINES = []


@contextmanager
def _criterion(number, name, limit_s):
    """Time a criterion body; record PASS/FAIL with its runtime against the limit."""
    start = time.perf_counter()
    detail = {}
    status = "FAIL"
    try:
        yield detail
        elapsed = time.perf_counter() - start
        if elapsed > limit_s:
            detail["runtime"] = f"exceeded {limit_s:g}s"
            raise AssertionError(f"criterion {number} took {elapsed:.2f}s > {limit_s:g}s")
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        info = " ".join(f"{k}={v}" for k, v in detail.items())
        line = (f"ACCEPTANCE {number:02d} {name:<34s} {status}  "
                f"{elapsed:8.3f}s / {limit_s:g}s  {info}")
        ACCEPTANCE_LINES.append(line)
        print("\n" + line)


@pytest.fixture
def criterion():
    return _criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
