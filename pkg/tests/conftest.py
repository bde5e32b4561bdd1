import time
from contextlib import contextmanager

import numpy as np
import pytest

ACCEPTANCE_LINES = []


@contextmanager
def acceptance_criterion(number, title):
    """Record a PASS/FAIL line for an acceptance criterion, re-raising failures."""
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        line = f"[FAIL] criterion {number:>2}: {title} ({time.perf_counter() - start:.2f}s) -- {type(exc).__name__}: {exc}"
        ACCEPTANCE_LINES.append(line.splitlines()[0])
        print(ACCEPTANCE_LINES[-1])
        raise
    line = f"[PASS] criterion {number:>2}: {title} ({time.perf_counter() - start:.2f}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
