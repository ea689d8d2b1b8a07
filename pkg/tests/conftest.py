import time
from contextlib import contextmanager

import pytest

_RESULTS: dict[int, tuple[bool, str, float, list[str]]] = {}


class _Criterion:
    def __init__(self, number, title, limit):
        self.number, self.title, self.limit = number, title, limit
        self.failures: list[str] = []
        self.notes: list[str] = []

    def check(self, label, ok, detail=""):
        text = f"{label}: {detail}" if detail else label
        (self.notes if ok else self.failures).append(text)
        return ok


@contextmanager
def _run(number, title, limit=None):
    c = _Criterion(number, title, limit)
    start = time.perf_counter()
    try:
        yield c
    except Exception as exc:
        c.failures.append(f"raised {type(exc).__name__}: {exc}")
        raise
    finally:
        elapsed = time.perf_counter() - start
        if limit is not None:
            c.check("runtime", elapsed < limit, f"{elapsed:.2f}s < {limit:g}s")
        _RESULTS[number] = (not c.failures, title, elapsed, c.failures or c.notes)
    assert not c.failures, "; ".join(c.failures)


@pytest.fixture
def criterion():
    return _run


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        ok, title, elapsed, notes = _RESULTS[n]
        terminalreporter.write_line(f"ACCEPTANCE [{'PASS' if ok else 'FAIL'}] {n:2d} {title} ({elapsed:.2f}s)")
        if not ok:
            for line in notes:
                terminalreporter.write_line(f"    {line}")
