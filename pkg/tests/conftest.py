import time
from contextlib import contextmanager
from types import SimpleNamespace

import pytest

_RESULTS: dict[int, tuple] = {}


@pytest.fixture
def criterion():
    """Record the outcome and runtime of one acceptance criterion."""

    @contextmanager
    def run(number: int, title: str, time_limit: float | None = None):
        rec = SimpleNamespace(detail="")
        start = time.perf_counter()
        try:
            yield rec
        except BaseException as exc:
            elapsed = time.perf_counter() - start
            _RESULTS[number] = (False, title, rec.detail or f"{type(exc).__name__}: {exc}", elapsed)
            print(_line(number))
            raise
        elapsed = time.perf_counter() - start
        ok = time_limit is None or elapsed < time_limit
        detail = rec.detail if ok else f"{rec.detail}; runtime {elapsed:.2f}s over the {time_limit}s limit"
        _RESULTS[number] = (ok, title, detail, elapsed)
        print(_line(number))
        assert ok, detail

    return run


def _line(number: int) -> str:
    ok, title, detail, elapsed = _RESULTS[number]
    return f"criterion {number} {'PASS' if ok else 'FAIL'} [{elapsed:.2f}s] {title}: {detail}"


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        terminalreporter.write_line(_line(number))
