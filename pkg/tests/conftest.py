import time
from contextlib import contextmanager

import pytest

ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = {}


@pytest.fixture
def criterion(request, capsys):
    """Record one acceptance criterion: prints a PASS/FAIL line and enforces a time limit."""
    results = request.config.stash[ACCEPTANCE]

    @contextmanager
    def check(number: int, label: str, limit: float | None = None):
        start = time.perf_counter()
        status, why = "FAIL", ""
        try:
            yield
            elapsed = time.perf_counter() - start
            if limit is not None and elapsed >= limit:
                why = f"took {elapsed:.2f}s, limit {limit:g}s"
                raise AssertionError(why)
            status = "PASS"
        except BaseException as exc:
            why = why or f"{type(exc).__name__}: {exc}".splitlines()[0][:120]
            raise
        finally:
            elapsed = time.perf_counter() - start
            line = f"criterion {number:2d} {status}  {label} ({elapsed:.2f}s){'  ' + why if why else ''}"
            results[number] = line
            with capsys.disabled():
                print(f"\n{line}")

    return check


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(ACCEPTANCE, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
