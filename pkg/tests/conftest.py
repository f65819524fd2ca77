from __future__ import annotations

import pytest

_RESULTS = pytest.StashKey[dict]()


def format_criterion(number: int, title: str, ok: bool) -> str:
    return f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {title}"


@pytest.fixture
def record_criterion(request):
    """Record the outcome of an acceptance criterion for the terminal summary."""
    store = request.config.stash.setdefault(_RESULTS, {})

    def record(number: int, title: str, ok: bool) -> None:
        store[number] = (title, ok)
        print(format_criterion(number, title, ok))

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(_RESULTS, None)
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(store):
        title, ok = store[number]
        terminalreporter.write_line(format_criterion(number, title, ok))
