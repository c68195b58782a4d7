from __future__ import annotations

import pytest

from regmaps.classify import scan_family


@pytest.fixture(scope="session")
def full_scans():
    """Full PG(2, p) scans with map analysis, computed once per session."""
    cache = {}

    def get(index: int):
        if index not in cache:
            cache[index] = scan_family(index, "full")
        return cache[index]

    return get


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """``criterion(label, ok, detail)`` records one acceptance line, then asserts."""

    def record(label: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else ""))
        assert ok, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
