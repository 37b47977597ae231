import os
import sys
from functools import lru_cache

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from latcheck.groupspec import make_named  # noqa: E402
from latcheck.lattice import enumerate_subgroups  # noqa: E402


_ACCEPTANCE: dict[int, tuple] = {}


def record_acceptance(number: int, ok, detail: str) -> None:
    _ACCEPTANCE[number] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[number]
        word = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
        terminalreporter.write_line(f"criterion {number:>2}: {word}  {detail}")


@lru_cache(maxsize=None)
def group_and_lattice(spec: str):
    group = make_named(spec)
    return group, enumerate_subgroups(group)


@pytest.fixture
def lattice_of():
    return group_and_lattice


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("LATCHECK_CACHE", str(tmp_path / "cache"))
