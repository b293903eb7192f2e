"""Shared fixtures: the clean snippet corpus and a session knowledge base."""

import pathlib

import pytest

from kchlint.evalharness import CLEAN, Sample
from kchlint.kb import bundled_kb

CLEAN_DIR = pathlib.Path(__file__).parent / "fixtures" / "clean"

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def kb():
    return bundled_kb()


@pytest.fixture(scope="session")
def clean_paths():
    paths = sorted(CLEAN_DIR.glob("*.py"))
    assert len(paths) >= 40
    return paths


@pytest.fixture(scope="session")
def clean_samples(clean_paths):
    return [
        Sample(id=path.stem, code=path.read_text(), label=CLEAN)
        for path in clean_paths
    ]
