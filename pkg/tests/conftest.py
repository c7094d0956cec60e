from pathlib import Path

import pytest

from a2ktheory.plane import difference_set_plane
from a2ktheory.presentation import PointLineCorrespondence, singer_presentation

DATA = Path(__file__).resolve().parent.parent / "data"

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def fano():
    """Fano plane with lines l_i = {i+1, i+2, i+4} mod 7."""
    return difference_set_plane(2)


@pytest.fixture(scope="session")
def fano_lambda(fano):
    return PointLineCorrespondence.identity(fano)


@pytest.fixture(scope="session")
def cyclic_tp():
    return singer_presentation(2)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
