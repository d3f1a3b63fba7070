from importlib import resources
from pathlib import Path

import pytest

from census_vote.census import load_census
from census_vote.corpus import CandidateSpec

DATA = Path(str(resources.files("census_vote") / "data" / "sg2011"))
FIXTURES = Path(__file__).parent / "fixtures"

PAPER_SPECS = (
    CandidateSpec("TT", "1", ("tony tan",)),
    CandidateSpec("TCB", "1", ("tan cheng bock",)),
    CandidateSpec("TJS", "2", ("tan jee say",)),
    CandidateSpec("TKL", "2", ("tan kin lian",)),
)


@pytest.fixture(scope="session")
def paper_census():
    return load_census(DATA / "census.csv")


@pytest.fixture
def paper_specs():
    return PAPER_SPECS


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
