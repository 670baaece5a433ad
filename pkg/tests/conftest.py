import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from possframes.corpus import load_corpus  # noqa: E402


@pytest.fixture(scope="session")
def watson():
    return load_corpus("watson")


@pytest.fixture(scope="session")
def game():
    return load_corpus("game")


@pytest.fixture(scope="session")
def overconfident():
    return load_corpus("overconfident")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
