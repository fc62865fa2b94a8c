import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from formalcr import corpus  # noqa: E402


@pytest.fixture(scope="session")
def manifolds():
    return {name: corpus.manifold(name) for name in corpus.MANIFOLDS}


@pytest.fixture(scope="session")
def maps():
    return {name: corpus.formal_map(name) for name in corpus.MAPS}


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import SCORECARD
    except ImportError:
        return
    if SCORECARD:
        terminalreporter.section("acceptance criteria")
        for line in SCORECARD:
            terminalreporter.write_line(line)
