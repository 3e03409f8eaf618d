from __future__ import annotations

from pathlib import Path

import pytest

from burnsolver.graph import parse_edge_list
from burnsolver.precompute import precompute

# Toy graph: 12 vertices, 14 edges, burning number 3.
TOY_EDGES = """\
2 3
3 4
4 5
5 6
6 7
1 5
1 4
1 6
5 8
6 8
10 8
10 9
10 11
10 12
"""


@pytest.fixture(scope="session")
def toy():
    return parse_edge_list(TOY_EDGES)


@pytest.fixture(scope="session")
def toy_pre(toy):
    return precompute(toy)


@pytest.fixture
def toy_file(tmp_path) -> Path:
    path = tmp_path / "toy.edges"
    path.write_text(TOY_EDGES)
    return path


# Acceptance criteria report one line each at the end of the run.
ACCEPTANCE: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
        terminalreporter.write_line(f"criterion {key}: {ACCEPTANCE[key]}")
