from __future__ import annotations

import pytest

from treehecke.permgroup import closure, cyclic_generators, dihedral_generators, suborbit_table, symmetric_generators
from treehecke.tree import build_structure_table

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def d5():
    return suborbit_table(closure(5, dihedral_generators(5)))


@pytest.fixture(scope="session")
def c5():
    return suborbit_table(closure(5, cyclic_generators(5)))


@pytest.fixture(scope="session")
def sym3():
    return suborbit_table(closure(3, symmetric_generators(3)))


@pytest.fixture(scope="session")
def sym4():
    return suborbit_table(closure(4, symmetric_generators(4)))


@pytest.fixture(scope="session")
def d5_table8(d5):
    return build_structure_table(d5, 8)


@pytest.fixture(scope="session")
def sym3_table8(sym3):
    return build_structure_table(sym3, 8)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
