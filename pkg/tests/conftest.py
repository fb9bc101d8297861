import functools

import pytest

from sdschwarz import frequency_band, optimal_alphas
from sdschwarz.cases import table2_case, test1
from sdschwarz.schwarz import build_solver

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def solved_test1(h):
    case = test1(h=h)
    robin = optimal_alphas(case.params, frequency_band(1.0, h, "quarter_h")).robin
    solver = build_solver(case, robin)
    return case, solver, solver.gmres_interface_solve(tol=1e-9)


@functools.lru_cache(maxsize=None)
def solved_table2(number, h=0.0125):
    case = table2_case(number, h=h)
    robin = optimal_alphas(case.params, frequency_band(1.0, h, "half_h")).robin
    solver = build_solver(case, robin)
    return case, solver, solver.gmres_interface_solve(tol=1e-9)


@pytest.fixture(scope="session")
def test1_coarse():
    return solved_test1(2.0**-3)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
