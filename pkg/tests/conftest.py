import pytest

from metric_menger.cnf import CnfFormula, parse_dimacs

SAMPLE_CNF = "p cnf 4 3\n1 -2 3 0\n-1 -2 4 0\n2 -3 -4 0\n"
CONTRADICTION_CNF = "p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n"


@pytest.fixture
def sample_formula() -> CnfFormula:
    """(x1 | ~x2 | x3) & (~x1 | ~x2 | x4) & (x2 | ~x3 | ~x4)"""
    return parse_dimacs(SAMPLE_CNF)


@pytest.fixture
def contradiction() -> CnfFormula:
    return parse_dimacs(CONTRADICTION_CNF)
