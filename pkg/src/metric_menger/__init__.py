"""Exact solvers, hardness gadgets and test tooling for the metric Menger problem.

Given a graph, vertex sets ``A`` and ``Z`` and integers ``r`` and ``k``,
decide whether there are ``k`` paths from ``A`` to ``Z`` that are pairwise
at distance at least ``r``.
"""

__version__ = "0.1.0"

from .cnf import CnfFormula, ParseError, evaluate, parse_dimacs, sat_brute_force, to_dimacs
from .dp import solve_dp_general, solve_dp_tw_only, solve_mm, solve_mmp
from .graph import (
    INF,
    Graph,
    MMInstance,
    MMPInstance,
    Violation,
    closed_ball,
    dist,
    max_degree,
    paths_are_m_disjoint,
    verify_mm_solution,
    verify_mmp_solution,
)
from .local_check import TerminalConflict, check, decode_paths, encode_mmp, solve_local_brute
from .reduction import (
    InvalidWitness,
    ReductionCertificate,
    build_forward_witness,
    build_reduction,
    extract_assignment,
    pad_to_k,
)
from .solver import GuardExceeded, SolveOutcome, enumerate_terminal_choices, solve_mm_brute, solve_mmp_brute
from .treewidth import (
    TreeDecomposition,
    expand_bags,
    make_nice,
    min_fill_decomposition,
    parse_td,
    validate_td,
    write_td,
)
