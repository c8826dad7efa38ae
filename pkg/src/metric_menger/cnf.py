"""3-CNF formulas, DIMACS I/O and an exhaustive satisfiability oracle."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

MAX_BRUTE_FORCE_VARS = 30


class ParseError(ValueError):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class CnfFormula:
    """Conjunction of clauses with exactly three literal slots each.

    Literals are non-zero ints in DIMACS convention: ``+i`` is x_i and
    ``-i`` its negation. Slots may repeat a literal.
    """

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        clauses = tuple(tuple(int(x) for x in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        for j, c in enumerate(clauses, 1):
            if len(c) != 3:
                raise ValueError(f"clause {j} has {len(c)} literal slots, expected 3")
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"clause {j}: literal {lit} outside 1..{self.num_vars}")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def occurrences(self, var: int, positive: bool) -> list[tuple[int, int]]:
        """1-based ``(clause, slot)`` pairs where the literal appears, in clause order."""
        lit = var if positive else -var
        return [
            (j, slot)
            for j, c in enumerate(self.clauses, 1)
            for slot, x in enumerate(c, 1)
            if x == lit
        ]


def parse_dimacs(text: str) -> CnfFormula:
    num_vars = num_clauses = None
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    pending_line = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if num_vars is not None:
                raise ParseError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"malformed header {line!r}", lineno)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"malformed header {line!r}", lineno) from None
            if num_vars < 0 or num_clauses < 0:
                raise ParseError("negative count in header", lineno)
            continue
        if num_vars is None:
            raise ParseError("clause before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"not an integer: {tok!r}", lineno) from None
            if lit == 0:
                clauses.append(_pad_clause(pending, pending_line or lineno))
                pending = []
                pending_line = None
                continue
            if abs(lit) > num_vars:
                raise ParseError(f"literal {lit} outside 1..{num_vars}", lineno)
            pending.append(lit)
            pending_line = pending_line or lineno
    if num_vars is None:
        raise ParseError("missing 'p cnf' header")
    if pending:
        raise ParseError("last clause is not terminated by 0", pending_line)
    if len(clauses) != num_clauses:
        raise ParseError(f"header declares {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, tuple(clauses))


def _pad_clause(lits: list[int], lineno: int) -> tuple[int, int, int]:
    if not lits:
        raise ParseError("empty clause", lineno)
    if len(lits) > 3:
        raise ParseError(f"clause has {len(lits)} literals; at most 3 are supported", lineno)
    return tuple(lits + [lits[-1]] * (3 - len(lits)))


def to_dimacs(phi: CnfFormula) -> str:
    lines = [f"p cnf {phi.num_vars} {phi.num_clauses}"]
    lines += [" ".join(map(str, c)) + " 0" for c in phi.clauses]
    return "\n".join(lines) + "\n"


def evaluate(phi: CnfFormula, assignment: Mapping[int, int]) -> bool:
    """Truth value of ``phi`` under a total assignment ``{var: 0 or 1}``."""
    missing = [i for i in range(1, phi.num_vars + 1) if i not in assignment]
    if missing:
        raise ValueError(f"assignment is missing variables {missing}")
    for clause in phi.clauses:
        if not any(bool(assignment[abs(x)]) == (x > 0) for x in clause):
            return False
    return True


def sat_brute_force(phi: CnfFormula) -> dict[int, int] | None:
    """First satisfying assignment in lexicographic order, or None if unsatisfiable."""
    n = phi.num_vars
    if n > MAX_BRUTE_FORCE_VARS:
        raise ValueError(f"{n} variables exceeds the brute-force limit of {MAX_BRUTE_FORCE_VARS}")
    for bits in itertools.product((0, 1), repeat=n):
        a = dict(enumerate(bits, 1))
        if evaluate(phi, a):
            return a
    return None
