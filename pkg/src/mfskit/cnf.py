"""CNF formulas, DIMACS parsing, and a small exhaustive SAT oracle.

Literals are DIMACS-style signed integers: +j for variable j, -j for its
negation, with variables numbered 1..n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimacsError


@dataclass(frozen=True)
class CnfFormula:
    """A conjunction of disjunctive clauses over n >= 2 variables.

    Tautological clauses (x and -x together) and empty clauses are
    rejected: the reduction to the sequence-frequency problem is not
    defined for them.
    """

    variable_count: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "clauses",
            tuple(tuple(sorted(set(cl), key=abs)) for cl in self.clauses),
        )
        n = self.variable_count
        if n < 2:
            raise DimacsError(
                f"need at least 2 variables (got {n}); single-variable "
                "formulas can be padded with an unused variable"
            )
        if not self.clauses:
            raise DimacsError("need at least one clause")
        for idx, clause in enumerate(self.clauses, 1):
            if not clause:
                raise DimacsError(f"clause {idx} is empty")
            seen = set()
            for lit in clause:
                var = abs(lit)
                if lit == 0 or var > n:
                    raise DimacsError(
                        f"clause {idx}: literal {lit} out of range 1..{n}"
                    )
                if -lit in seen:
                    raise DimacsError(
                        f"clause {idx} is a tautology (contains {var} and -{var})"
                    )
                seen.add(lit)

    @property
    def clause_count(self) -> int:
        return len(self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.variable_count} {self.clause_count}"]
        for clause in self.clauses:
            lines.append(" ".join(str(lit) for lit in clause) + " 0")
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF: 'c' comment lines, a 'p cnf <vars> <clauses>'
    header, then 0-terminated clauses (which may span lines)."""
    header: tuple[int, int] | None = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsError(f"line {lineno}: duplicate header")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(
                    f"line {lineno}: malformed header {line!r}, "
                    "expected 'p cnf <vars> <clauses>'"
                )
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"line {lineno}: non-numeric header counts") from None
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause before 'p cnf' header")
        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise DimacsError(
                    f"line {lineno}: invalid literal {token!r}"
                ) from None
            if lit == 0:
                if not current:
                    raise DimacsError(f"line {lineno}: empty clause")
                clauses.append(current)
                current = []
            else:
                if abs(lit) > header[0]:
                    raise DimacsError(
                        f"line {lineno}: literal {lit} exceeds the declared "
                        f"{header[0]} variables"
                    )
                current.append(lit)
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        raise DimacsError("last clause is not 0-terminated")
    if len(clauses) != header[1]:
        raise DimacsError(
            f"header declares {header[1]} clauses but {len(clauses)} were given"
        )
    return CnfFormula(header[0], tuple(tuple(cl) for cl in clauses))


def satisfies(f: CnfFormula, assignment: Sequence[bool]) -> bool:
    """True when the assignment (indexed by variable - 1) satisfies f."""
    if len(assignment) != f.variable_count:
        raise ValueError(
            f"assignment has {len(assignment)} values for "
            f"{f.variable_count} variables"
        )
    for clause in f.clauses:
        if not any(
            assignment[abs(lit) - 1] == (lit > 0) for lit in clause
        ):
            return False
    return True


def brute_force_sat(
    f: CnfFormula, *, max_variables: int = 24
) -> tuple[bool, ...] | None:
    """Exhaustive satisfiability check; returns a witness or None.

    The witness is the smallest satisfying assignment in binary counting
    order (variable 1 is the least significant bit).
    """
    n = f.variable_count
    if n > max_variables:
        raise ValueError(
            f"{n} variables exceed the exhaustive-search cap {max_variables}"
        )
    clause_masks = []
    for clause in f.clauses:
        pos = 0
        neg = 0
        for lit in clause:
            if lit > 0:
                pos |= 1 << (lit - 1)
            else:
                neg |= 1 << (-lit - 1)
        clause_masks.append((pos, neg))
    full = (1 << n) - 1
    for bits in range(1 << n):
        inv = bits ^ full
        if all(bits & pos or inv & neg for pos, neg in clause_masks):
            return tuple(bool((bits >> j) & 1) for j in range(n))
    return None
