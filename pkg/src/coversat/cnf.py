"""Immutable CNF data model: formulas, assignments, Hamming geometry, restriction.

Literals use the DIMACS convention: the integer ``v`` (v >= 1) is the positive
literal of variable ``v`` and ``-v`` its negation. A clause is a tuple of
literals over pairwise distinct variables, in input order. An assignment is a
tuple of 0/1 values indexed by ``variable - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

Literal = int
Clause = tuple[Literal, ...]
Assignment = tuple[int, ...]
PartialAssignment = Mapping[int, int]


def make_clause(literals: Iterable[int]) -> Clause:
    """Validate and freeze a clause. Literal order is preserved."""
    clause = tuple(int(u) for u in literals)
    seen: set[int] = set()
    for u in clause:
        if u == 0:
            raise ValueError("literal 0 is not allowed in a clause")
        v = abs(u)
        if v in seen:
            raise ValueError(f"variable {v} occurs twice in clause {clause}")
        seen.add(v)
    return clause


@dataclass(frozen=True)
class Formula:
    """A CNF formula: ordered clauses over variables 1..num_vars.

    The empty clause is representable and makes the formula unsatisfiable.
    ``num_vars`` comes from the input header and is never shrunk when
    variables vanish under restriction.
    """

    num_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self) -> None:
        if self.num_vars < 0:
            raise ValueError("num_vars must be >= 0")
        object.__setattr__(self, "clauses", tuple(make_clause(c) for c in self.clauses))
        for clause in self.clauses:
            for u in clause:
                if abs(u) > self.num_vars:
                    raise ValueError(
                        f"literal {u} exceeds num_vars={self.num_vars}"
                    )

    @property
    def max_width(self) -> int:
        """Maximum clause length (the k of a (<=k)-CNF); 0 for no clauses."""
        return max((len(c) for c in self.clauses), default=0)

    def __len__(self) -> int:
        return len(self.clauses)


def formula(num_vars: int, clauses: Iterable[Iterable[int]]) -> Formula:
    """Convenience constructor from nested iterables of signed ints."""
    return Formula(num_vars, tuple(make_clause(c) for c in clauses))


def literal_satisfied(u: Literal, alpha: Assignment) -> bool:
    return alpha[u - 1] == 1 if u > 0 else alpha[-u - 1] == 0


def clause_satisfied(clause: Clause, alpha: Assignment) -> bool:
    for u in clause:
        if u > 0:
            if alpha[u - 1] == 1:
                return True
        elif alpha[-u - 1] == 0:
            return True
    return False


def evaluate(f: Formula, alpha: Assignment) -> bool:
    """True iff every clause contains a literal satisfied by alpha."""
    if len(alpha) != f.num_vars:
        raise ValueError(f"assignment has {len(alpha)} values, formula has {f.num_vars} variables")
    return all(clause_satisfied(c, alpha) for c in f.clauses)


def first_unsatisfied_clause(f: Formula, alpha: Assignment) -> Optional[int]:
    """Lowest input-order index of a clause unsatisfied by alpha, or None.

    The lowest-index tie-break makes every engine built on top of this
    deterministic and reproducible.
    """
    if len(alpha) != f.num_vars:
        raise ValueError(f"assignment has {len(alpha)} values, formula has {f.num_vars} variables")
    for i, clause in enumerate(f.clauses):
        if not clause_satisfied(clause, alpha):
            return i
    return None


def hamming_distance(alpha: Assignment, beta: Assignment) -> int:
    """Number of variables where the two assignments differ."""
    if len(alpha) != len(beta):
        raise ValueError(f"assignments over different variable sets ({len(alpha)} vs {len(beta)})")
    return sum(a != b for a, b in zip(alpha, beta))


def assign_literal(f: Formula, u: Literal) -> Formula:
    """The formula after permanently making literal u true.

    Clauses containing u are satisfied and removed; occurrences of the
    complement are deleted from the remaining clauses. num_vars is unchanged.
    """
    if u == 0 or abs(u) > f.num_vars:
        raise ValueError(f"literal {u} out of range for {f.num_vars} variables")
    out: list[Clause] = []
    neg = -u
    for clause in f.clauses:
        if u in clause:
            continue
        if neg in clause:
            out.append(tuple(w for w in clause if w != neg))
        else:
            out.append(clause)
    return Formula(f.num_vars, tuple(out))


def restrict(f: Formula, beta: PartialAssignment) -> Formula:
    """The formula after permanently setting every variable in beta.

    Equivalent to folding assign_literal over domain(beta) in any order.
    Restriction may create empty clauses.
    """
    for v, bit in beta.items():
        if not 1 <= v <= f.num_vars:
            raise ValueError(f"variable {v} out of range")
        if bit not in (0, 1):
            raise ValueError(f"value for variable {v} must be 0 or 1")
    out: list[Clause] = []
    for clause in f.clauses:
        satisfied = False
        kept: list[int] = []
        for u in clause:
            bit = beta.get(abs(u))
            if bit is None:
                kept.append(u)
            elif (u > 0) == (bit == 1):
                satisfied = True
                break
        if not satisfied:
            out.append(tuple(kept))
    return Formula(f.num_vars, tuple(out))


def flip(alpha: Assignment, variable: int) -> Assignment:
    """alpha with one variable's value toggled."""
    i = variable - 1
    return alpha[:i] + (1 - alpha[i],) + alpha[i + 1:]


def override(alpha: Assignment, beta: PartialAssignment) -> Assignment:
    """Total assignment agreeing with beta on its domain and alpha elsewhere."""
    values = list(alpha)
    for v, bit in beta.items():
        values[v - 1] = bit
    return tuple(values)
