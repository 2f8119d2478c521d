"""Shared generators and slow reference oracles for the test suite.

The reference implementations here stay deliberately naive (explicit
enumeration, no bit tricks) so they remain independent of the code paths
they are used to check.
"""

from __future__ import annotations

import random
from itertools import product

from coversat.cnf import Formula
from coversat.csp import CspFormula


def rand_formula(rng: random.Random, n: int, m: int, max_width: int = 3) -> Formula:
    clauses = []
    for _ in range(m):
        width = rng.randint(1, min(max_width, n))
        variables = rng.sample(range(1, n + 1), width)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in variables))
    return Formula(n, tuple(clauses))


def rand_kcnf(rng: random.Random, n: int, m: int, k: int = 3) -> Formula:
    clauses = []
    for _ in range(m):
        variables = rng.sample(range(1, n + 1), k)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in variables))
    return Formula(n, tuple(clauses))


def rand_assignment(rng: random.Random, n: int) -> tuple[int, ...]:
    return tuple(rng.randint(0, 1) for _ in range(n))


def rand_csp(rng: random.Random, d: int, n: int, m: int, k: int = 3) -> CspFormula:
    constraints = []
    for _ in range(m):
        width = rng.randint(1, min(k, n))
        variables = rng.sample(range(1, n + 1), width)
        constraints.append(tuple((v, rng.randint(1, d)) for v in variables))
    return CspFormula(d, n, tuple(constraints))


def ref_evaluate(f: Formula, alpha: tuple[int, ...]) -> bool:
    ok = True
    for clause in f.clauses:
        sat = False
        for u in clause:
            v = abs(u)
            value = alpha[v - 1]
            if (u > 0 and value == 1) or (u < 0 and value == 0):
                sat = True
        ok = ok and sat
    return ok


def ref_all_solutions(f: Formula) -> list[tuple[int, ...]]:
    """Every satisfying assignment, lexicographic order, by raw enumeration."""
    return [a for a in product((0, 1), repeat=f.num_vars) if ref_evaluate(f, a)]


def ref_csp_solutions(f: CspFormula) -> list[tuple[int, ...]]:
    out = []
    for alpha in product(range(1, f.domain_size + 1), repeat=f.num_vars):
        if all(any(alpha[v - 1] != c for v, c in con) for con in f.constraints):
            out.append(alpha)
    return out


def ball_members(alpha: tuple[int, ...], r: int) -> list[tuple[int, ...]]:
    """All assignments within Hamming distance r of alpha (tiny n only)."""
    out = []
    for beta in product((0, 1), repeat=len(alpha)):
        if sum(a != b for a, b in zip(alpha, beta)) <= r:
            out.append(beta)
    return out


def sat_in_ball(f: Formula, alpha: tuple[int, ...], r: int) -> tuple[int, ...] | None:
    """Brute-force promise oracle: a satisfying assignment inside B_r(alpha),
    or None."""
    for beta in ball_members(alpha, r):
        if ref_evaluate(f, beta):
            return beta
    return None
