"""Promise-ball search engines.

All three engines attack the same promise problem: given (F, alpha, r) with
the promise that some satisfying assignment lies within Hamming distance r
of alpha, find any satisfying assignment (not necessarily inside the ball).

* schoening_walk: randomized literal-flip walk, success prob >= (k-1)^-r.
* searchball: recursive branching over the literals of an unsatisfied
  clause, radius shrinking by 1 per level; <= k^r leaves.
* searchball_fast: processes t pairwise variable-disjoint unsatisfied
  k-clauses per level, branching only over the codewords of a k-ary
  covering code of radius ceil(t/k); radius shrinks by
  delta = t - 2*ceil(t/k) per level.

Branching is implemented with an assignment overlay instead of materialized
formula restrictions: a variable forced to a value behaves exactly like the
restricted formula F^[v:=bit] (clauses satisfied by the forced value drop
out of the unsatisfied scan, falsified occurrences stop being branchable).
Node counts and returned witnesses are identical to the restriction-based
formulation.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import product
from typing import Optional

from .cnf import (
    Assignment,
    Clause,
    Formula,
    clause_satisfied,
    evaluate,
)
from .codes import CoveringCode, get_code

BETA_MODES = ("skip", "full")


@dataclass
class SearchStats:
    """Recursion-tree instrumentation.

    For searchball, leaves counts terminal nodes of its literal-branching
    tree. For searchball_fast, leaves counts terminal nodes of the codeword
    recursion only (a node that falls into the small-|G| enumeration is one
    leaf); the literal-branching work done below such nodes shows up in
    recursion_nodes, keeping the |code|^ceil(r/delta) leaf envelope exact.
    """

    recursion_nodes: int = 0
    leaves: int = 0
    max_depth: int = 0

    def merge(self, other: "SearchStats") -> None:
        self.recursion_nodes += other.recursion_nodes
        self.leaves += other.leaves
        self.max_depth = max(self.max_depth, other.max_depth)


@dataclass
class WalkParams:
    """max_steps defaults to ceil(3n) at call time; seeds are 64-bit ints."""

    max_steps: int | None = None
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")


@dataclass
class FastParams:
    """Covering-code parameters for searchball_fast over (<=k)-CNF.

    The code lives on alphabet {1..k}, word length t, covering radius
    ceil(t/k); delta = t - 2*ceil(t/k) is the guaranteed radius progress
    per level and must be positive.
    """

    t: int
    code: CoveringCode
    delta: int

    def __post_init__(self) -> None:
        if self.delta < 1:
            raise ValueError(f"delta must be >= 1, got {self.delta} (t={self.t} too small)")
        if self.code.t != self.t:
            raise ValueError(f"code length {self.code.t} does not match t={self.t}")
        if not self.code.verified:
            raise ValueError("searchball_fast requires a verified covering code")

    @property
    def k(self) -> int:
        return self.code.q

    @classmethod
    def for_k(cls, k: int, t: int = 6, cache_dir=None) -> "FastParams":
        """Build params with the cached greedy code of radius ceil(t/k).

        When k does not divide t the radius rounds up, which keeps the
        covering property and shrinks delta conservatively.
        """
        if k < 2:
            raise ValueError("k must be >= 2")
        radius = -(-t // k)
        delta = t - 2 * radius
        code = get_code(k, t, radius, "greedy", cache_dir=cache_dir)
        return cls(t, code, delta)


def _first_unsat(clauses: tuple[Clause, ...], cur: list[int]) -> Optional[Clause]:
    for clause in clauses:
        sat = False
        for u in clause:
            if (cur[u - 1] == 1) if u > 0 else (cur[-u - 1] == 0):
                sat = True
                break
        if not sat:
            return clause
    return None


def schoening_walk(
    f: Formula,
    alpha: Assignment,
    params: WalkParams | None = None,
    stats: SearchStats | None = None,
) -> Optional[Assignment]:
    """Random correction walk: flip a uniformly random literal of the first
    unsatisfied clause, up to max_steps times.

    If B_r(alpha) contains a satisfying assignment the per-call success
    probability is at least (k-1)^-r. Steps taken are recorded in
    stats.recursion_nodes when a stats object is passed.
    """
    params = params or WalkParams()
    max_steps = params.max_steps
    if max_steps is None:
        max_steps = max(1, math.ceil(3 * f.num_vars))
    rng = random.Random(params.rng_seed)
    cur = list(alpha)
    clauses = f.clauses
    for _ in range(max_steps):
        target = _first_unsat(clauses, cur)
        if target is None:
            result = tuple(cur)
            assert evaluate(f, result)
            return result
        u = rng.choice(target)
        v = abs(u)
        cur[v - 1] = 1 - cur[v - 1]
        if stats is not None:
            stats.recursion_nodes += 1
    if _first_unsat(clauses, cur) is None:
        result = tuple(cur)
        assert evaluate(f, result)
        return result
    return None


def _searchball(
    clauses: tuple[Clause, ...],
    cur: list[int],
    forced: set[int],
    r: int,
    depth: int,
    stats: SearchStats,
) -> Optional[Assignment]:
    stats.recursion_nodes += 1
    if depth > stats.max_depth:
        stats.max_depth = depth
    target = _first_unsat(clauses, cur)
    if target is None:
        stats.leaves += 1
        return tuple(cur)
    if r <= 0:
        stats.leaves += 1
        return None
    branch = [u for u in target if abs(u) not in forced]
    if not branch:
        # the clause is empty in the restricted formula: dead end
        stats.leaves += 1
        return None
    for u in branch:
        v = abs(u)
        old = cur[v - 1]
        cur[v - 1] = 1 if u > 0 else 0
        forced.add(v)
        res = _searchball(clauses, cur, forced, r - 1, depth + 1, stats)
        forced.discard(v)
        cur[v - 1] = old
        if res is not None:
            return res
    return None


def searchball(
    f: Formula,
    alpha: Assignment,
    r: int,
    *,
    forced: dict[int, int] | None = None,
    stats: SearchStats | None = None,
) -> tuple[Optional[Assignment], SearchStats]:
    """Recursive promise-ball search branching over unsatisfied-clause
    literals (radius r, at most k branches per node, <= k^r leaves).

    `forced` pre-restricts variables (the search runs on F with those
    variables permanently set), which is how the fast engine hands over its
    small-|G| subproblems.
    """
    if stats is None:
        stats = SearchStats()
    if len(alpha) != f.num_vars:
        raise ValueError("assignment length does not match formula")
    cur = list(alpha)
    forced_vars: set[int] = set()
    if forced:
        for v, bit in forced.items():
            if not 1 <= v <= f.num_vars:
                raise ValueError(f"forced variable {v} out of range")
            cur[v - 1] = bit
            forced_vars.add(v)
    witness = _searchball(f.clauses, cur, forced_vars, r, 0, stats)
    if witness is not None:
        assert evaluate(f, witness)
    return witness, stats


def maximal_disjoint_unsat(f: Formula, alpha: Assignment, k: int) -> list[Clause]:
    """Greedy maximal set of pairwise variable-disjoint width-k clauses
    unsatisfied by alpha, scanned in clause input order.

    Only clauses of width exactly k enter; maximality is at the variable
    level: every unsatisfied width-k clause of F shares a variable with
    some member.
    """
    used: set[int] = set()
    out: list[Clause] = []
    for clause in f.clauses:
        if len(clause) != k or clause_satisfied(clause, alpha):
            continue
        if any(abs(u) in used for u in clause):
            continue
        out.append(clause)
        for u in clause:
            used.add(abs(u))
    return out


def apply_codeword(alpha: Assignment, h: list[Clause], w: tuple[int, ...]) -> Assignment:
    """Flip, for each clause C_i of h, the variable of its w_i-th literal
    (1-based, clause literal order).

    h must hold pairwise variable-disjoint clauses all unsatisfied by alpha,
    so exactly one literal per clause becomes satisfied and the Hamming
    distance moved is exactly len(h).
    """
    if len(h) != len(w):
        raise ValueError(f"|H| = {len(h)} but |w| = {len(w)}")
    seen: set[int] = set()
    for clause in h:
        for u in clause:
            v = abs(u)
            if v in seen:
                raise ValueError("clauses in H must be pairwise variable-disjoint")
            seen.add(v)
        if clause_satisfied(clause, alpha):
            raise ValueError("every clause in H must be unsatisfied by alpha")
    values = list(alpha)
    for clause, wi in zip(h, w):
        if not 1 <= wi <= len(clause):
            raise ValueError(f"codeword symbol {wi} exceeds clause width {len(clause)}")
        v = abs(clause[wi - 1])
        values[v - 1] = 1 - values[v - 1]
    return tuple(values)


def _satisfying_patterns(clause: Clause, cur: list[int]) -> list[tuple[tuple[int, ...], int]]:
    """All local assignments to vbl(clause) that satisfy it, as
    (bits-in-clause-var-order, flips-vs-cur) pairs in lexicographic order."""
    out = []
    for bits in product((0, 1), repeat=len(clause)):
        sat = False
        flips = 0
        for u, bit in zip(clause, bits):
            if (bit == 1) if u > 0 else (bit == 0):
                sat = True
            if bit != cur[abs(u) - 1]:
                flips += 1
        if sat:
            out.append((bits, flips))
    return out


def _beta_search(
    f: Formula,
    alpha: Assignment,
    r: int,
    g: list[Clause],
    beta_mode: str,
    stats: SearchStats,
) -> Optional[Assignment]:
    """Enumerate assignments to vbl(G) and hand each to searchball.

    After fixing all of vbl(G), maximality of G guarantees the residual
    formula has no unsatisfied width-k clause, so the subsearch branches at
    most k-1 ways per node.

    "full" replays the textbook enumeration: all 2^(k|G|) assignments at
    radius r. "skip" (default) only enumerates assignments that satisfy
    every clause of G (the promised assignment does) and lowers the
    subsearch radius by the flips already spent inside vbl(G); both prunes
    preserve the promise contract.
    """
    cur = list(alpha)
    if beta_mode == "full":
        g_vars = [abs(u) for clause in g for u in clause]
        for bits in product((0, 1), repeat=len(g_vars)):
            beta = dict(zip(g_vars, bits))
            inner = SearchStats()
            res, _ = searchball(f, alpha, r, forced=beta, stats=inner)
            stats.recursion_nodes += inner.recursion_nodes
            if res is not None:
                return res
        return None

    per_clause = [_satisfying_patterns(clause, cur) for clause in g]

    def rec(i: int, budget: int, beta: dict[int, int]) -> Optional[Assignment]:
        if i == len(g):
            inner = SearchStats()
            res, _ = searchball(f, alpha, budget, forced=beta, stats=inner)
            stats.recursion_nodes += inner.recursion_nodes
            return res
        # every remaining clause is unsatisfied under alpha, so needs >= 1 flip
        if budget < len(g) - i:
            return None
        clause = g[i]
        for bits, flips in per_clause[i]:
            if flips > budget:
                continue
            for u, bit in zip(clause, bits):
                beta[abs(u)] = bit
            res = rec(i + 1, budget - flips, beta)
            if res is not None:
                return res
        for u in clause:
            beta.pop(abs(u), None)
        return None

    return rec(0, r, {})


def searchball_fast(
    f: Formula,
    alpha: Assignment,
    r: int,
    params: FastParams,
    *,
    beta_mode: str = "skip",
    stats: SearchStats | None = None,
) -> tuple[Optional[Assignment], SearchStats]:
    """Covering-code promise-ball search.

    Per level: build a maximal set G of pairwise disjoint unsatisfied
    k-clauses. With fewer than t of them, enumerate assignments to vbl(G)
    and finish with searchball at branching factor k-1. Otherwise take the
    first t clauses H and recurse on alpha[H,w] with radius r - delta for
    every codeword w; the covering property guarantees some codeword agrees
    with a satisfying assignment on all but ceil(t/k) clauses, which nets
    the delta progress.

    Codeword-tree leaves obey leaves <= |code|^ceil(r/delta).
    """
    if beta_mode not in BETA_MODES:
        raise ValueError(f"beta_mode must be one of {BETA_MODES}")
    if stats is None:
        stats = SearchStats()
    if len(alpha) != f.num_vars:
        raise ValueError("assignment length does not match formula")
    if f.max_width > params.k:
        raise ValueError(
            f"formula width {f.max_width} exceeds code alphabet k={params.k}"
        )
    witness = _fast(f, alpha, r, params, beta_mode, stats, 0)
    if witness is not None:
        assert evaluate(f, witness)
    return witness, stats


def _fast(
    f: Formula,
    alpha: Assignment,
    r: int,
    params: FastParams,
    beta_mode: str,
    stats: SearchStats,
    depth: int,
) -> Optional[Assignment]:
    stats.recursion_nodes += 1
    if depth > stats.max_depth:
        stats.max_depth = depth
    cur = list(alpha)
    if _first_unsat(f.clauses, cur) is None:
        stats.leaves += 1
        return alpha
    if r <= 0:
        stats.leaves += 1
        return None
    g = maximal_disjoint_unsat(f, alpha, params.k)
    if len(g) < params.t:
        stats.leaves += 1
        return _beta_search(f, alpha, r, g, beta_mode, stats)
    if r < params.t:
        # t variable-disjoint clauses each need a flip: any satisfying
        # assignment sits at distance >= t > r, so the promise is vacuous
        stats.leaves += 1
        return None
    h = g[: params.t]
    for w in params.code.words:
        moved = apply_codeword(alpha, h, w)
        res = _fast(f, moved, r - params.delta, params, beta_mode, stats, depth + 1)
        if res is not None:
            return res
    return None
