"""Full k-SAT solvers: deterministic outer covering-code loop, randomized
repetition of the walk, and an exhaustive oracle.

The deterministic solver iterates over a Boolean covering code of {0,1}^n
and runs searchball_fast around every codeword: when F is satisfiable some
codeword lies within the cover radius of a satisfying assignment, so the
promise search around it must succeed.
"""

from __future__ import annotations

import math
import random
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .cnf import Assignment, Formula, evaluate
from .codes import boolean_cover
from .errors import ResourceCapError, UsageError
from .search import FastParams, SearchStats, WalkParams, schoening_walk, searchball_fast

BRUTE_MAX_VARS = 24
RANDOM_TRIAL_HARD_CAP = 10**8

MODES = ("deterministic", "randomized", "brute")


@dataclass
class SolverConfig:
    """Knobs for all solver modes.

    rho defaults to 1/(a+1) for a = k-1+epsilon, the radius fraction that
    balances the number of covering balls against the per-ball search cost.
    outer_block_len defaults to min(12, n): one greedy block when n is small,
    concatenated 12-var blocks beyond that.
    """

    mode: str = "deterministic"
    t: int = 6
    epsilon: float = 0.1
    outer_block_len: int | None = None
    rho: float | None = None
    seed: int = 0
    trial_cap: int | None = None
    box_block_len: int | None = None
    beta_mode: str = "skip"
    jobs: int = 1
    cache_dir: str | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise UsageError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.epsilon <= 0:
            raise UsageError("epsilon must be > 0")
        if self.outer_block_len is not None and not 1 <= self.outer_block_len <= 20:
            raise UsageError("outer_block_len must lie in 1..20")
        if self.rho is not None and not 0 < self.rho <= 0.5:
            raise UsageError("rho must lie in (0, 1/2]")
        if self.jobs < 1:
            raise UsageError("jobs must be >= 1")


@dataclass
class SolveStats:
    search: SearchStats = field(default_factory=SearchStats)
    codewords_tried: int = 0
    boxes_tried: int = 0
    trials: int = 0
    wall_time: float = 0.0


@dataclass
class SolveResult:
    """status 'sat' carries a verified witness; deterministic and brute modes
    never report 'unknown'; the randomized mode reports 'unknown' instead of
    'unsat' (one-sided Monte-Carlo error)."""

    status: str
    witness: Optional[tuple[int, ...]]
    stats: SolveStats = field(default_factory=SolveStats)


@lru_cache(maxsize=8)
def _var_masks(n: int) -> tuple[int, ...]:
    """mask[v-1] has bit i set iff assignment index i gives variable v the
    value 1, where index i enumerates assignments lexicographically
    (variable 1 most significant)."""
    total_bits = 1 << n
    masks = []
    for v in range(1, n + 1):
        run = 1 << (n - v)
        unit = (1 << run) - 1
        rep = ((1 << total_bits) - 1) // ((1 << (2 * run)) - 1)
        masks.append((unit << run) * rep)
    return tuple(masks)


def solution_bitmap(f: Formula) -> int:
    """Bitmap over all 2^n assignments with bit i set iff assignment i
    satisfies F. Assignment i gives variable v the bit (i >> (n-v)) & 1."""
    n = f.num_vars
    if n > BRUTE_MAX_VARS:
        raise ResourceCapError(f"{n} variables exceed the brute-force cap {BRUTE_MAX_VARS}")
    masks = _var_masks(n)
    full = (1 << (1 << n)) - 1
    sat = full
    for clause in f.clauses:
        cmask = 0
        for u in clause:
            cmask |= masks[u - 1] if u > 0 else full ^ masks[-u - 1]
        sat &= cmask
        if not sat:
            break
    return sat


def index_to_assignment(i: int, n: int) -> Assignment:
    return tuple((i >> (n - v)) & 1 for v in range(1, n + 1))


def brute_force(f: Formula) -> SolveResult:
    """Exhaustive oracle: first satisfying assignment in lexicographic
    order, or unsat. Limited to n <= 24."""
    start = time.perf_counter()
    sat = solution_bitmap(f)
    stats = SolveStats()
    if sat == 0:
        stats.wall_time = time.perf_counter() - start
        return SolveResult("unsat", None, stats)
    lowest = (sat & -sat).bit_length() - 1
    witness = index_to_assignment(lowest, f.num_vars)
    assert evaluate(f, witness)
    stats.wall_time = time.perf_counter() - start
    return SolveResult("sat", witness, stats)


def _outer_cover_and_params(f: Formula, cfg: SolverConfig):
    n, k = f.num_vars, f.max_width
    b = cfg.outer_block_len if cfg.outer_block_len is not None else min(12, max(1, n))
    a = k - 1 + cfg.epsilon
    rho = cfg.rho if cfg.rho is not None else 1.0 / (a + 1.0)
    if not 0 < rho <= 0.5:
        raise UsageError(f"derived rho {rho} outside (0, 1/2]; pass --rho explicitly")
    cover = boolean_cover(n, rho, b, cache_dir=cfg.cache_dir)
    fp = FastParams.for_k(k, cfg.t, cache_dir=cfg.cache_dir)
    return cover, fp


def _codeword_task(args):
    f, word, radius, k, t, beta_mode = args
    fp = FastParams.for_k(k, t)
    gamma = tuple(s - 1 for s in word)
    witness, stats = searchball_fast(f, gamma, radius, fp, beta_mode=beta_mode)
    return witness, stats


def solve_deterministic(f: Formula, cfg: SolverConfig | None = None) -> SolveResult:
    """Covering-code outer loop around searchball_fast; never 'unknown'.

    Formulas of width <= 2 go straight to the exhaustive oracle (a dedicated
    2-SAT algorithm is out of scope here).
    """
    cfg = cfg or SolverConfig()
    start = time.perf_counter()
    k = f.max_width
    if k <= 2:
        result = brute_force(f)
        result.stats.wall_time = time.perf_counter() - start
        return result
    stats = SolveStats()
    if any(len(c) == 0 for c in f.clauses):
        stats.wall_time = time.perf_counter() - start
        return SolveResult("unsat", None, stats)
    cover, fp = _outer_cover_and_params(f, cfg)
    radius = cover.r
    witness = None
    if cfg.jobs > 1:
        tasks = [(f, w, radius, k, cfg.t, cfg.beta_mode) for w in cover.words]
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            pending = {pool.submit(_codeword_task, t) for t in tasks}
            while pending:
                done, pending = wait(pending, return_when=FIRST_COMPLETED)
                for fut in done:
                    res, sub = fut.result()
                    stats.codewords_tried += 1
                    stats.search.merge(sub)
                    if res is not None and witness is None:
                        witness = res
                if witness is not None:
                    for fut in pending:
                        fut.cancel()
                    break
    else:
        for word in cover.words:
            gamma = tuple(s - 1 for s in word)
            stats.codewords_tried += 1
            witness, _ = searchball_fast(
                f, gamma, radius, fp, beta_mode=cfg.beta_mode, stats=stats.search
            )
            if witness is not None:
                break
    stats.wall_time = time.perf_counter() - start
    if witness is not None:
        assert evaluate(f, witness)
        return SolveResult("sat", witness, stats)
    return SolveResult("unsat", None, stats)


def default_trial_cap(f: Formula) -> int:
    """ceil(20 * (2(k-1)/k)^n): about e^-20 failure odds on satisfiable
    inputs, hard-capped at 10^8."""
    k = max(f.max_width, 3)
    n = f.num_vars
    bound = 20.0 * (2.0 * (k - 1) / k) ** n
    if bound > RANDOM_TRIAL_HARD_CAP:
        return RANDOM_TRIAL_HARD_CAP
    return max(1, math.ceil(bound))


def solve_schoening(f: Formula, cfg: SolverConfig | None = None) -> SolveResult:
    """Randomized solver: repeat [uniform alpha; correction walk] up to
    trial_cap times. Returns 'unknown' on exhaustion, never 'unsat'."""
    cfg = cfg or SolverConfig(mode="randomized")
    start = time.perf_counter()
    if f.max_width <= 2:
        result = brute_force(f)
        result.stats.wall_time = time.perf_counter() - start
        return result
    n = f.num_vars
    cap = cfg.trial_cap if cfg.trial_cap is not None else default_trial_cap(f)
    stats = SolveStats()
    for trial in range(cap):
        rng = random.Random(f"schoening:{cfg.seed}:{trial}")
        alpha = tuple(rng.randint(0, 1) for _ in range(n))
        stats.trials += 1
        witness = schoening_walk(
            f, alpha, WalkParams(rng_seed=rng.getrandbits(64)), stats=stats.search
        )
        if witness is not None:
            assert evaluate(f, witness)
            stats.wall_time = time.perf_counter() - start
            return SolveResult("sat", witness, stats)
    stats.wall_time = time.perf_counter() - start
    return SolveResult("unknown", None, stats)


def solve(f: Formula, cfg: SolverConfig | None = None) -> SolveResult:
    """Dispatch on cfg.mode."""
    cfg = cfg or SolverConfig()
    if cfg.mode == "deterministic":
        return solve_deterministic(f, cfg)
    if cfg.mode == "randomized":
        return solve_schoening(f, cfg)
    return brute_force(f)
