"""Planted-instance generation and node-count scaling experiments.

A planted instance fixes a satisfying assignment, samples clauses uniformly
among those it satisfies, and derives a start assignment at a known Hamming
distance: exactly the promise-ball setting with a ground-truth radius.

run_scaling sweeps the radius, records leaf/node counts per trial, and
fit_scaling regresses log(mean leaves) on r to estimate the empirical
exponential base per engine.
"""

from __future__ import annotations

import csv
import math
import random
import time
from dataclasses import dataclass, fields
from typing import Iterable, Sequence

from .cnf import Assignment, Formula, evaluate, hamming_distance
from .search import (
    FastParams,
    SearchStats,
    WalkParams,
    schoening_walk,
    searchball,
    searchball_fast,
)

ENGINES = ("searchball", "searchball_fast", "schoening_walk")

DEFAULT_N = 30
DEFAULT_CLAUSE_RATIO = 4.0


@dataclass(frozen=True)
class PlantedInstance:
    formula: Formula
    planted: Assignment
    start: Assignment
    r: int


def gen_planted(
    k: int,
    n: int,
    m: int,
    seed: int | str = 0,
    distance: int | None = None,
) -> PlantedInstance:
    """Sample a planted (<=k)-CNF promise instance.

    Clauses are width-k over distinct variables, rejection-sampled until
    satisfied by the planted assignment (uniform over such clauses). The
    start assignment flips a random `distance`-subset of variables; when
    distance is None each variable flips with probability 1/2.
    """
    if k < 1 or n < k:
        raise ValueError(f"need n >= k >= 1, got n={n}, k={k}")
    if distance is not None and not 0 <= distance <= n:
        raise ValueError(f"distance must lie in 0..{n}")
    rng = random.Random(f"plant:{seed}")
    planted = tuple(rng.randint(0, 1) for _ in range(n))
    clauses = []
    for _ in range(m):
        while True:
            variables = rng.sample(range(1, n + 1), k)
            clause = tuple(v if rng.randint(0, 1) else -v for v in variables)
            if any((planted[u - 1] == 1) if u > 0 else (planted[-u - 1] == 0) for u in clause):
                break
        clauses.append(clause)
    f = Formula(n, tuple(clauses))
    if distance is None:
        flip_set = [v for v in range(1, n + 1) if rng.randint(0, 1)]
    else:
        flip_set = rng.sample(range(1, n + 1), distance)
    start = list(planted)
    for v in flip_set:
        start[v - 1] = 1 - start[v - 1]
    start = tuple(start)
    inst = PlantedInstance(f, planted, start, hamming_distance(start, planted))
    assert evaluate(f, planted)
    return inst


@dataclass
class BenchRecord:
    engine: str
    k: int
    n: int
    m: int
    r: int
    t: int
    code_size: int
    trial: int
    leaves: int
    nodes: int
    wall_time: float
    outcome: str


CSV_COLUMNS = [f.name for f in fields(BenchRecord)]


def _run_one(
    engine: str, inst: PlantedInstance, t: int, fp: FastParams | None, seed: str
) -> BenchRecord:
    f, start, r = inst.formula, inst.start, inst.r
    stats = SearchStats()
    began = time.perf_counter()
    if engine == "searchball":
        witness, _ = searchball(f, start, r, stats=stats)
        assert stats.leaves <= f.max_width ** r, "searchball leaf envelope violated"
        code_size = 0
    elif engine == "searchball_fast":
        witness, _ = searchball_fast(f, start, r, fp, stats=stats)
        envelope = len(fp.code.words) ** math.ceil(r / fp.delta) if r else 1
        assert stats.leaves <= envelope, "searchball_fast leaf envelope violated"
        code_size = len(fp.code.words)
    elif engine == "schoening_walk":
        rng = random.Random(seed)
        witness = schoening_walk(f, start, WalkParams(rng_seed=rng.getrandbits(64)), stats=stats)
        code_size = 0
    else:
        raise ValueError(f"unknown engine {engine!r}")
    elapsed = time.perf_counter() - began
    return BenchRecord(
        engine=engine,
        k=f.max_width,
        n=f.num_vars,
        m=len(f.clauses),
        r=r,
        t=t,
        code_size=code_size,
        trial=0,
        leaves=stats.leaves,
        nodes=stats.recursion_nodes,
        wall_time=elapsed,
        outcome="sat" if witness is not None else "none",
    )


def run_scaling(
    engine: str,
    k: int,
    t: int,
    r_range: Sequence[int],
    trials: int,
    seed: int = 0,
    n: int | None = None,
    m: int | None = None,
) -> list[BenchRecord]:
    """One record per (r, trial) on fresh planted instances.

    Identical seeds give identical record streams; per-trial seeds are
    derived from (seed, r, trial) so trials are independent of ordering.
    """
    if engine not in ENGINES:
        raise ValueError(f"engine must be one of {ENGINES}")
    n = n if n is not None else DEFAULT_N
    m = m if m is not None else round(DEFAULT_CLAUSE_RATIO * n)
    fp = FastParams.for_k(k, t) if engine == "searchball_fast" else None
    records = []
    for r in r_range:
        if r > n:
            raise ValueError(f"radius {r} exceeds n={n}")
        for trial in range(trials):
            inst_seed = f"{seed}:{r}:{trial}"
            inst = gen_planted(k, n, m, seed=inst_seed, distance=r)
            record = _run_one(engine, inst, t, fp, seed=f"walk:{inst_seed}")
            record.trial = trial
            records.append(record)
    return records


@dataclass
class ScalingFit:
    """exp(slope) of the least-squares line through (r, log mean leaves),
    with a 95% confidence interval on the base."""

    engine: str
    base: float
    base_low: float
    base_high: float
    points: int


def fit_scaling(records: Iterable[BenchRecord]) -> ScalingFit:
    from scipy import stats as sps

    records = list(records)
    if not records:
        raise ValueError("no records to fit")
    engine = records[0].engine
    by_r: dict[int, list[int]] = {}
    for rec in records:
        by_r.setdefault(rec.r, []).append(max(rec.leaves, 1))
    if len(by_r) < 3:
        raise ValueError("need at least 3 distinct radii for a fit")
    xs = sorted(by_r)
    ys = [math.log(sum(by_r[r]) / len(by_r[r])) for r in xs]
    fit = sps.linregress(xs, ys)
    tq = sps.t.ppf(0.975, len(xs) - 2)
    return ScalingFit(
        engine=engine,
        base=math.exp(fit.slope),
        base_low=math.exp(fit.slope - tq * fit.stderr),
        base_high=math.exp(fit.slope + tq * fit.stderr),
        points=len(xs),
    )


def write_records_csv(records: Iterable[BenchRecord], path: str) -> None:
    """Fixed column order, one header row; records sorted by
    (engine, r, trial) so parallel runs canonicalize."""
    rows = sorted(records, key=lambda rec: (rec.engine, rec.r, rec.trial))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for rec in rows:
            writer.writerow([getattr(rec, col) for col in CSV_COLUMNS])
