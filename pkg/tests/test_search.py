import math
import random

import pytest

from coversat.cnf import evaluate, formula, hamming_distance, restrict
from coversat.codes import word_distance
from coversat.search import (
    FastParams,
    SearchStats,
    WalkParams,
    apply_codeword,
    maximal_disjoint_unsat,
    schoening_walk,
    searchball,
    searchball_fast,
)

from helpers import rand_assignment, rand_kcnf, sat_in_ball


@pytest.fixture(scope="module")
def fp6():
    return FastParams.for_k(3, 6)


@pytest.fixture(scope="module")
def fp3():
    return FastParams.for_k(3, 3)


class TestSchoeningWalk:
    def test_returns_satisfying_start_untouched(self):
        f = formula(2, [[1, 2]])
        assert schoening_walk(f, (1, 0), WalkParams(rng_seed=0)) == (1, 0)

    def test_forced_flip_on_unit_clause(self):
        # the only literal of the only unsatisfied clause must be flipped
        assert schoening_walk(formula(1, [[1]]), (0,), WalkParams(rng_seed=5)) == (1,)

    def test_gives_up_on_unsatisfiable(self):
        f = formula(1, [[1], [-1]])
        assert schoening_walk(f, (0,), WalkParams(rng_seed=1)) is None

    def test_step_budget_respected(self):
        f = formula(4, [[1], [2], [3], [4]])
        stats = SearchStats()
        schoening_walk(f, (0, 0, 0, 0), WalkParams(max_steps=2, rng_seed=0), stats=stats)
        assert stats.recursion_nodes == 2

    def test_success_rate_meets_promise_bound(self):
        # unique satisfying assignment all-ones at distance 2 from the start;
        # per-call bound is (k-1)^-r = 1/4 for k=3, r=2
        clauses = []
        for a in range(2):
            for b in range(2):
                for c in range(2):
                    if (a, b, c) != (1, 1, 1):
                        clauses.append(
                            [v if bit == 0 else -v for v, bit in zip((1, 2, 3), (a, b, c))]
                        )
        f = formula(3, clauses)
        assert evaluate(f, (1, 1, 1))
        start = (1, 0, 0)
        hits = 0
        trials = 4000
        for i in range(trials):
            if schoening_walk(f, start, WalkParams(rng_seed=i)) is not None:
                hits += 1
        # Wilson-style slack: expect >= 0.8 * 0.25 even with sampling noise
        assert hits / trials >= 0.8 * 0.25

    def test_walk_result_always_satisfies(self):
        rng = random.Random(8)
        for i in range(100):
            f = rand_kcnf(rng, 6, 10)
            res = schoening_walk(f, rand_assignment(rng, 6), WalkParams(rng_seed=i))
            if res is not None:
                assert evaluate(f, res)


class TestSearchball:
    def test_satisfied_immediately(self):
        f = formula(2, [[1, 2]])
        w, stats = searchball(f, (1, 0), 0)
        assert w == (1, 0)
        assert stats.recursion_nodes == 1

    def test_radius_zero_fails(self):
        w, _ = searchball(formula(1, [[1]]), (0,), 0)
        assert w is None

    def test_radius_one_example(self):
        f = formula(3, [[1, 2, 3], [-1], [-2]])
        w, _ = searchball(f, (0, 0, 0), 1)
        assert w == (0, 0, 1)

    def test_node_count_envelope(self):
        rng = random.Random(21)
        for _ in range(100):
            n = rng.randint(3, 8)
            f = rand_kcnf(rng, n, rng.randint(1, 12), k=3)
            alpha = rand_assignment(rng, n)
            r = rng.randint(0, n)
            _, stats = searchball(f, alpha, r)
            assert stats.leaves <= 3**r
            assert stats.recursion_nodes <= sum(3**i for i in range(r + 1))
            assert stats.leaves <= stats.recursion_nodes
            assert stats.max_depth <= r

    def test_promise_completeness_against_ball_oracle(self):
        rng = random.Random(33)
        checked = 0
        for _ in range(150):
            n = rng.randint(3, 7)
            f = rand_kcnf(rng, n, rng.randint(2, 10), k=3)
            alpha = rand_assignment(rng, n)
            for r in range(n + 1):
                oracle = sat_in_ball(f, alpha, r)
                w, _ = searchball(f, alpha, r)
                if oracle is not None:
                    assert w is not None, (f, alpha, r)
                    checked += 1
                if w is not None:
                    assert evaluate(f, w)
        assert checked > 100

    def test_forced_prefix_behaves_like_restriction(self):
        rng = random.Random(55)
        for _ in range(80):
            n = rng.randint(3, 6)
            f = rand_kcnf(rng, n, rng.randint(1, 8), k=3)
            alpha = rand_assignment(rng, n)
            domain = rng.sample(range(1, n + 1), rng.randint(1, n - 1))
            beta = {v: rng.randint(0, 1) for v in domain}
            r = rng.randint(0, n)
            w, _ = searchball(f, alpha, r, forced=beta)
            g = restrict(f, beta)
            w2, _ = searchball(g, tuple(beta.get(v + 1, alpha[v]) for v in range(n)), r)
            assert (w is None) == (w2 is None)
            if w is not None:
                assert evaluate(f, w)
                assert all(w[v - 1] == bit for v, bit in beta.items())


class TestMaximalDisjointUnsat:
    def test_satisfied_formula_empty(self):
        f = formula(3, [[1, 2, 3]])
        assert maximal_disjoint_unsat(f, (1, 0, 0), 3) == []

    def test_greedy_scan_order(self):
        f = formula(8, [[1, 2, 3], [3, 4, 5], [6, 7, 8]])
        g = maximal_disjoint_unsat(f, (0,) * 8, 3)
        assert g == [(1, 2, 3), (6, 7, 8)]

    def test_only_width_exactly_k(self):
        f = formula(4, [[1, 2], [3], [-4]])
        assert maximal_disjoint_unsat(f, (0, 0, 0, 1), 3) == []

    def test_maximality_at_variable_level(self):
        rng = random.Random(60)
        for _ in range(120):
            n = rng.randint(4, 10)
            f = rand_kcnf(rng, n, rng.randint(1, 14), k=3)
            alpha = rand_assignment(rng, n)
            g = maximal_disjoint_unsat(f, alpha, 3)
            chosen_vars = {abs(u) for c in g for u in c}
            assert len(chosen_vars) == 3 * len(g)  # pairwise variable-disjoint
            for clause in f.clauses:
                if len(clause) == 3 and not evaluate(formula(n, [clause]), alpha):
                    assert any(abs(u) in chosen_vars for u in clause)


class TestApplyCodeword:
    def test_worked_example_three_triples(self):
        # alpha all-0, H = {(x1 v y1 v z1), (x2 v y2 v z2), (x3 v y3 v z3)},
        # w = (2,3,3) flips y1, z2, z3
        h = [(1, 4, 7), (2, 5, 8), (3, 6, 9)]
        alpha = (0,) * 9
        moved = apply_codeword(alpha, h, (2, 3, 3))
        # flips y1 (var 4), z2 (var 8), z3 (var 9)
        assert moved == (0, 0, 0, 1, 0, 0, 0, 1, 1)

    def test_all_ones_flips_first_literals(self):
        h = [(1, 2, 3), (4, 5, 6)]
        assert apply_codeword((0,) * 6, h, (1, 1)) == (1, 0, 0, 1, 0, 0)

    def test_distance_moved_is_t(self):
        rng = random.Random(3)
        for _ in range(50):
            alpha = rand_assignment(rng, 12)
            h = []
            for i in range(4):
                vs = (3 * i + 1, 3 * i + 2, 3 * i + 3)
                h.append(tuple(v if alpha[v - 1] == 0 else -v for v in vs))
            w = tuple(rng.randint(1, 3) for _ in range(4))
            moved = apply_codeword(alpha, h, w)
            assert hamming_distance(alpha, moved) == 4

    def test_symbol_exceeding_clause_width(self):
        with pytest.raises(ValueError, match="width"):
            apply_codeword((0, 0), [(1, 2)], (3,))

    def test_overlapping_clauses_rejected(self):
        with pytest.raises(ValueError, match="disjoint"):
            apply_codeword((0, 0, 0), [(1, 2), (2, 3)], (1, 1))

    def test_satisfied_clause_rejected(self):
        with pytest.raises(ValueError, match="unsatisfied"):
            apply_codeword((1, 0), [(1, 2)], (1,))


class TestSearchballFast:
    def test_satisfied_immediately(self, fp6):
        f = formula(2, [[1, -2]])
        w, stats = searchball_fast(f, (1, 1), 5, fp6)
        assert w == (1, 1)
        assert stats.recursion_nodes == 1

    def test_many_disjoint_clauses_below_t_is_unreachable(self, fp3):
        # 3 variable-disjoint unsatisfied clauses force distance >= 3 > r = 2
        f = formula(9, [[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        w, stats = searchball_fast(f, (0,) * 9, 2, fp3)
        assert w is None
        assert stats.recursion_nodes == 1  # pruned at the root

    def test_promise_completeness_both_block_sizes(self, fp3, fp6):
        rng = random.Random(44)
        checked = 0
        for _ in range(120):
            n = rng.randint(3, 7)
            f = rand_kcnf(rng, n, rng.randint(2, 10), k=3)
            alpha = rand_assignment(rng, n)
            for r in range(n + 1):
                oracle = sat_in_ball(f, alpha, r)
                for fp in (fp3, fp6):
                    w, _ = searchball_fast(f, alpha, r, fp)
                    if oracle is not None:
                        assert w is not None, (f, alpha, r, fp.t)
                        checked += 1
                    if w is not None:
                        assert evaluate(f, w)
        assert checked > 200

    def test_beta_modes_agree(self, fp3):
        rng = random.Random(50)
        for _ in range(60):
            n = rng.randint(3, 6)
            f = rand_kcnf(rng, n, rng.randint(1, 8), k=3)
            alpha = rand_assignment(rng, n)
            r = rng.randint(0, n)
            w_skip, _ = searchball_fast(f, alpha, r, fp3, beta_mode="skip")
            w_full, _ = searchball_fast(f, alpha, r, fp3, beta_mode="full")
            assert (w_skip is None) == (w_full is None)

    def test_leaf_envelope(self, fp6):
        from coversat.bench import gen_planted

        for trial in range(25):
            inst = gen_planted(3, 24, 96, seed=f"env:{trial}", distance=trial % 12)
            w, stats = searchball_fast(inst.formula, inst.start, inst.r, fp6, stats=SearchStats())
            assert w is not None
            bound = len(fp6.code.words) ** math.ceil(inst.r / fp6.delta) if inst.r else 1
            assert stats.leaves <= bound
            assert stats.leaves <= stats.recursion_nodes

    def test_width_above_code_alphabet_rejected(self, fp3):
        f = formula(4, [[1, 2, 3, 4]])
        with pytest.raises(ValueError):
            searchball_fast(f, (0, 0, 0, 0), 1, fp3)

    def test_bad_beta_mode(self, fp3):
        with pytest.raises(ValueError):
            searchball_fast(formula(1, [[1]]), (0,), 1, fp3, beta_mode="nope")


class TestRestrictionBranchingDrop:
    def test_after_fixing_g_all_unsat_clauses_shrink(self):
        # fixing every variable of a maximal disjoint set leaves no
        # unsatisfied width-k clause, so searchball branches at most k-1 ways
        rng = random.Random(70)
        for _ in range(80):
            n = rng.randint(4, 9)
            f = rand_kcnf(rng, n, rng.randint(2, 12), k=3)
            alpha = rand_assignment(rng, n)
            g = maximal_disjoint_unsat(f, alpha, 3)
            g_vars = [abs(u) for c in g for u in c]
            beta = {v: rng.randint(0, 1) for v in g_vars}
            restricted = restrict(f, beta)
            for clause in restricted.clauses:
                merged = tuple(beta.get(v, alpha[v - 1]) for v in range(1, n + 1))
                if not evaluate(formula(n, [clause]), merged):
                    assert len(clause) <= 2

    def test_shrunken_width_gives_k_minus_1_leaf_envelope(self):
        # every clause width <= 2: searchball explores <= 2^r leaves
        rng = random.Random(71)
        for _ in range(60):
            n = rng.randint(3, 8)
            f = rand_kcnf(rng, n, rng.randint(1, 10), k=2)
            alpha = rand_assignment(rng, n)
            r = rng.randint(0, n)
            _, stats = searchball(f, alpha, r)
            assert stats.leaves <= 2**r


class TestDistanceProgress:
    def test_codeword_near_target_guarantees_progress(self, fp6):
        # white-box check of the per-level distance argument
        rng = random.Random(90)
        code = fp6.code
        t, k = fp6.t, 3
        progress = t - 2 * math.ceil(t / k)
        for _ in range(60):
            n = 24
            alpha = rand_assignment(rng, n)
            h = []
            flips = set()
            for i in range(t):
                vs = (3 * i + 1, 3 * i + 2, 3 * i + 3)
                h.append(tuple(v if alpha[v - 1] == 0 else -v for v in vs))
                for v in rng.sample(vs, rng.randint(1, 3)):
                    flips.add(v)
            for v in rng.sample(range(3 * t + 1, n + 1), rng.randint(0, 3)):
                flips.add(v)
            star = tuple(1 - a if v + 1 in flips else a for v, a in enumerate(alpha))
            w_star = []
            for clause in h:
                sat_positions = [
                    j + 1
                    for j, u in enumerate(clause)
                    if ((star[u - 1] == 1) if u > 0 else (star[-u - 1] == 0))
                ]
                assert sat_positions
                w_star.append(rng.choice(sat_positions))
            w_star = tuple(w_star)
            nearest = min(code.words, key=lambda w: (word_distance(w, w_star), w))
            assert word_distance(nearest, w_star) <= code.r
            moved = apply_codeword(alpha, h, nearest)
            assert hamming_distance(moved, star) <= hamming_distance(alpha, star) - progress
