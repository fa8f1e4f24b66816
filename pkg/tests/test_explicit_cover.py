"""Explicit cover plans, exceptional points and the omega inequality."""

import hashlib
import math

import pytest

from lattice_scope.errors import (CoprimePairNotFoundError, InvalidArgumentError, RangeError,
                                  WorkBudgetExceededError)
from lattice_scope.explicit_cover import (build_plan, cardinality_bound, coprime_pair_find,
                                          corollary_configs, en_g, en_g_empty_by_primorial,
                                          exceptional_scan, explicit_cover_solution,
                                          hardy_ramanujan_check,
                                          least_with_omega, omega_inequality_check, plan_parameters,
                                          sampled_exceptional_estimate)


def loglog_g(n):
    return 2 * math.log(math.log(n))


def naive_exceptional(plan):
    """Points of A_n with no point of B_n in sight, by plain double loop"""
    count = 0
    for x in range(plan.n + 1):
        for y in range(plan.n + 1):
            if not any(math.gcd(abs(x - p.x), abs(y - p.y)) == 1 for p in plan.b_n):
                count += 1
    return count


@pytest.fixture(scope='module')
def toy_plan(small_table):
    return build_plan(500, loglog_g(500), small_table)


@pytest.fixture(scope='module')
def plan_10k(small_table):
    return build_plan(10**4, loglog_g(10**4), small_table)


def test_en_g_examples(small_table):
    assert en_g(10, 1, small_table) == tuple(range(2, 11))
    assert en_g(30, 3, small_table) == (30,)
    assert en_g(100, 4, small_table) == ()


def test_en_g_range(small_table):
    with pytest.raises(RangeError):
        en_g(small_table.limit + 1, 2, small_table)
    with pytest.raises(InvalidArgumentError):
        en_g(10, 0, small_table)


def test_least_with_omega(small_table):
    for k in range(1, 5):
        least = least_with_omega(k)
        assert small_table.omega[least] == k
        assert all(small_table.omega[m] < k for m in range(1, least))


def test_plan_parameters_10k(plan_10k):
    assert (plan_10k.s, plan_10k.t, plan_10k.t0) == (44, 3, 1)
    assert plan_10k.g_value == pytest.approx(4.44, abs=0.01)


@pytest.mark.parametrize('g', [3.1, 4.4, 9.4, 25.0, 1000.0])
def test_plan_parameter_invariants(g):
    s, t, t0 = plan_parameters(g)
    assert s >= 1 and t >= 1
    assert 1 <= t0 <= t
    assert t0 == t // 10 + 1


def test_plan_invariants(plan_10k, toy_plan):
    for plan in (plan_10k, toy_plan):
        assert plan.t0 * len(plan.index_set) <= len(plan.en_g)
        for i, ys in plan.y_sets.items():
            if i not in plan.index_set:
                assert len(ys) < plan.t0
            assert all(0 <= y < plan.t for y in ys)
        assert len(plan.b_n) <= 8 * plan.s * plan.t
        assert all(0 <= p.x <= plan.n and 0 <= p.y <= plan.n for p in plan.b_n)


def test_toy_plan_sets(toy_plan):
    assert toy_plan.en_g == (210, 330, 390, 420, 462)
    assert (toy_plan.s, toy_plan.t, toy_plan.t0) == (36, 2, 1)
    assert toy_plan.index_set == (105, 165, 195, 210, 231)
    assert toy_plan.y_set(105) == frozenset({0})
    assert toy_plan.y_set(1) == frozenset()
    assert len(toy_plan.b_n) == 2 * 4 * 72 - 16


def test_offsets_outside_index_set_avoid_e(toy_plan, small_table):
    plan = toy_plan
    for i in range(1, plan.n // plan.t + 1):
        if i in plan.index_set:
            continue
        for a in range(1, plan.t):
            if a not in plan.y_set(i):
                assert small_table.omega[i * plan.t - a] < plan.g_value


def test_plan_rejects_small_g(small_table):
    with pytest.raises(InvalidArgumentError, match='too small'):
        build_plan(10**4, 3.0, small_table)


def test_plan_rejects_small_n(small_table):
    with pytest.raises(InvalidArgumentError):
        build_plan(100, loglog_g(10**4), small_table)


def test_empty_e_for_second_configuration(mid_table):
    n = 10**5
    g = 2 * math.log(n) / math.log(math.log(n))
    assert g == pytest.approx(9.42, abs=0.01)
    assert en_g(n, g, mid_table) == ()
    assert en_g_empty_by_primorial(n, g)


def test_plan_serialization(toy_plan, monkeypatch):
    record = toy_plan.to_dict()
    assert record['en_g'] == [210, 330, 390, 420, 462]
    assert record['y_sets']['105'] == [0]
    assert record['b_n_size'] == len(toy_plan.b_n)

    from lattice_scope import config
    monkeypatch.setitem(config.OUTPUT_CONFIG, 'plan_member_limit', 2)
    digested = toy_plan.to_dict()
    assert 'en_g' not in digested
    assert digested['en_g_size'] == 5
    assert digested['en_g_digest'] == hashlib.sha256(b'210,330,390,420,462').hexdigest()


def test_coprime_pair_first_block(plan_10k):
    a, b = coprime_pair_find(1, 1, plan_10k)
    assert (a, b) == (1, 1)
    assert math.gcd(plan_10k.t - a, plan_10k.s - b) == 1


@pytest.mark.parametrize('i, j', [(1, 1), (7, 3), (500, 200), (3333, 227)])
def test_coprime_pair_is_lexicographically_first(plan_10k, i, j):
    plan = plan_10k
    a, b = coprime_pair_find(i, j, plan)
    assert a not in plan.y_set(i)
    assert math.gcd(i * plan.t - a, j * plan.s - b) == 1
    earlier = [(a2, b2) for a2 in range(1, plan.t + 1) for b2 in range(1, plan.s + 1)
               if (a2, b2) < (a, b) and a2 not in plan.y_set(i)]
    assert all(math.gcd(i * plan.t - a2, j * plan.s - b2) != 1 for a2, b2 in earlier)


def test_coprime_pair_preconditions(plan_10k):
    i_in_index_set = plan_10k.index_set[0]
    with pytest.raises(InvalidArgumentError):
        coprime_pair_find(i_in_index_set, 1, plan_10k)
    with pytest.raises(InvalidArgumentError):
        coprime_pair_find(0, 1, plan_10k)
    with pytest.raises(InvalidArgumentError):
        coprime_pair_find(1, plan_10k.n // plan_10k.s + 1, plan_10k)


def test_coprime_pair_not_found_is_a_signal():
    error = CoprimePairNotFoundError(4, 5)
    assert (error.i, error.j) == (4, 5)
    assert 'below' in str(error)


def test_toy_scan_matches_naive_recount(toy_plan):
    report = exceptional_scan(toy_plan)
    assert report.exceptional_count == naive_exceptional(toy_plan)
    assert report.bound_proof == 100 * 25
    assert report.bound_theorem_statement == 500
    assert report.passed_proof_bound == (report.exceptional_count <= 2500)
    assert report.passed_rectangle_bound
    assert report.passed_cardinality_bound


def test_explicit_solution_agrees_with_scan(small_table):
    plan = build_plan(100, loglog_g(500), small_table)
    solution = explicit_cover_solution(plan)
    report = exceptional_scan(plan)
    assert solution.method == 'explicit'
    assert solution.covered == 101 ** 2 - report.exceptional_count
    assert solution.complete == (report.exceptional_count == 0)


def test_explicit_solution_budget(toy_plan):
    with pytest.raises(WorkBudgetExceededError):
        explicit_cover_solution(toy_plan, budget=10**6)


def test_scan_2000(small_table):
    plan = build_plan(2000, loglog_g(2000), small_table)
    assert (plan.s, plan.t) == (40, 3)
    report = exceptional_scan(plan)
    assert report.exceptional_count <= 100 * len(plan.en_g) ** 2
    assert report.passed_proof_bound
    assert report.passed_rectangle_bound
    assert len(plan.b_n) <= 8 * plan.s * plan.t
    assert report.passed_cardinality_bound
    # nothing below 2001 has five distinct prime factors
    assert plan.en_g == ()
    assert report.exceptional_count == 0


def test_scan_budget(toy_plan):
    with pytest.raises(WorkBudgetExceededError) as exc:
        exceptional_scan(toy_plan, budget=1000)
    assert 'sampled_exceptional_estimate' in exc.value.advisory


def test_report_serialization(toy_plan):
    record = exceptional_scan(toy_plan).to_dict()
    assert record['n'] == 500
    assert record['en_g_size'] == 5
    for key in ('exceptional_count', 'bound_proof', 'bound_theorem_statement', 'cardinality_bound',
                'passed_proof_bound', 'passed_statement_bound', 'passed_rectangle_bound',
                'passed_cardinality_bound'):
        assert key in record


def test_sample_zero_when_fully_visible(small_table):
    plan = build_plan(2000, loglog_g(2000), small_table)
    estimate = sampled_exceptional_estimate(plan, 5000, seed=7)
    assert estimate.hits == 0
    assert estimate.fraction == 0.0
    assert estimate.ci_low == pytest.approx(0.0, abs=1e-12)
    assert 0 < estimate.ci_high < 0.01


def test_sample_is_deterministic(plan_10k):
    first = sampled_exceptional_estimate(plan_10k, 2000, seed=11)
    second = sampled_exceptional_estimate(plan_10k, 2000, seed=11)
    assert first == second
    assert first.fraction <= 100 / math.log(math.log(10**4)) ** 2 + (first.ci_high - first.fraction)


def test_sample_size_floor(plan_10k):
    with pytest.raises(InvalidArgumentError):
        sampled_exceptional_estimate(plan_10k, 999, seed=0)


def test_second_configuration_at_a_million(big_table):
    n = 10**6
    _, second = corollary_configs(n)
    assert second.en_g_empty_expected
    plan = build_plan(n, second.g_value, big_table)
    assert plan.en_g == ()
    assert (plan.s, plan.t) == (105, 8)
    estimate = sampled_exceptional_estimate(plan, 10**5, seed=1)
    assert estimate.hits == 0


def test_scan_refuses_a_million(big_table):
    _, second = corollary_configs(10**6)
    plan = build_plan(10**6, second.g_value, big_table)
    with pytest.raises(WorkBudgetExceededError):
        exceptional_scan(plan)


@pytest.mark.parametrize('limit', [16, 10**4])
def test_omega_inequality_small(small_table, limit):
    assert omega_inequality_check(limit, small_table) == []


def test_omega_inequality_million(big_table):
    assert omega_inequality_check(10**6, big_table) == []


def test_omega_inequality_below_start(small_table):
    assert omega_inequality_check(10, small_table) == []


@pytest.mark.parametrize('n', [10**3, 10**4, 10**5, 10**6])
def test_hardy_ramanujan(big_table, n):
    check = hardy_ramanujan_check(n, big_table)
    assert check.passed
    assert check.count == len(en_g(n, loglog_g(n), big_table))


def test_corollary_configs():
    first, second = corollary_configs(10**4)
    assert first.g_value == pytest.approx(4.44, abs=0.01)
    assert second.g_value == pytest.approx(8.30, abs=0.01)
    assert second.exceptional_bound == 0.0
    _, at_million = corollary_configs(10**6)
    assert at_million.g_value == pytest.approx(10.52, abs=0.02)
    assert least_with_omega(11) > 10**6
    with pytest.raises(RangeError):
        corollary_configs(15)


def test_corollary_cardinality_estimates():
    first, second = corollary_configs(10**4)
    assert first.cardinality_estimate == pytest.approx(800 * first.g_value * math.log(math.log(first.g_value)))
    assert first.cardinality_estimate > 0
    assert second.cardinality_estimate > first.cardinality_estimate
    assert corollary_configs(10**6)[0].cardinality_estimate > 0
    # 2 ln ln 16 is below the smallest g with a plan
    assert corollary_configs(16)[0].cardinality_estimate is None


@pytest.mark.parametrize('n', [500, 2000, 10**4])
def test_b_n_within_cardinality_bound(small_table, n):
    plan = build_plan(n, loglog_g(n), small_table)
    assert len(plan.b_n) <= cardinality_bound(plan.g_value)


@pytest.mark.parametrize('g', [3.05, 3.5, 4.4, 9.4, 25.0, 1000.0])
def test_rectangle_bound_within_cardinality_bound(g):
    s, t, _ = plan_parameters(g)
    assert 8 * s * t <= cardinality_bound(g)


def test_cardinality_bound_undefined_without_plan():
    assert cardinality_bound(3.0) is None
    assert cardinality_bound(2.04) is None


@pytest.mark.parametrize('g', [math.inf, -math.inf, math.nan, 0.0, -1.0])
def test_non_finite_g_rejected(small_table, g):
    with pytest.raises(InvalidArgumentError):
        plan_parameters(g)
    with pytest.raises(InvalidArgumentError):
        build_plan(100, g, small_table)
    with pytest.raises(InvalidArgumentError):
        en_g(100, g, small_table)
