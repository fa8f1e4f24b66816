"""Sieve tables, totient identities and partial sums."""

import math

import numpy as np
import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from lattice_scope.arith import (SIX_OVER_PI_SQUARED, divisor_sum_identity, divisors, factorize,
                                 mobius_square_sum, mobius_totient, primes_first, primorial,
                                 sieve_build, totient, totient_partial_sum, totient_prefix_sums)
from lattice_scope.errors import InvalidArgumentError, RangeError, WorkBudgetExceededError


def naive_phi(n):
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def test_sieve_limit_one():
    table = sieve_build(1)
    assert table.phi[1] == 1
    assert table.mu[1] == 1
    assert table.omega[1] == 0
    assert table.spf[1] == 1


def test_sieve_small_values():
    table = sieve_build(12)
    assert table.phi[10] == 4
    assert table.mu[10] == 1
    assert table.omega[10] == 2
    assert table.mu[12] == 0
    assert table.spf[12] == 2
    assert table.spf[11] == 11


@pytest.mark.parametrize('bad', [0, -3, 2.5, True])
def test_sieve_rejects_bad_limit(bad):
    with pytest.raises(InvalidArgumentError):
        sieve_build(bad)


def test_sieve_cap(monkeypatch):
    from lattice_scope import config
    monkeypatch.setitem(config.SCAN_CONFIG, 'sieve_cap', 100)
    with pytest.raises(WorkBudgetExceededError) as exc:
        sieve_build(101)
    assert exc.value.advisory


def test_table_is_read_only(small_table):
    with pytest.raises(ValueError):
        small_table.phi[5] = 0


def test_primes_match_sympy(small_table):
    primes = list(sympy.primerange(2, small_table.limit + 1))
    for p in primes:
        assert small_table.phi[p] == p - 1
        assert small_table.mu[p] == -1
        assert small_table.omega[p] == 1
        assert small_table.spf[p] == p


def test_against_sympy_tables(small_table):
    n = np.arange(1, 2001)
    assert small_table.phi[1:2001].tolist() == [int(sympy.totient(int(k))) for k in n]
    assert small_table.mu[1:2001].tolist() == [int(sympy.mobius(int(k))) for k in n]
    assert small_table.omega[1:2001].tolist() == [len(sympy.primefactors(int(k))) for k in n]


def test_identity_suite(small_table):
    failures = [n for n in range(1, small_table.limit + 1)
                if not divisor_sum_identity(n, small_table)
                or mobius_totient(n, small_table) != small_table.phi[n]]
    assert failures == []


@given(st.integers(1, 100), st.integers(1, 100))
def test_multiplicativity(small_table, a, b):
    assume(math.gcd(a, b) == 1)
    assert small_table.phi[a * b] == small_table.phi[a] * small_table.phi[b]


@pytest.mark.parametrize('n, expected', [(1, 1), (7, 6), (100, 40)])
def test_totient_examples(small_table, n, expected):
    assert totient(n, small_table) == expected
    assert naive_phi(n) == expected


@given(st.integers(1, 10**4))
def test_totient_product_formula_matches_sieve(small_table, n):
    assert totient(n, small_table) == small_table.phi[n]


def test_totient_out_of_range(small_table):
    with pytest.raises(RangeError):
        totient(small_table.limit + 1, small_table)
    with pytest.raises(RangeError):
        totient(0, small_table)


def test_factorize(small_table):
    assert factorize(360, small_table) == [2, 3, 5]
    assert factorize(1, small_table) == []
    assert factorize(9973, small_table) == [9973]


@pytest.mark.parametrize('x, expected', [(1, 1), (10, 32), (100, 3044)])
def test_partial_sum_examples(small_table, x, expected):
    report = totient_partial_sum(x, small_table)
    assert report.phi_sum == expected
    assert report.phi_sum == sum(naive_phi(k) for k in range(1, x + 1))


def test_partial_sum_main_term(small_table):
    report = totient_partial_sum(100, small_table)
    assert report.main_term == pytest.approx(3039.64, abs=0.01)
    assert report.abs_error == pytest.approx(abs(3044 - 3 * 100**2 / math.pi**2))


def test_normalized_error_undefined_at_one(small_table):
    assert totient_partial_sum(1, small_table).normalized_error is None
    assert math.isfinite(totient_partial_sum(2, small_table).normalized_error)


def test_average_order(mid_table):
    normalized = []
    for x in (10**2, 10**3, 10**4, 10**5):
        report = totient_partial_sum(x, mid_table)
        assert report.abs_error <= 2 * x * math.log(x)
        normalized.append(report.normalized_error)
    assert max(normalized) <= 2.0
    # no growth trend: the scaled error does not climb with x
    assert normalized != sorted(normalized)
    assert normalized[-1] < max(normalized)


def test_prefix_sums_monotone(small_table):
    sums = totient_prefix_sums(small_table)
    assert sums[10] == 32
    assert sums[100] == 3044
    assert np.all(np.diff(sums) >= 0)
    assert sums[small_table.limit] == totient_partial_sum(small_table.limit, small_table).phi_sum


@pytest.mark.parametrize('x', [1, 10, 1000, 10**4])
def test_mobius_square_sum_gap(small_table, x):
    report = mobius_square_sum(x, small_table)
    assert report.target == pytest.approx(SIX_OVER_PI_SQUARED)
    assert report.abs_gap <= 1 / x


def test_divisors():
    assert divisors(1) == [1]
    assert divisors(36) == [1, 2, 3, 4, 6, 9, 12, 18, 36]


@pytest.mark.parametrize('m, expected', [(1, [2]), (4, [2, 3, 5, 7])])
def test_primes_first_examples(m, expected):
    assert primes_first(m) == expected


def test_primes_first_25th_is_97():
    assert primes_first(25)[-1] == 97


@settings(max_examples=30)
@given(st.integers(1, 3000))
def test_primes_first_against_sympy(m):
    primes = primes_first(m)
    assert len(primes) == m
    assert primes[-1] == sympy.prime(m)
    assert all(sympy.isprime(p) for p in primes[-5:])


def test_primes_first_gaps_have_no_primes():
    primes = primes_first(1229)
    assert primes[-1] == 9973
    assert primes == list(sympy.primerange(2, 10**4))


def test_primorial():
    assert primorial(1) == 2
    assert primorial(4) == 210
    assert primorial(10) == 6469693230
    assert primorial(11) == 200560490130
