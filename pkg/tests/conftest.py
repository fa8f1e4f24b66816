"""Shared sieve tables for the test suite."""

import pytest

from lattice_scope.arith import sieve_build


@pytest.fixture(scope='session')
def small_table():
    return sieve_build(10**4)


@pytest.fixture(scope='session')
def mid_table():
    return sieve_build(10**5)


@pytest.fixture(scope='session')
def big_table():
    return sieve_build(10**6)
