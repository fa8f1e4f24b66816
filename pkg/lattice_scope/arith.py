"""
Arithmetic Sieve - Euler totient, Mobius and omega tables
Bulk computation of phi, mu, omega and smallest prime factors up to a bound,
plus totient partial sums compared against the 3x^2/pi^2 main term.

All logarithms are natural. phi(1) = 1.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .config import SCAN_CONFIG
from .errors import InvalidArgumentError, RangeError, WorkBudgetExceededError

logger = logging.getLogger(__name__)

SIX_OVER_PI_SQUARED = 6.0 / math.pi ** 2
THREE_OVER_PI_SQUARED = 3.0 / math.pi ** 2

# Partial sums are accumulated in int64 blocks of this many terms, then
# folded into a Python int, so the running total never overflows.
_SUM_BLOCK = 1 << 20


@dataclass(frozen=True)
class SieveTable:
    """Per-integer arithmetic data for 1..limit.

    Arrays have length limit + 1 and are indexed by the integer itself;
    index 0 is unused. The arrays are read-only after construction.
    """
    limit: int
    spf: np.ndarray    # smallest prime factor, spf[1] = 1
    phi: np.ndarray
    mu: np.ndarray     # int8, values in {-1, 0, 1}
    omega: np.ndarray  # int8, number of distinct prime factors

    def check_index(self, n, name='n'):
        """Raise RangeError unless 1 <= n <= limit"""
        if n < 1 or n > self.limit:
            raise RangeError(f"{name}={n} outside sieve range 1..{self.limit}")


@dataclass(frozen=True)
class PartialSumReport:
    x: int
    phi_sum: int
    main_term: float
    abs_error: float
    normalized_error: Optional[float]  # undefined at x = 1 (ln 1 = 0)

    def to_dict(self):
        return {
            'x': self.x,
            'phi_sum': self.phi_sum,
            'main_term': self.main_term,
            'abs_error': self.abs_error,
            'normalized_error': self.normalized_error,
        }


@dataclass(frozen=True)
class MobiusSumReport:
    x: int
    value: float
    target: float
    abs_gap: float

    def to_dict(self):
        return {'x': self.x, 'value': self.value, 'target': self.target, 'abs_gap': self.abs_gap}


def _require_positive_int(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise InvalidArgumentError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def _eratosthenes(bound):
    """Primes <= bound as an int64 array"""
    if bound < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(bound + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(bound) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def sieve_build(limit: int) -> SieveTable:
    """Build spf, phi, mu and omega for 1..limit in one pass over the primes"""
    limit = _require_positive_int(limit, 'limit')
    if limit > SCAN_CONFIG['sieve_cap']:
        raise WorkBudgetExceededError(
            f"sieve limit {limit} exceeds cap {SCAN_CONFIG['sieve_cap']}",
            advisory="raise LATTICE_SCOPE_SIEVE_CAP if memory allows",
        )

    dtype = np.int32 if limit < 2**31 else np.int64
    spf = np.zeros(limit + 1, dtype=dtype)
    phi = np.arange(limit + 1, dtype=dtype)
    mu = np.ones(limit + 1, dtype=np.int8)
    omega = np.zeros(limit + 1, dtype=np.int8)
    mu[0] = 0

    primes = _eratosthenes(limit)
    root = math.isqrt(limit)
    logger.debug(f"Sieving {limit} with {len(primes)} primes")

    for p in primes.tolist():
        multiples = slice(p, limit + 1, p)
        if p <= root:
            block = spf[multiples]
            block[block == 0] = p
            mu[p * p::p * p] = 0
        # phi[m] is still divisible by p here: only smaller primes were removed
        phi[multiples] -= phi[multiples] // p
        mu[multiples] *= -1
        omega[multiples] += 1

    # whatever is still unmarked above 1 is prime
    unmarked = np.flatnonzero(spf == 0)
    spf[unmarked] = unmarked.astype(dtype)
    spf[0] = 0
    spf[1] = 1

    for arr in (spf, phi, mu, omega):
        arr.flags.writeable = False

    logger.info(f"Built sieve table up to {limit}")
    return SieveTable(limit=limit, spf=spf, phi=phi, mu=mu, omega=omega)


def factorize(n: int, table: SieveTable) -> List[int]:
    """Distinct prime factors of n, ascending, read off the spf chain"""
    table.check_index(n)
    factors = []
    m = n
    while m > 1:
        p = int(table.spf[m])
        factors.append(p)
        while m % p == 0:
            m //= p
    return factors


def totient(n: int, table: SieveTable) -> int:
    """phi(n) from the product formula n * prod(1 - 1/p)"""
    result = n
    for p in factorize(n, table):
        result -= result // p
    return result


def _exact_prefix_sum(values, count):
    total = 0
    for start in range(0, count, _SUM_BLOCK):
        total += int(values[start:min(start + _SUM_BLOCK, count)].sum(dtype=np.int64))
    return total


def totient_partial_sum(x: int, table: SieveTable) -> PartialSumReport:
    """Exact Phi(x) = sum_{n<=x} phi(n) against the main term 3x^2/pi^2"""
    table.check_index(x, 'x')
    phi_sum = _exact_prefix_sum(table.phi[1:], x)
    main_term = THREE_OVER_PI_SQUARED * x * x
    abs_error = abs(phi_sum - main_term)
    normalized = abs_error / (x * math.log(x)) if x >= 2 else None
    return PartialSumReport(x=x, phi_sum=phi_sum, main_term=main_term,
                            abs_error=abs_error, normalized_error=normalized)


def totient_prefix_sums(table: SieveTable) -> np.ndarray:
    """Cumulative Phi(0..limit) as int64 (exact while Phi fits in 63 bits)"""
    return np.cumsum(table.phi, dtype=np.int64)


def mobius_square_sum(x: int, table: SieveTable) -> MobiusSumReport:
    """Truncated sum of mu(n)/n^2, which tends to 6/pi^2 with error below 1/x"""
    table.check_index(x, 'x')
    n = np.arange(1, x + 1, dtype=np.float64)
    value = float(np.sum(table.mu[1:x + 1] / (n * n)))
    return MobiusSumReport(x=x, value=value, target=SIX_OVER_PI_SQUARED,
                           abs_gap=abs(value - SIX_OVER_PI_SQUARED))


def divisors(n: int) -> List[int]:
    """All positive divisors of n, ascending"""
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def divisor_sum_identity(n: int, table: SieveTable) -> bool:
    """True when sum_{d|n} phi(d) == n"""
    table.check_index(n)
    return sum(int(table.phi[d]) for d in divisors(n)) == n


def mobius_totient(n: int, table: SieveTable) -> int:
    """phi(n) via sum_{d|n} mu(d) * (n/d)"""
    table.check_index(n)
    return sum(int(table.mu[d]) * (n // d) for d in divisors(n))


def _prime_count_bound(m):
    # p_m < m (ln m + ln ln m) for m >= 6
    if m < 6:
        return 15
    return int(m * (math.log(m) + math.log(math.log(m)))) + 3


def primes_first(m: int) -> List[int]:
    """The first m primes, sieving with a growing bound until enough are found"""
    m = _require_positive_int(m, 'm')
    bound = _prime_count_bound(m)
    while True:
        primes = _eratosthenes(bound)
        if len(primes) >= m:
            return primes[:m].tolist()
        logger.debug(f"Only {len(primes)} primes below {bound}, doubling bound")
        bound *= 2


def primorial(m: int) -> int:
    """Product of the first m primes (the least integer with m distinct prime factors)"""
    return math.prod(primes_first(m))
