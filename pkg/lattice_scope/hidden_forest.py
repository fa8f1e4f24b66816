"""
Hidden Forests - k x k blocks invisible from the origin
Builds the corner of a fully hidden block with the Chinese remainder theorem
(rows and columns of a prime matrix as moduli), verifies it with big-integer
gcds, and searches for the earliest hidden block by direct scan.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .arith import primes_first
from .config import SCAN_CONFIG
from .errors import InvalidArgumentError, LatticeScopeError, WorkBudgetExceededError
from .visibility import LatticePoint

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CrtSystem:
    """x = residues[i] (mod moduli[i]) for every i"""
    residues: Tuple[int, ...]
    moduli: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'residues', tuple(int(r) for r in self.residues))
        object.__setattr__(self, 'moduli', tuple(int(m) for m in self.moduli))


@dataclass(frozen=True)
class PrimeMatrix:
    rows: Tuple[Tuple[int, ...], ...]
    row_products: Tuple[int, ...]     # d_i
    column_products: Tuple[int, ...]  # D_j


@dataclass(frozen=True)
class HiddenGridWitness:
    k: int
    a: int
    b: int
    modulus: int
    verified: bool

    def to_dict(self):
        return {
            'k': self.k,
            'a': str(self.a),
            'b': str(self.b),
            'modulus': str(self.modulus),
            'verified': self.verified,
        }


def extended_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b)"""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _check_system(system):
    if not system.moduli:
        raise InvalidArgumentError("CRT system has no congruences")
    if len(system.residues) != len(system.moduli):
        raise InvalidArgumentError(
            f"{len(system.residues)} residues for {len(system.moduli)} moduli")
    for m in system.moduli:
        if m < 2:
            raise InvalidArgumentError(f"modulus {m} must be >= 2")
    for i, mi in enumerate(system.moduli):
        for j in range(i + 1, len(system.moduli)):
            mj = system.moduli[j]
            if math.gcd(mi, mj) != 1:
                raise InvalidArgumentError(
                    f"moduli {mi} (#{i}) and {mj} (#{j}) share factor {math.gcd(mi, mj)}")


def crt_solve(system: CrtSystem) -> Tuple[int, int]:
    """Least non-negative solution and the product modulus, by pairwise merging"""
    _check_system(system)
    x, modulus = system.residues[0] % system.moduli[0], system.moduli[0]
    for residue, m in zip(system.residues[1:], system.moduli[1:]):
        _, s, _ = extended_gcd(modulus, m)
        # s * modulus = 1 (mod m), so the step lands on residue mod m
        x = x + modulus * ((residue - x) * s % m)
        modulus *= m
        x %= modulus
        logger.debug(f"CRT merge: modulus now has {modulus.bit_length()} bits")
    return x, modulus


def prime_matrix(k: int) -> PrimeMatrix:
    """k x k matrix filled row-major with the first k^2 primes"""
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    primes = primes_first(k * k)
    rows = tuple(tuple(primes[i * k:(i + 1) * k]) for i in range(k))
    row_products = tuple(math.prod(row) for row in rows)
    column_products = tuple(math.prod(row[j] for row in rows) for j in range(k))
    return PrimeMatrix(rows=rows, row_products=row_products, column_products=column_products)


def verify_hidden(a: int, b: int, k: int) -> bool:
    """True when every (a + r, b + s), 1 <= r, s <= k, shares a factor > 1"""
    for r in range(1, k + 1):
        for s in range(1, k + 1):
            if math.gcd(a + r, b + s) == 1:
                return False
    return True


def hidden_grid_witness(k: int) -> HiddenGridWitness:
    """Corner (a, b) of a k x k block invisible from the origin"""
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    cap = SCAN_CONFIG['hidden_witness_cap']
    if k > cap:
        raise WorkBudgetExceededError(
            f"k={k} exceeds witness cap {cap}",
            advisory="moduli grow like exp(k^2 ln k^2); raise LATTICE_SCOPE_HIDDEN_WITNESS_CAP deliberately",
        )
    matrix = prime_matrix(k)
    offsets = tuple(-i for i in range(1, k + 1))
    a, modulus = crt_solve(CrtSystem(residues=offsets, moduli=matrix.row_products))
    b, column_modulus = crt_solve(CrtSystem(residues=offsets, moduli=matrix.column_products))
    if modulus != column_modulus:
        raise LatticeScopeError(f"row and column moduli differ for k={k}")

    verified = verify_hidden(a, b, k)
    logger.info(f"Hidden {k}x{k} witness: modulus has {len(str(modulus))} digits, verified={verified}")
    return HiddenGridWitness(k=k, a=a, b=b, modulus=modulus, verified=verified)


def _hidden_in_row(a, k, b_values):
    """Boolean mask over b_values: corner (a, b) hides a k x k block"""
    hidden = np.ones(b_values.size, dtype=bool)
    for r in range(1, k + 1):
        for s in range(1, k + 1):
            hidden &= np.gcd(a + r, b_values + s) > 1
    return hidden


def search_hidden_grid(k: int, limit: int, max_limit: Optional[int] = None) -> Optional[LatticePoint]:
    """Lexicographically first corner in [0, limit]^2 hiding a k x k block"""
    if k < 1 or k > SCAN_CONFIG['hidden_search_max_k']:
        raise InvalidArgumentError(
            f"k must be in 1..{SCAN_CONFIG['hidden_search_max_k']}, got {k}")
    if limit < 0:
        raise InvalidArgumentError(f"limit must be >= 0, got {limit}")
    max_limit = SCAN_CONFIG['hidden_search_limit'] if max_limit is None else max_limit
    if limit > max_limit:
        raise WorkBudgetExceededError(
            f"search limit {limit} exceeds cap {max_limit}",
            advisory="use hidden_grid_witness for large k or raise --budget",
        )
    budget = SCAN_CONFIG['work_budget']
    row_cost = (limit + 1) * k * k

    b_values = np.arange(0, limit + 1, dtype=np.int64)
    for a in range(limit + 1):
        if (a + 1) * row_cost > budget:
            raise WorkBudgetExceededError(
                f"no hidden {k}x{k} block in rows 0..{a - 1}; row {a} would pass the budget of {budget} gcds",
                advisory="use hidden_grid_witness or a smaller limit",
            )
        hits = np.flatnonzero(_hidden_in_row(a, k, b_values))
        if hits.size:
            corner = LatticePoint(a, int(hits[0]))
            logger.info(f"First hidden {k}x{k} block corner: ({corner.x}, {corner.y})")
            return corner
    logger.info(f"No hidden {k}x{k} block with corner in [0, {limit}]^2")
    return None

