"""
Lattice Visibility - predicate and density estimators
Two lattice points see each other exactly when their coordinate differences
are coprime. Brute-force censuses measure how the visible fraction of a box
approaches 6/pi^2 in the plane and 1/zeta(d) in d dimensions.
"""

import logging
import math
import time
from dataclasses import dataclass
from typing import List, Optional

import mpmath
import numpy as np

from .arith import SIX_OVER_PI_SQUARED, SieveTable, sieve_build, totient_partial_sum
from .config import SCAN_CONFIG
from .errors import InvalidArgumentError, LatticeScopeError, WorkBudgetExceededError

logger = logging.getLogger(__name__)

_INT64_MAX = 2**63 - 1
SUPPORTED_DIMENSIONS = (2, 3, 4)


@dataclass(frozen=True, order=True)
class LatticePoint:
    """Integer point whose coordinates fit in a signed 64-bit word"""
    x: int
    y: int

    def __post_init__(self):
        for value in (self.x, self.y):
            if abs(value) > _INT64_MAX:
                raise InvalidArgumentError(
                    f"coordinate {value} exceeds machine width; use BigLatticePoint")

    def to_list(self):
        return [self.x, self.y]


@dataclass(frozen=True, order=True)
class BigLatticePoint:
    """Integer point with arbitrary-precision coordinates"""
    x: int
    y: int

    def to_list(self):
        # decimal strings: values routinely exceed native integer widths
        return [str(self.x), str(self.y)]


@dataclass(frozen=True)
class DensityReport:
    n: int
    visible_count: int
    total_count: int
    ratio: float
    target: float
    abs_gap: float
    dimension: int = 2

    def to_dict(self):
        return {
            'n': self.n,
            'dimension': self.dimension,
            'visible_count': self.visible_count,
            'total_count': self.total_count,
            'ratio': self.ratio,
            'target': self.target,
            'abs_gap': self.abs_gap,
        }


def is_visible(p, q) -> bool:
    """True when the segment p-q holds no interior lattice point"""
    dx = abs(p.x - q.x)
    dy = abs(p.y - q.y)
    if dx == 0 and dy == 0:
        raise InvalidArgumentError(f"visibility of {p} from itself is undefined")
    return math.gcd(dx, dy) == 1


def segment_interior_points(p, q) -> List[LatticePoint]:
    """Lattice points strictly between p and q, found by walking the segment"""
    if p.x == q.x and p.y == q.y:
        raise InvalidArgumentError(f"segment from {p} to itself is degenerate")
    dx = q.x - p.x
    dy = q.y - p.y
    found = []
    if dx == 0:
        step = 1 if dy > 0 else -1
        for y in range(p.y + step, q.y, step):
            found.append(LatticePoint(p.x, y))
        return found
    step = 1 if dx > 0 else -1
    for x in range(p.x + step, q.x, step):
        # y on the line at this x must be an integer
        numerator = dy * (x - p.x)
        if numerator % dx == 0:
            found.append(LatticePoint(x, p.y + numerator // dx))
    return found


def zeta_reciprocal(d: int) -> float:
    """1/zeta(d), the density of primitive points in d dimensions"""
    if d == 2:
        return SIX_OVER_PI_SQUARED
    return float(1 / mpmath.zeta(d))


def _rows_per_block(width):
    return max(1, SCAN_CONFIG['row_block_cells'] // max(width, 1))


def _coprime_pairs_above_diagonal(n):
    """#{(a, b) : 1 <= a < b <= n, gcd(a, b) = 1} by row-blocked gcd scan"""
    dtype = np.int32 if n < 2**31 else np.int64
    cols = np.arange(1, n + 1, dtype=dtype)
    block = _rows_per_block(n)
    total = 0
    for a0 in range(1, n + 1, block):
        a1 = min(a0 + block, n + 1)
        rows = np.arange(a0, a1, dtype=dtype)[:, None]
        right = cols[a0:][None, :]  # b from a0 + 1 upward
        hits = (np.gcd(rows, right) == 1) & (right > rows)
        total += int(np.count_nonzero(hits))
    return total


def visible_from_origin_count(n: int, table: SieveTable) -> int:
    """Points of [1, n]^2 visible from the origin, counted by gcd scan"""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    table.check_index(n)
    started = time.perf_counter()
    # (1, 1) is the only coprime point on the diagonal
    count = 1 + 2 * _coprime_pairs_above_diagonal(n)
    expected = 2 * totient_partial_sum(n, table).phi_sum - 1
    if count != expected:
        logger.error(f"Census mismatch at n={n}: scan {count}, 2*Phi(n)-1 = {expected}")
        raise LatticeScopeError(f"visible census {count} disagrees with 2*Phi(n)-1 = {expected}")
    logger.info(f"Origin census n={n}: {count} visible ({time.perf_counter() - started:.2f}s)")
    return count


def centered_census(n: int, table: SieveTable) -> int:
    """Points of [-n, n]^2 other than the origin that the origin sees; equals 8*Phi(n)"""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    table.check_index(n)
    axis = np.abs(np.arange(-n, n + 1, dtype=np.int64))
    block = _rows_per_block(axis.size)
    total = 0
    for start in range(0, axis.size, block):
        rows = axis[start:start + block][:, None]
        total += int(np.count_nonzero(np.gcd(rows, axis[None, :]) == 1))
    return total


def density_visible(n: int, table: Optional[SieveTable] = None) -> DensityReport:
    """Visible fraction of [1, n]^2 compared with 6/pi^2"""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if table is None or table.limit < n:
        table = sieve_build(n)
    visible = visible_from_origin_count(n, table)
    total = n * n
    ratio = visible / total
    return DensityReport(n=n, visible_count=visible, total_count=total, ratio=ratio,
                         target=SIX_OVER_PI_SQUARED, abs_gap=abs(ratio - SIX_OVER_PI_SQUARED))


def density_nd_report(n: int, d: int, budget: Optional[int] = None) -> DensityReport:
    """Primitive fraction of [1, n]^d by streaming over the first coordinate"""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if d not in SUPPORTED_DIMENSIONS:
        raise InvalidArgumentError(f"dimension must be one of {SUPPORTED_DIMENSIONS}, got {d}")
    budget = SCAN_CONFIG['work_budget'] if budget is None else budget
    total = n ** d
    if total > budget:
        raise WorkBudgetExceededError(
            f"density scan needs {total} tuple gcds, budget is {budget}",
            advisory="lower n or raise --budget",
        )

    started = time.perf_counter()
    axis = np.arange(1, n + 1, dtype=np.int64)
    visible = 0
    for first in range(1, n + 1):
        g = np.gcd(first, axis)
        for _ in range(d - 2):
            g = np.gcd.outer(g, axis).ravel()
        visible += int(np.count_nonzero(g == 1))
    logger.info(f"Density scan n={n}, d={d}: {visible}/{total} ({time.perf_counter() - started:.2f}s)")

    ratio = visible / total
    target = zeta_reciprocal(d)
    return DensityReport(n=n, visible_count=visible, total_count=total, ratio=ratio,
                         target=target, abs_gap=abs(ratio - target), dimension=d)


def density_nd(n: int, d: int, budget: Optional[int] = None) -> float:
    """Fraction of [1, n]^d with gcd of all coordinates equal to 1"""
    return density_nd_report(n, d, budget).ratio
