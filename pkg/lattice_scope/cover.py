"""
Visibility Covers - sets from which the whole grid A_n is seen
Greedy and exhaustive covers of A_n = {0..n}^2, the CRT blind-spot
construction that defeats any small point set, and reporting against the
ln n / (2 ln ln n) < f(n) < 4 ln n bounds.

No point covers itself: visibility is irreflexive.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy.signal import fftconvolve

from .arith import primes_first
from .config import SCAN_CONFIG
from .errors import InvalidArgumentError, RangeError, WorkBudgetExceededError
from .hidden_forest import CrtSystem, crt_solve
from .visibility import BigLatticePoint, LatticePoint

logger = logging.getLogger(__name__)

METHODS = ('greedy', 'exact', 'explicit')
BOUND_REPORT_MIN_N = 16


@dataclass(frozen=True)
class Grid:
    """A_n = {(x, y) : 0 <= x, y <= n}"""
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidArgumentError(f"grid size n must be >= 1, got {self.n}")

    @property
    def side(self):
        return self.n + 1

    def contains(self, p):
        return 0 <= p.x <= self.n and 0 <= p.y <= self.n

    def point(self, index):
        """Point at row-major index (x-major, so index order is lexicographic)"""
        return LatticePoint(*divmod(int(index), self.side))


@dataclass(frozen=True)
class CoverSolution:
    n: int
    points: Tuple[LatticePoint, ...]
    method: str
    covered: int
    complete: bool
    gains: Tuple[int, ...] = field(default=())  # newly covered per greedy step

    def __post_init__(self):
        if self.method not in METHODS:
            raise InvalidArgumentError(f"unknown cover method {self.method!r}")

    @property
    def size(self):
        return len(self.points)

    def to_dict(self):
        return {
            'n': self.n,
            'method': self.method,
            'size': self.size,
            'points': [p.to_list() for p in self.points],
            'covered': self.covered,
            'complete': self.complete,
        }


@dataclass(frozen=True)
class BlindSpotWitness:
    point: BigLatticePoint
    modulus: int
    shift: int
    in_grid: Optional[bool]  # (r + 1) * p_1...p_r < n, when n is known

    def to_dict(self):
        return {
            'point': self.point.to_list(),
            'modulus': str(self.modulus),
            'shift': self.shift,
            'in_grid': self.in_grid,
        }


@dataclass(frozen=True)
class BoundReport:
    n: int
    lower: float
    upper: float
    blind_spot_count: int
    greedy_size: Optional[int]
    exact_size: Optional[int]
    greedy_within: Optional[bool]
    exact_within: Optional[bool]

    def to_dict(self):
        return {
            'n': self.n,
            'lower': self.lower,
            'upper': self.upper,
            'blind_spot_count': self.blind_spot_count,
            'greedy_size': self.greedy_size,
            'exact_size': self.exact_size,
            'greedy_within': self.greedy_within,
            'exact_within': self.exact_within,
        }


@dataclass(frozen=True)
class LemmaCheck:
    n: int
    count: int
    threshold: float
    passed: bool


def _as_grid(grid):
    return grid if isinstance(grid, Grid) else Grid(int(grid))


def _visibility_mask(p, grid):
    """Boolean (n+1) x (n+1) mask of grid points p sees, by direct gcd"""
    axis = np.arange(grid.side, dtype=np.int64)
    dx = np.abs(axis - p.x)[:, None]
    dy = np.abs(axis - p.y)[None, :]
    # gcd(0, 0) = 0 keeps p itself out
    return np.gcd(dx, dy) == 1


def visible_set(p, grid) -> set:
    """Points of A_n visible from p (p excluded)"""
    grid = _as_grid(grid)
    if not grid.contains(p):
        raise InvalidArgumentError(f"{p} lies outside A_{grid.n}")
    xs, ys = np.nonzero(_visibility_mask(p, grid))
    return {LatticePoint(int(x), int(y)) for x, y in zip(xs, ys)}


def coverage_mask(points: Iterable, grid) -> np.ndarray:
    """Union of the visibility masks of points"""
    grid = _as_grid(grid)
    covered = np.zeros((grid.side, grid.side), dtype=bool)
    for p in points:
        covered |= _visibility_mask(p, grid)
    return covered


def verify_cover(points: Sequence, grid) -> bool:
    """Independent pass: every point of A_n is seen by some other cover point"""
    return bool(coverage_mask(points, grid).all())


def _coprime_kernel(n):
    """K[dx + n, dy + n] = 1 when gcd(|dx|, |dy|) = 1, for |dx|, |dy| <= n"""
    offsets = np.abs(np.arange(-n, n + 1, dtype=np.int64))
    return np.gcd.outer(offsets, offsets) == 1


def greedy_cover(grid) -> CoverSolution:
    """Start at (0, 0), then repeatedly add the point seeing most uncovered points"""
    grid = _as_grid(grid)
    n, side = grid.n, grid.side
    started = time.perf_counter()

    kernel = _coprime_kernel(n)
    kernel_f = kernel.astype(np.float64)
    uncovered = np.ones((side, side), dtype=bool)
    points, gains = [], []

    def take(x, y):
        seen = kernel[n - x:n - x + side, n - y:n - y + side]
        gain = int(np.count_nonzero(uncovered & seen))
        uncovered[seen] = False
        points.append(LatticePoint(x, y))
        gains.append(gain)
        logger.debug(f"Greedy step {len(points)}: ({x}, {y}) covers {gain} new points")

    take(0, 0)
    while uncovered.any():
        # gain of every candidate p: sum over uncovered q of K[p - q]
        full = fftconvolve(uncovered.astype(np.float64), kernel_f, mode='full')
        gain_map = np.rint(full[n:n + side, n:n + side]).astype(np.int64)
        best = int(np.argmax(gain_map))  # first maximum = lexicographic tie-break
        if gain_map.flat[best] <= 0:
            raise RuntimeError(f"greedy cover stalled on A_{n} with points left uncovered")
        x, y = divmod(best, side)
        take(x, y)

    logger.info(f"Greedy cover of A_{n}: {len(points)} points ({time.perf_counter() - started:.2f}s)")
    return CoverSolution(n=n, points=tuple(points), method='greedy', covered=side * side,
                         complete=True, gains=tuple(gains))


def _point_masks(grid):
    """Visibility of every grid point as an int bitmask over row-major indices"""
    kernel = _coprime_kernel(grid.n)
    n, side = grid.n, grid.side
    weights = [1 << i for i in range(side * side)]
    masks = []
    for index in range(side * side):
        x, y = divmod(index, side)
        seen = kernel[n - x:n - x + side, n - y:n - y + side].ravel()
        masks.append(sum(w for w, bit in zip(weights, seen.tolist()) if bit))
    return masks


def exact_min_cover(grid, cap: Optional[int] = None) -> CoverSolution:
    """Smallest complete cover by iterative deepening; lexicographically first among ties"""
    grid = _as_grid(grid)
    cap = SCAN_CONFIG['exact_cover_cap'] if cap is None else cap
    if grid.n > cap:
        raise WorkBudgetExceededError(
            f"exhaustive cover search on A_{grid.n} exceeds cap n <= {cap}",
            advisory="use greedy_cover",
        )
    started = time.perf_counter()
    masks = _point_masks(grid)
    total = len(masks)
    full = (1 << total) - 1

    # last_cover[e]: highest index whose mask contains e
    last_cover = [-1] * total
    for index, mask in enumerate(masks):
        for e in range(total):
            if mask >> e & 1:
                last_cover[e] = index
    # suffix_max[i]: largest mask size among indices >= i
    suffix_max = [0] * (total + 1)
    for index in range(total - 1, -1, -1):
        suffix_max[index] = max(suffix_max[index + 1], masks[index].bit_count())

    def search(start, depth, uncovered, chosen):
        if uncovered == 0:
            return chosen
        if depth == 0:
            return None
        lowest = (uncovered & -uncovered).bit_length() - 1
        remaining = uncovered.bit_count()
        for index in range(start, total - depth + 1):
            if last_cover[lowest] < index or remaining > depth * suffix_max[index]:
                break
            found = search(index + 1, depth - 1, uncovered & ~masks[index], chosen + [index])
            if found is not None:
                return found
        return None

    for size in range(1, total + 1):
        found = search(0, size, full, [])
        if found is not None:
            points = tuple(grid.point(i) for i in found)
            logger.info(f"Exact cover of A_{grid.n}: f({grid.n}) = {size} ({time.perf_counter() - started:.2f}s)")
            return CoverSolution(n=grid.n, points=points, method='exact', covered=total, complete=True)
        logger.debug(f"No cover of size {size} for A_{grid.n}")
    raise RuntimeError(f"no cover found for A_{grid.n}")


def verify_invisibility(point, inputs: Sequence) -> bool:
    """point differs from every input and no input sees it"""
    for q in inputs:
        if point.x == q.x and point.y == q.y:
            return False
        if math.gcd(abs(point.x - q.x), abs(point.y - q.y)) == 1:
            return False
    return True


def blind_spot(points: Sequence, grid_n: Optional[int] = None) -> BlindSpotWitness:
    """A point invisible from every input: x = a_i, y = b_i (mod p_i) for the first r primes"""
    r = len(points)
    if r < 1 or r > SCAN_CONFIG['blind_spot_max_points']:
        raise InvalidArgumentError(
            f"need 1..{SCAN_CONFIG['blind_spot_max_points']} points, got {r}")
    taken = {(p.x, p.y) for p in points}
    if len(taken) != r:
        raise InvalidArgumentError("blind_spot inputs must be distinct")

    primes = primes_first(r)
    x0, modulus = crt_solve(CrtSystem(residues=[p.x for p in points], moduli=primes))
    y0, _ = crt_solve(CrtSystem(residues=[p.y for p in points], moduli=primes))

    # r + 1 diagonal shifts against r inputs: one of them is free
    for shift in range(r + 1):
        candidate = (x0 + shift * modulus, y0 + shift * modulus)
        if candidate not in taken:
            break
    in_grid = (r + 1) * modulus < grid_n if grid_n is not None else None
    logger.debug(f"Blind spot for {r} points: {candidate} (shift {shift})")
    return BlindSpotWitness(point=BigLatticePoint(*candidate), modulus=modulus, shift=shift, in_grid=in_grid)


def blind_spot_count(n: int) -> int:
    """r = floor(ln n / (2 ln ln n)) + 1: point sets this small always miss something"""
    if n < BOUND_REPORT_MIN_N:
        raise RangeError(f"n must be >= {BOUND_REPORT_MIN_N}, got {n}")
    return math.floor(math.log(n) / (2 * math.log(math.log(n)))) + 1


def _within(size, lower, upper):
    return None if size is None else lower < size < upper


def bound_report(n: int, greedy_size: Optional[int] = None,
                 exact_size: Optional[int] = None) -> BoundReport:
    """Asymptotic cover-size bounds at n beside the achieved sizes; violations are flagged"""
    if n < BOUND_REPORT_MIN_N:
        raise RangeError(f"bound report needs n >= {BOUND_REPORT_MIN_N} (ln ln n > 0), got {n}")
    log_n = math.log(n)
    lower = log_n / (2 * math.log(log_n))
    upper = 4 * log_n
    report = BoundReport(
        n=n, lower=lower, upper=upper, blind_spot_count=blind_spot_count(n),
        greedy_size=greedy_size, exact_size=exact_size,
        greedy_within=_within(greedy_size, lower, upper),
        exact_within=_within(exact_size, lower, upper),
    )
    for label, within, size in (('greedy', report.greedy_within, greedy_size),
                                ('exact', report.exact_within, exact_size)):
        if within is False:
            logger.warning(f"{label} size {size} outside ({lower:.3f}, {upper:.3f}) at n={n}; bound is asymptotic")
    return report


def lemma_view_check(n: int, c: float = 0.55) -> LemmaCheck:
    """The origin alone sees at least c * n^2 points of A_n"""
    if not 0 < c < 6 / math.pi ** 2:
        raise InvalidArgumentError(f"c must lie in (0, 6/pi^2), got {c}")
    grid = Grid(n)
    count = int(np.count_nonzero(_visibility_mask(LatticePoint(0, 0), grid)))
    threshold = c * n * n
    return LemmaCheck(n=n, count=count, threshold=threshold, passed=count >= threshold)
