"""
Explicit Covers - a concrete B_n built from omega(m) statistics
B_n is the union of the rectangles {1..2t} x {1..2s} and {1..2s} x {1..2t}
with s = [10 g(n)], t = [10 ln ln g(n)]. Integers m <= n with at least g(n)
distinct prime factors (the set E_n(g)) are the only source of points B_n can
miss; this module builds the plan, counts the missed points by scan or by
seeded sampling, and checks the omega(n) < 2 ln n / ln ln n inequality that
makes E_n(g) empty for g(n) = 2 ln n / ln ln n.

Brackets [x] are floors; logs are natural.
"""

import hashlib
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.stats import binomtest

from .arith import SieveTable, primorial
from .config import OUTPUT_CONFIG, SCAN_CONFIG
from .cover import CoverSolution, Grid, coverage_mask
from .errors import (CoprimePairNotFoundError, InvalidArgumentError, RangeError,
                     WorkBudgetExceededError)
from .visibility import LatticePoint

logger = logging.getLogger(__name__)

OMEGA_CHECK_START = 16


@dataclass(frozen=True)
class ExplicitCoverPlan:
    n: int
    g_value: float
    s: int
    t: int
    t0: int
    en_g: Tuple[int, ...]
    index_set: Tuple[int, ...]                 # I
    y_sets: Dict[int, Tuple[int, ...]] = field(hash=False)  # Y_i, non-empty ones only
    b_n: Tuple[LatticePoint, ...] = ()

    def y_set(self, i):
        return frozenset(self.y_sets.get(i, ()))

    @property
    def block_count(self):
        """Number of blocks X_1.. needed to reach n"""
        return -(-self.n // self.t)

    def b_n_arrays(self):
        bx = np.fromiter((p.x for p in self.b_n), dtype=np.int64, count=len(self.b_n))
        by = np.fromiter((p.y for p in self.b_n), dtype=np.int64, count=len(self.b_n))
        return bx, by

    def to_dict(self):
        record = {
            'n': self.n,
            'g_value': self.g_value,
            's': self.s,
            't': self.t,
            't0': self.t0,
            'en_g_size': len(self.en_g),
            'index_set': list(self.index_set),
            'b_n_size': len(self.b_n),
        }
        if len(self.en_g) <= OUTPUT_CONFIG['plan_member_limit']:
            record['en_g'] = list(self.en_g)
            record['y_sets'] = {str(i): list(ys) for i, ys in sorted(self.y_sets.items())}
        else:
            joined = ','.join(str(m) for m in self.en_g).encode()
            record['en_g_digest'] = hashlib.sha256(joined).hexdigest()
        return record


@dataclass(frozen=True)
class ExceptionalReport:
    n: int
    plan: ExplicitCoverPlan
    exceptional_count: int
    bound_proof: int               # 100 |E_n(g)|^2
    bound_theorem_statement: int   # 100 |E_n(g)|
    cardinality_bound: float       # 800 g ln ln g
    passed_proof_bound: bool
    passed_statement_bound: bool
    passed_rectangle_bound: bool   # |B_n| <= 8st
    passed_cardinality_bound: bool

    def to_dict(self):
        return {
            'n': self.n,
            'g_value': self.plan.g_value,
            's': self.plan.s,
            't': self.plan.t,
            't0': self.plan.t0,
            'en_g_size': len(self.plan.en_g),
            'index_set_size': len(self.plan.index_set),
            'b_n_size': len(self.plan.b_n),
            'exceptional_count': self.exceptional_count,
            'bound_proof': self.bound_proof,
            'bound_theorem_statement': self.bound_theorem_statement,
            'cardinality_bound': self.cardinality_bound,
            'passed_proof_bound': self.passed_proof_bound,
            'passed_statement_bound': self.passed_statement_bound,
            'passed_rectangle_bound': self.passed_rectangle_bound,
            'passed_cardinality_bound': self.passed_cardinality_bound,
        }


@dataclass(frozen=True)
class SampleEstimate:
    n: int
    sample_size: int
    seed: int
    hits: int
    fraction: float
    ci_low: float
    ci_high: float

    def to_dict(self):
        return {
            'n': self.n,
            'sample_size': self.sample_size,
            'seed': self.seed,
            'hits': self.hits,
            'fraction': self.fraction,
            'ci_low': self.ci_low,
            'ci_high': self.ci_high,
        }


@dataclass(frozen=True)
class CorollaryConfig:
    label: str
    g_value: float
    expected_property: str
    exceptional_bound: float
    cardinality_estimate: Optional[float]  # None where no plan exists (t < 1)
    en_g_empty_expected: bool

    def to_dict(self):
        return {
            'label': self.label,
            'g_value': self.g_value,
            'expected_property': self.expected_property,
            'exceptional_bound': self.exceptional_bound,
            'cardinality_estimate': self.cardinality_estimate,
            'en_g_empty_expected': self.en_g_empty_expected,
        }


@dataclass(frozen=True)
class HardyRamanujanCheck:
    n: int
    g_value: float
    count: int
    bound: float
    passed: bool


def _check_g(g_value):
    if not (math.isfinite(g_value) and g_value > 0):
        raise InvalidArgumentError(f"g must be finite and positive, got {g_value}")


def cardinality_bound(g_value: float) -> Optional[float]:
    """800 g ln ln g, the size bound on B_n; None below the smallest g with t >= 1"""
    if plan_parameters(g_value)[1] < 1:
        return None
    return 800 * g_value * math.log(math.log(g_value))


def en_g(n: int, g_value: float, table: SieveTable) -> Tuple[int, ...]:
    """E_n(g) = {m <= n : omega(m) >= g}, ascending"""
    table.check_index(n)
    _check_g(g_value)
    members = np.flatnonzero(table.omega[1:n + 1] >= g_value) + 1
    return tuple(members.tolist())


def least_with_omega(k: int) -> int:
    """Least positive integer with at least k distinct prime factors"""
    return primorial(k) if k >= 1 else 1


def en_g_empty_by_primorial(n: int, g_value: float) -> bool:
    """E_n(g) is empty exactly when the primorial of ceil(g) primes exceeds n"""
    _check_g(g_value)
    return least_with_omega(math.ceil(g_value)) > n


def plan_parameters(g_value: float) -> Tuple[int, int, int]:
    """(s, t, t0) for a given g"""
    _check_g(g_value)
    s = math.floor(10 * g_value)
    log_g = math.log(g_value) if g_value > 1 else 0.0
    t = math.floor(10 * math.log(log_g)) if log_g > 0 else 0
    t0 = t // 10 + 1
    return s, t, t0


def _rectangles(n, s, t):
    """({1..2t} x {1..2s}) U ({1..2s} x {1..2t}), clipped to A_n"""
    short, long_ = min(2 * t, n), min(2 * s, n)
    points = {(a, b) for a in range(1, short + 1) for b in range(1, long_ + 1)}
    points.update((b, a) for a, b in list(points))
    return tuple(LatticePoint(x, y) for x, y in sorted(points))


def build_plan(n: int, g_value: float, table: SieveTable) -> ExplicitCoverPlan:
    """Parameters, E_n(g), blocks X_i, index set I, offsets Y_i and the point set B_n"""
    table.check_index(n)
    _check_g(g_value)
    s, t, t0 = plan_parameters(g_value)
    if t < 1:
        raise InvalidArgumentError(
            f"g={g_value:.4f} too small for the explicit-cover parameterization "
            f"(t = [10 ln ln g] = {t}; needs g >= e^(e^0.1) ~ 3.02)")
    if n < s * t:
        raise InvalidArgumentError(f"n={n} below s*t = {s * t} for g={g_value:.4f}")

    members = en_g(n, g_value, table)
    # X_i = {(i-1)t + 1, ..., it}: member m sits in block (m - 1) // t + 1
    by_block: Dict[int, List[int]] = {}
    for m in members:
        by_block.setdefault((m - 1) // t + 1, []).append(m)
    index_set = tuple(sorted(i for i, ms in by_block.items() if len(ms) >= t0))
    y_sets = {i: tuple(sorted(i * t - m for m in ms)) for i, ms in by_block.items()}

    plan = ExplicitCoverPlan(n=n, g_value=g_value, s=s, t=t, t0=t0, en_g=members,
                             index_set=index_set, y_sets=y_sets, b_n=_rectangles(n, s, t))
    logger.info(f"Plan n={n}, g={g_value:.4f}: s={s}, t={t}, t0={t0}, "
                f"|E|={len(members)}, |I|={len(index_set)}, |B_n|={len(plan.b_n)}")
    return plan


def coprime_pair_find(i: int, j: int, plan: ExplicitCoverPlan) -> Tuple[int, int]:
    """First (a, b), 1 <= a <= t, 1 <= b <= s, a not in Y_i, with gcd(it - a, js - b) = 1"""
    if i < 1 or i * plan.t > plan.n:
        raise InvalidArgumentError(f"i={i} outside 1..{plan.n // plan.t}")
    if i in plan.index_set:
        raise InvalidArgumentError(f"i={i} belongs to the index set I")
    if j < 1 or j * plan.s > plan.n:
        raise InvalidArgumentError(f"j={j} outside 1..{plan.n // plan.s}")
    excluded = plan.y_set(i)
    for a in range(1, plan.t + 1):
        if a in excluded:
            continue
        for b in range(1, plan.s + 1):
            if math.gcd(i * plan.t - a, j * plan.s - b) == 1:
                return a, b
    raise CoprimePairNotFoundError(i, j)


def _count_unseen(qx, qy, bx, by):
    """How many of the points (qx, qy) no point of (bx, by) sees"""
    for px, py in zip(bx.tolist(), by.tolist()):
        if qx.size == 0:
            break
        unseen = np.gcd(np.abs(qx - px), np.abs(qy - py)) != 1
        qx, qy = qx[unseen], qy[unseen]
    return int(qx.size)


def _row_blocks(n):
    """Row ranges of A_n sized to the configured work unit"""
    side = n + 1
    rows = max(1, SCAN_CONFIG['row_block_cells'] // side)
    for start in range(0, side, rows):
        yield start, min(start + rows, side)


def exceptional_scan(plan: ExplicitCoverPlan, budget: Optional[int] = None) -> ExceptionalReport:
    """Count points of A_n seen from no point of B_n, scanning A_n row block by row block"""
    budget = SCAN_CONFIG['exceptional_scan_points'] if budget is None else budget
    n = plan.n
    cells = (n + 1) ** 2
    if cells > budget:
        raise WorkBudgetExceededError(
            f"full scan of A_{n} needs {cells} points, budget is {budget}",
            advisory="use sampled_exceptional_estimate",
        )
    started = time.perf_counter()
    bx, by = plan.b_n_arrays()
    column = np.arange(n + 1, dtype=np.int64)
    exceptional = 0
    for start, stop in _row_blocks(n):
        rows = np.arange(start, stop, dtype=np.int64)
        qx = np.repeat(rows, n + 1)
        qy = np.tile(column, stop - start)
        exceptional += _count_unseen(qx, qy, bx, by)
    logger.info(f"Exceptional scan of A_{n}: {exceptional} unseen ({time.perf_counter() - started:.2f}s)")
    return _report(plan, exceptional)


def _report(plan, exceptional):
    size_e = len(plan.en_g)
    g = plan.g_value
    bound = cardinality_bound(g)
    report = ExceptionalReport(
        n=plan.n, plan=plan, exceptional_count=exceptional,
        bound_proof=100 * size_e ** 2,
        bound_theorem_statement=100 * size_e,
        cardinality_bound=bound,
        passed_proof_bound=exceptional <= 100 * size_e ** 2,
        passed_statement_bound=exceptional <= 100 * size_e,
        passed_rectangle_bound=len(plan.b_n) <= 8 * plan.s * plan.t,
        passed_cardinality_bound=len(plan.b_n) <= bound,
    )
    if not report.passed_proof_bound:
        logger.warning(f"n={plan.n}: {exceptional} exceptional points exceed 100|E|^2 = {report.bound_proof}")
    return report


def sampled_exceptional_estimate(plan: ExplicitCoverPlan, sample_size: int, seed: int) -> SampleEstimate:
    """Fraction of A_n unseen from B_n over a seeded uniform sample, with a 95% Wilson interval"""
    if sample_size < 1000:
        raise InvalidArgumentError(f"sample_size must be >= 1000, got {sample_size}")
    rng = np.random.default_rng(seed)
    # the whole sample is drawn up front, so partitioning it cannot change it
    qx = rng.integers(0, plan.n + 1, size=sample_size, dtype=np.int64)
    qy = rng.integers(0, plan.n + 1, size=sample_size, dtype=np.int64)
    bx, by = plan.b_n_arrays()
    hits = _count_unseen(qx, qy, bx, by)
    interval = binomtest(hits, sample_size).proportion_ci(confidence_level=0.95, method='wilson')
    logger.info(f"Sampled {sample_size} points of A_{plan.n}: {hits} unseen")
    return SampleEstimate(n=plan.n, sample_size=sample_size, seed=seed, hits=hits,
                          fraction=hits / sample_size,
                          ci_low=float(interval.low), ci_high=float(interval.high))


def omega_inequality_check(limit: int, table: SieveTable) -> List[int]:
    """Every n in [16, limit] with omega(n) >= 2 ln n / ln ln n"""
    table.check_index(limit, 'limit')
    if limit < OMEGA_CHECK_START:
        return []
    n = np.arange(OMEGA_CHECK_START, limit + 1, dtype=np.float64)
    log_n = np.log(n)
    bound = 2 * log_n / np.log(log_n)
    violating = np.flatnonzero(table.omega[OMEGA_CHECK_START:limit + 1] >= bound) + OMEGA_CHECK_START
    if violating.size:
        logger.warning(f"{violating.size} integers up to {limit} break the omega inequality")
    return violating.tolist()


def hardy_ramanujan_check(n: int, table: SieveTable) -> HardyRamanujanCheck:
    """|E_n(2 ln ln n)| <= n / ln ln n"""
    if n < OMEGA_CHECK_START:
        raise RangeError(f"n must be >= {OMEGA_CHECK_START}, got {n}")
    log_log = math.log(math.log(n))
    g = 2 * log_log
    count = len(en_g(n, g, table))
    bound = n / log_log
    return HardyRamanujanCheck(n=n, g_value=g, count=count, bound=bound, passed=count <= bound)


def corollary_configs(n: int) -> Tuple[CorollaryConfig, CorollaryConfig]:
    """The two standard choices of g: 2 ln ln n and 2 ln n / ln ln n"""
    if n < OMEGA_CHECK_START:
        raise RangeError(f"n must be >= {OMEGA_CHECK_START}, got {n}")
    log_n = math.log(n)
    log_log = math.log(log_n)

    g1 = 2 * log_log
    first = CorollaryConfig(
        label='loglog',
        g_value=g1,
        expected_property='at most 100 n^2/(ln ln n)^2 exceptional points, |B_n| = O((ln ln n)(ln ln ln ln n))',
        exceptional_bound=100 * n * n / log_log ** 2,
        cardinality_estimate=cardinality_bound(g1),
        en_g_empty_expected=en_g_empty_by_primorial(n, g1),
    )
    g2 = 2 * log_n / log_log
    second = CorollaryConfig(
        label='log_over_loglog',
        g_value=g2,
        expected_property='E_n(g) empty, A_n completely visible',
        exceptional_bound=0.0,
        cardinality_estimate=cardinality_bound(g2),
        en_g_empty_expected=en_g_empty_by_primorial(n, g2),
    )
    return first, second


def explicit_cover_solution(plan: ExplicitCoverPlan, budget: Optional[int] = None) -> CoverSolution:
    """B_n as a CoverSolution, with coverage taken from full visibility masks"""
    budget = SCAN_CONFIG['work_budget'] if budget is None else budget
    work = len(plan.b_n) * (plan.n + 1) ** 2
    if work > budget:
        raise WorkBudgetExceededError(
            f"masking A_{plan.n} from {len(plan.b_n)} points needs {work} gcds, budget is {budget}",
            advisory="use exceptional_scan",
        )
    covered = int(np.count_nonzero(coverage_mask(plan.b_n, Grid(plan.n))))
    return CoverSolution(n=plan.n, points=plan.b_n, method='explicit', covered=covered,
                         complete=covered == (plan.n + 1) ** 2)
