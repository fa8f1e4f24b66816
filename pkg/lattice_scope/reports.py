"""
Report Output - canonical JSON, CSV and convergence series
Every result record leaves the package through here: JSON with sorted keys
and floats at 9 significant digits, CSV with a header row and LF endings,
and the plot-ready convergence series behind `lattice-scope convergence`.
"""

import csv
import io
import json
import logging
import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .arith import THREE_OVER_PI_SQUARED, sieve_build, totient_partial_sum
from .config import OUTPUT_CONFIG, SCAN_CONFIG
from .errors import InvalidArgumentError
from .visibility import density_nd_report, density_visible

logger = logging.getLogger(__name__)

SERIES_KINDS = ('density2d', 'density3d', 'phi_sum_error')
SIEVE_KINDS = ('density2d', 'phi_sum_error')
SERIES_HEADER = ('n', 'value', 'target', 'abs_gap')


def _round_floats(value, digits):
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return float(f"{value:.{digits}g}")
    if isinstance(value, dict):
        return {str(k): _round_floats(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_floats(v, digits) for v in value]
    return value


def canonical_json(record) -> str:
    """Sorted keys, no whitespace, floats rounded to the configured significant digits"""
    rounded = _round_floats(record, OUTPUT_CONFIG['float_digits'])
    return json.dumps(rounded, sort_keys=True, separators=(',', ':'), allow_nan=False)


def format_cell(value) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return f"{value:.{OUTPUT_CONFIG['float_digits']}g}"
    if isinstance(value, (dict, list, tuple)):
        return canonical_json(value)
    return str(value)


def records_to_csv(records: Sequence[Dict], header: Optional[Sequence[str]] = None) -> str:
    """Header row plus one row per record; nested values are embedded as canonical JSON"""
    if header is None:
        header = list(records[0].keys()) if records else []
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for record in records:
        writer.writerow([format_cell(record.get(column)) for column in header])
    return buffer.getvalue()


def write_output(text: str, out_path: Optional[str] = None, stream=None):
    """Write to out_path (creating parent directories) or to the given stream.

    A bare file name with no directory part lands in OUTPUT_CONFIG['reports_dir'].
    """
    if not text.endswith('\n'):
        text += '\n'
    if out_path:
        parent = os.path.dirname(out_path)
        if not parent:
            parent = OUTPUT_CONFIG['reports_dir']
            out_path = os.path.join(parent, out_path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(out_path, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        logger.info(f"📄 Report saved to: {out_path}")
    else:
        stream.write(text)


@dataclass(frozen=True)
class ConvergenceSeries:
    kind: str
    rows: List[Dict]
    requested: int

    @property
    def truncated(self):
        return len(self.rows) < self.requested

    def to_csv(self):
        return records_to_csv(self.rows, SERIES_HEADER)


def _series_cost(kind, n):
    """Gcd evaluations (or sieve cells) one row of the series needs"""
    if kind == 'density2d':
        return n * n
    if kind == 'density3d':
        return n ** 3
    return n


def emit_convergence_series(kind: str, n_values: Sequence[int], budget: Optional[int] = None) -> ConvergenceSeries:
    """Rows n,value,target,abs_gap for each n, stopping at the first n over budget"""
    if kind not in SERIES_KINDS:
        raise InvalidArgumentError(f"kind must be one of {SERIES_KINDS}, got {kind!r}")
    n_values = [int(n) for n in n_values]
    if not n_values:
        raise InvalidArgumentError("at least one n is required")
    if any(n < 1 for n in n_values):
        raise InvalidArgumentError(f"every n must be >= 1, got {n_values}")
    if any(b < a for a, b in zip(n_values, n_values[1:])):
        raise InvalidArgumentError(f"n values must be ascending, got {n_values}")
    budget = SCAN_CONFIG['work_budget'] if budget is None else budget

    sieve_cap = SCAN_CONFIG['sieve_cap'] if kind in SIEVE_KINDS else None
    feasible = [n for n in n_values
                if _series_cost(kind, n) <= budget and (sieve_cap is None or n <= sieve_cap)]
    # ascending input: the feasible values are a prefix
    if len(feasible) < len(n_values):
        logger.warning(f"⚠️ Series {kind} truncated: {len(feasible)} of {len(n_values)} rows "
                       f"within budget {budget}" + (f" and sieve cap {sieve_cap}" if sieve_cap else ""))

    rows = []
    if kind == 'phi_sum_error' and feasible:
        table = sieve_build(feasible[-1])
        for n in feasible:
            report = totient_partial_sum(n, table)
            rows.append({'n': n, 'value': report.phi_sum,
                         'target': THREE_OVER_PI_SQUARED * n * n, 'abs_gap': report.abs_error})
    else:
        table = sieve_build(feasible[-1]) if kind == 'density2d' and feasible else None
        for n in feasible:
            if kind == 'density2d':
                report = density_visible(n, table)
            else:
                report = density_nd_report(n, 3, budget)
            rows.append({'n': n, 'value': report.ratio, 'target': report.target,
                         'abs_gap': report.abs_gap})
    logger.info(f"Convergence series {kind}: {len(rows)} rows")
    return ConvergenceSeries(kind=kind, rows=rows, requested=len(n_values))
