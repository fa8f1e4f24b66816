#!/usr/bin/env python3
"""
Lattice Scope - command-line frontend
Every operation family is one subcommand; results go to stdout (or --out)
as text, canonical JSON or CSV, logs go to stderr.

Usage:
  lattice-scope totient-sum --x 100 --format json
  lattice-scope density --n 10000
  lattice-scope hidden-witness --k 2
  lattice-scope convergence --kind density2d --n 10 100 1000

Exit status: 0 success, 1 domain or resource error, 2 usage error.
"""

import argparse
import logging
import math
import sys

import numpy as np

from . import __version__
from .arith import mobius_square_sum, sieve_build, totient_partial_sum
from .config import LOGGING_CONFIG
from .cover import (BOUND_REPORT_MIN_N, Grid, blind_spot, bound_report, exact_min_cover, greedy_cover,
                    verify_invisibility)
from .errors import InvalidArgumentError, LatticeScopeError, RangeError
from .explicit_cover import (build_plan, coprime_pair_find, corollary_configs, exceptional_scan,
                             hardy_ramanujan_check, omega_inequality_check,
                             sampled_exceptional_estimate)
from .hidden_forest import hidden_grid_witness, search_hidden_grid
from .reports import (SERIES_KINDS, canonical_json, emit_convergence_series, format_cell,
                      records_to_csv, write_output)
from .visibility import LatticePoint, density_nd_report, density_visible

logger = logging.getLogger(__name__)

FORMATS = ('text', 'json', 'csv')
DEFAULT_SEED = 0

# False on these is a flag on an asymptotic statement, not a failure
FLAG_FIELDS = {'greedy_within', 'exact_within', 'passed_statement_bound',
               'passed_cardinality_bound', 'in_grid'}
TEXT_LIST_LIMIT = 20


class UsageError(Exception):
    """Raised instead of argparse's own exit so run() can return 2"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def configure_logging():
    """Install the stderr handler (and the optional log file) on the package logger"""
    package_logger = logging.getLogger('lattice_scope')
    if package_logger.handlers:
        return
    formatter = logging.Formatter(LOGGING_CONFIG['format'])
    handlers = [logging.StreamHandler(sys.stderr)]
    if LOGGING_CONFIG['file']:
        handlers.append(logging.FileHandler(LOGGING_CONFIG['file']))
    for handler in handlers:
        handler.setFormatter(formatter)
        package_logger.addHandler(handler)
    package_logger.setLevel(LOGGING_CONFIG['level'].upper())
    package_logger.propagate = False


def _point(text):
    """Parse 'x,y' into a LatticePoint"""
    try:
        x, y = (int(part) for part in text.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y integers, got {text!r}")
    return LatticePoint(x, y)


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


# ---------------------------------------------------------------- commands

def cmd_totient_sum(args):
    table = sieve_build(args.x)
    record = totient_partial_sum(args.x, table).to_dict()
    if args.mobius:
        record['mobius_square_sum'] = mobius_square_sum(args.x, table).to_dict()
    return 'Totient partial sum', record


def cmd_density(args):
    return 'Visible-point density', density_visible(args.n).to_dict()


def cmd_density_nd(args):
    return f'Primitive-point density in {args.d} dimensions', \
        density_nd_report(args.n, args.d, args.budget).to_dict()


def cmd_hidden_witness(args):
    return f'Hidden {args.k}x{args.k} block', hidden_grid_witness(args.k).to_dict()


def cmd_hidden_search(args):
    corner = search_hidden_grid(args.k, args.limit, args.budget)
    record = {'k': args.k, 'limit': args.limit,
              'corner': corner.to_list() if corner is not None else None}
    return f'First hidden {args.k}x{args.k} block', record


def _cover_record(solution):
    record = solution.to_dict()
    if solution.n >= BOUND_REPORT_MIN_N:
        sizes = {'greedy_size' if solution.method == 'greedy' else 'exact_size': solution.size}
        record['bounds'] = bound_report(solution.n, **sizes).to_dict()
    return record


def cmd_cover_greedy(args):
    solution = greedy_cover(Grid(args.n))
    record = _cover_record(solution)
    record['gains'] = list(solution.gains)
    return f'Greedy cover of A_{args.n}', record


def cmd_cover_exact(args):
    return f'Exact cover of A_{args.n}', _cover_record(exact_min_cover(Grid(args.n)))


def cmd_blind_spot(args):
    if args.point and args.random:
        raise InvalidArgumentError("give --point or --random, not both")
    if args.random:
        rng = np.random.default_rng(DEFAULT_SEED if args.seed is None else args.seed)
        side = args.coord_max + 1
        if args.random > side * side:
            raise InvalidArgumentError(f"cannot draw {args.random} distinct points from [0, {args.coord_max}]^2")
        picks = rng.choice(side * side, size=args.random, replace=False)
        points = [LatticePoint(*divmod(int(i), side)) for i in picks]
    elif args.point:
        points = args.point
    else:
        raise InvalidArgumentError("blind-spot needs --point x,y (repeatable) or --random R")
    witness = blind_spot(points, args.grid_n)
    record = witness.to_dict()
    record['inputs'] = [p.to_list() for p in points]
    record['verified'] = verify_invisibility(witness.point, points)
    return f'Blind spot for {len(points)} points', record


def _g_value(args):
    if args.g is not None:
        return args.g
    if args.n < 16:
        raise RangeError(f"corollary configurations need n >= 16, got {args.n}")
    loglog, log_over_loglog = corollary_configs(args.n)
    return loglog.g_value if args.config == 'loglog' else log_over_loglog.g_value


def cmd_explicit_cover(args):
    plan = build_plan(args.n, _g_value(args), sieve_build(args.n))
    record = plan.to_dict()
    if args.pair:
        i, j = args.pair
        a, b = coprime_pair_find(i, j, plan)
        record['pair'] = {'i': i, 'j': j, 'a': a, 'b': b}
    if args.n >= 16:
        record['corollary_configs'] = [c.to_dict() for c in corollary_configs(args.n)]
    return f'Explicit cover plan for A_{args.n}', record


def cmd_exceptional_scan(args):
    plan = build_plan(args.n, _g_value(args), sieve_build(args.n))
    if args.sample:
        seed = DEFAULT_SEED if args.seed is None else args.seed
        return f'Sampled exceptional points of A_{args.n}', \
            sampled_exceptional_estimate(plan, args.sample, seed).to_dict()
    return f'Exceptional points of A_{args.n}', exceptional_scan(plan, args.budget).to_dict()


def cmd_omega_check(args):
    table = sieve_build(args.limit)
    violations = omega_inequality_check(args.limit, table)
    checks = []
    for power in range(3, int(math.log10(args.limit)) + 1):
        check = hardy_ramanujan_check(10 ** power, table)
        checks.append({'n': check.n, 'count': check.count, 'bound': check.bound, 'passed': check.passed})
    record = {
        'limit': args.limit,
        'violations': violations,
        'violation_count': len(violations),
        'passed': not violations,
        'hardy_ramanujan': checks,
    }
    return f'omega(n) < 2 ln n / ln ln n up to {args.limit}', record


def cmd_convergence(args):
    return f'Convergence series {args.kind}', emit_convergence_series(args.kind, args.n, args.budget)


COMMANDS = {
    'totient-sum': cmd_totient_sum,
    'density': cmd_density,
    'density-nd': cmd_density_nd,
    'hidden-witness': cmd_hidden_witness,
    'hidden-search': cmd_hidden_search,
    'cover-greedy': cmd_cover_greedy,
    'cover-exact': cmd_cover_exact,
    'blind-spot': cmd_blind_spot,
    'explicit-cover': cmd_explicit_cover,
    'exceptional-scan': cmd_exceptional_scan,
    'omega-check': cmd_omega_check,
    'convergence': cmd_convergence,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=FORMATS, default='text', help='output format (default: text)')
    common.add_argument('--out', metavar='PATH',
                        help='write output to PATH instead of stdout (a bare file name goes to the reports directory)')
    common.add_argument('--seed', type=int, help=f'random seed for sampled modes (default: {DEFAULT_SEED})')
    common.add_argument('--budget', type=_positive, help='work cap for scans (default: config)')

    parser = _Parser(prog='lattice-scope', description='Totient and lattice-visibility toolkit')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', metavar='<subcommand>', parser_class=_Parser)
    sub.required = True

    p = sub.add_parser('totient-sum', parents=[common], help='Phi(x) against 3x^2/pi^2')
    p.add_argument('--x', type=_positive, required=True)
    p.add_argument('--mobius', action='store_true', help='also report sum of mu(n)/n^2')

    p = sub.add_parser('density', parents=[common], help='visible fraction of [1,n]^2')
    p.add_argument('--n', type=_positive, required=True)

    p = sub.add_parser('density-nd', parents=[common], help='primitive fraction of [1,n]^d')
    p.add_argument('--n', type=_positive, required=True)
    p.add_argument('--d', type=int, choices=(2, 3, 4), default=3)

    p = sub.add_parser('hidden-witness', parents=[common], help='CRT corner of a hidden k x k block')
    p.add_argument('--k', type=_positive, required=True)

    p = sub.add_parser('hidden-search', parents=[common], help='first hidden k x k block by scan')
    p.add_argument('--k', type=_positive, required=True)
    p.add_argument('--limit', type=int, required=True)

    p = sub.add_parser('cover-greedy', parents=[common], help='greedy visibility cover of A_n')
    p.add_argument('--n', type=_positive, required=True)

    p = sub.add_parser('cover-exact', parents=[common], help='minimum visibility cover of A_n')
    p.add_argument('--n', type=_positive, required=True)

    p = sub.add_parser('blind-spot', parents=[common], help='point invisible from every input')
    p.add_argument('--point', type=_point, action='append', metavar='X,Y')
    p.add_argument('--random', type=_positive, metavar='R', help='draw R distinct seeded points')
    p.add_argument('--coord-max', type=_positive, default=50)
    p.add_argument('--grid-n', type=_positive, help='report whether the witness fits the grid bound')

    for name, help_text in (('explicit-cover', 'parameters and point set B_n'),
                            ('exceptional-scan', 'points of A_n no point of B_n sees')):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument('--n', type=_positive, required=True)
        group = p.add_mutually_exclusive_group()
        group.add_argument('--g', type=float, help='explicit g(n)')
        group.add_argument('--config', choices=('loglog', 'log_over_loglog'), default='loglog',
                           help='g(n) = 2 ln ln n or 2 ln n / ln ln n')
        if name == 'explicit-cover':
            p.add_argument('--pair', type=_positive, nargs=2, metavar=('I', 'J'),
                           help='also find the coprime offsets for block pair (I, J)')
        else:
            p.add_argument('--sample', type=_positive, metavar='SIZE',
                           help='estimate from SIZE seeded random points instead of a full scan')

    p = sub.add_parser('omega-check', parents=[common], help='omega inequality and Hardy-Ramanujan bound')
    p.add_argument('--limit', type=_positive, required=True)

    p = sub.add_parser('convergence', parents=[common], help='plot-ready CSV series')
    p.add_argument('--kind', choices=SERIES_KINDS, required=True)
    p.add_argument('--n', type=_positive, nargs='+', required=True)
    return parser


# ---------------------------------------------------------------- rendering

def _text_value(key, value):
    if isinstance(value, bool):
        if value:
            return '✅ yes'
        return '⚠️ no' if key in FLAG_FIELDS else '❌ no'
    if value is None:
        return '-'
    if isinstance(value, (list, tuple)) and len(value) > TEXT_LIST_LIMIT:
        return f"{canonical_json(list(value[:TEXT_LIST_LIMIT]))[:-1]},... ({len(value)} items)]"
    return format_cell(value)


def render_text(title, record, indent=''):
    lines = [f"{indent}🔍 {title}"] if not indent else []
    for key, value in record.items():
        if isinstance(value, dict):
            lines.append(f"{indent}  {key}:")
            lines.extend(render_text(title, value, indent + '  ').splitlines())
        elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            for position, item in enumerate(value, 1):
                lines.append(f"{indent}  {key} #{position}:")
                lines.extend(render_text(title, item, indent + '  ').splitlines())
        else:
            lines.append(f"{indent}  {key}: {_text_value(key, value)}")
    return '\n'.join(lines)


def render(title, result, fmt):
    series = hasattr(result, 'to_csv')
    if fmt == 'csv':
        return result.to_csv() if series else records_to_csv([result])
    if fmt == 'json':
        return canonical_json(result.rows if series else result)
    if series:
        if result.truncated:
            title += f" (⚠️ truncated to {len(result.rows)} of {result.requested} rows)"
        return f"📊 {title}\n" + result.to_csv()
    return render_text(title, result)


def run(argv=None):
    """Parse argv, run one subcommand, write its output; returns the exit status"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return 2
    except SystemExit as e:  # --help / --version
        return e.code if isinstance(e.code, int) else 0

    try:
        title, result = COMMANDS[args.command](args)
        write_output(render(title, result, args.format), args.out, sys.stdout)
    except (InvalidArgumentError, RangeError) as e:
        logger.error(f"❌ {args.command}: {e}")
        return 2
    except LatticeScopeError as e:
        logger.error(f"❌ {args.command} failed: {e}")
        return 1
    except OSError as e:
        logger.error(f"❌ Could not write output: {e}")
        return 1
    return 0


def main():
    configure_logging()
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
