"""Command-line entry point for the Lambert W series tool."""

import argparse
import csv
import json
import os
import sqlite3
import sys
from datetime import datetime
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import mpmath
import numpy as np

import asymptotics
import convergence
import db
import report
import series
from errors import ConfigError, DomainError, IdentityFailure, WSeriesError
from numerics import PRECISION_MODES, to_mp, working_precision
from oracle import lambert_w

FORMATS = ('csv', 'json', 'table')
CSV_DIGITS = 17
TABLE_DIGITS = 4

BOUNDARY_HEADER = ['param', 're_z', 'im_z', 'residual']
ACCURACY_HEADER = ['param', 'N', 'value', 'precision']

REAL_CURVES = {
    'comtet-real': '0.05:5:100',
    'divergence-lower': '0.05:5:100',
    'divergence-upper': '0.05:5:100',
    'improved-real': '0.05:2.7:100',
    'comtet-p': '-1:1:41',
    'improved-p': '-1:1:41',
    'improved-p-approx': '-1:0.95:40',
}
COMPLEX_CURVES = ('comtet-complex', 'improved-complex')


# === Formatting ===

def _cell(value, digits: int = CSV_DIGITS) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        value = to_mp(value)
    if isinstance(value, (int, float, mpmath.mpf, mpmath.mpc)):
        return mpmath.nstr(value, digits)
    return str(value)


def _json_value(value):
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, int):
        return value
    if isinstance(value, mpmath.mpc):
        return {'re': float(value.real), 'im': float(value.imag)}
    return float(value)


def _emit(rows: List[Dict[str, Any]], header: List[str], fmt: str, out: Optional[str],
          meta: Optional[Dict[str, Any]] = None, digits: int = CSV_DIGITS):
    """Write rows as CSV, JSON or an aligned table."""
    stream = open(out, 'w', newline='') if out else sys.stdout
    try:
        if fmt == 'json':
            payload = {
                'meta': {k: _json_value(v) for k, v in (meta or {}).items()},
                'rows': [{k: _json_value(row.get(k)) for k in header} for row in rows],
            }
            stream.write(json.dumps(payload, indent=2) + '\n')
        elif fmt == 'csv':
            writer = csv.writer(stream, lineterminator='\n')
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(row.get(k), digits) for k in header])
        else:
            cells = [header] + [[_cell(row.get(k), digits) for k in header] for row in rows]
            widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
            for r in cells:
                stream.write('  '.join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + '\n')
    finally:
        if out:
            stream.close()


# === Argument parsing helpers ===

def _number(text: str):
    """Parse an exact rational when possible, else a real or complex value."""
    try:
        value = Fraction(text)
        return value.numerator if value.denominator == 1 else value
    except ZeroDivisionError:
        raise ConfigError(f"zero denominator in {text!r}")
    except ValueError:
        pass
    try:
        return mpmath.mpc(complex(text.replace('i', 'j')))
    except ValueError:
        raise ConfigError(f"cannot parse number {text!r}")


def _trend(args) -> str:
    """improving, diverging or mixed, from the tail-windowed error at three truncations."""
    checkpoints = (args.N // 3, 2 * args.N // 3, args.N)
    if checkpoints[0] < convergence.TREND_WINDOW:
        raise ConfigError(f"--trend needs N >= {3 * convergence.TREND_WINDOW}, got {args.N}")
    if args.x is not None:
        if args.alpha is not None:
            raise ConfigError("--trend compares against W_0 and takes no --alpha")
        z, p = args.x, 0
    else:
        if args.z_im or args.p_im or args.branch != 0:
            raise ConfigError("--trend needs a real z, a real p and branch 0")
        z, p = args.z_re, args.p_re
    trend = convergence.series_trend(z, args.series, p, checkpoints)
    if trend.improving:
        return 'improving'
    return 'diverging' if trend.diverging else 'mixed'


def _grid(text: str) -> List:
    """start:stop:count to a list of mpf values."""
    parts = text.split(':')
    if len(parts) != 3:
        raise ConfigError(f"grid must be start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"grid must be start:stop:count, got {text!r}")
    if count < 1:
        raise ConfigError(f"grid count must be >= 1, got {count}")
    if stop < start:
        raise ConfigError(f"grid stop {stop} is below start {start}")
    return [mpmath.mpf(float(v)) for v in np.linspace(start, stop, count)]


def _truncations(text: str) -> List[int]:
    try:
        values = [int(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise ConfigError(f"truncations must be comma-separated integers, got {text!r}")
    if not values or min(values) < 1:
        raise ConfigError(f"truncations must be >= 1, got {text!r}")
    return values


def _complex_arg(re_part, im_part):
    if im_part:
        return mpmath.mpc(re_part, im_part)
    return mpmath.mpf(re_part)


# === Commands ===

def cmd_eval(args) -> int:
    """Series value against the oracle, with the fundamental-relation residual."""
    spec = series.SeriesSpec(args.series, args.N)
    variables = None
    u = None
    if args.x is not None:
        x = mpmath.mpf(args.x)
        alpha = mpmath.mpf(args.alpha) if args.alpha is not None else 1
        if args.series == 'wright-ln':
            value = series.wright_series_eval(x, args.N)
            oracle_value = lambert_w(0, x)
        else:
            variables = series.untransformed_variables(x, alpha)
            u = series.partial_u(variables, spec)
            value = series.phi_alpha(x, alpha, spec)
            oracle_value = alpha * lambert_w(0, x ** (1 / mpmath.mpf(alpha)) / alpha)
    elif args.z_re is not None:
        z = _complex_arg(args.z_re, args.z_im)
        p = _complex_arg(args.p_re, args.p_im)
        value = series.transformed_w(z, p, spec)
        oracle_value = lambert_w(args.branch, z)
        if args.series != 'wright-ln':
            variables = series.transformed_variables(z, p)
            u = series.partial_u(variables, spec)
    else:
        raise ConfigError("eval needs --x or --z-re")

    error = abs(value - oracle_value)
    row = {
        'series': args.series,
        'N': args.N,
        'value_re': mpmath.re(value),
        'value_im': mpmath.im(value),
        'oracle_re': mpmath.re(oracle_value),
        'oracle_im': mpmath.im(oracle_value),
        'abs_error': error,
        'rel_error': error / abs(oracle_value) if oracle_value != 0 else None,
        'residual': abs(series.fundamental_residual(u, variables)) if variables is not None else None,
        'converges': convergence.u_series_converges(variables, args.series).converges if variables else None,
        'precision': args.precision,
    }
    if args.trend:
        row['trend'] = _trend(args)
    _emit([row], list(row), args.format or 'csv', args.out, {'precision': args.precision})
    return 0


def cmd_coeffs(args) -> int:
    """c_m(sigma) or a_n with the asymptotic estimate alongside."""
    rows = []
    if args.kind == 'cm':
        if args.sigma is None:
            raise ConfigError("coeffs --kind cm needs --sigma")
        sigma = _number(args.sigma)
        table = series.coefficient_table(sigma, args.M, args.provenance)
        for m in range(1, args.M + 1):
            value = table[m]
            rows.append({
                'index': m,
                'value': value,
                'exact': str(value) if isinstance(value, Fraction) else '',
                'estimate': asymptotics.cm_asymptotic(sigma, m),
            })
        provenance = table.provenance
    else:
        table = series.wright_coefficients(args.M, args.method)
        for n in range(1, args.M + 1):
            rows.append({'index': n, 'value': table[n], 'exact': '', 'estimate': asymptotics.an_asymptotic(n)})
        provenance = table.provenance

    meta = {'kind': args.kind, 'provenance': provenance, 'precision': args.precision}
    _emit(rows, ['index', 'value', 'exact', 'estimate'], args.format or 'csv', args.out, meta)
    return 0


def _real_curve_rows(curve: str, params: Sequence) -> List[Dict[str, Any]]:
    rows = []
    for param in params:
        if curve == 'comtet-real':
            t = convergence.comtet_real_threshold(param)
            value, residual = t.value, t.residual
        elif curve in ('divergence-lower', 'divergence-upper'):
            lower, upper = convergence.comtet_divergence_interval(param)
            value, residual = (lower if curve == 'divergence-lower' else upper), 0
        elif curve == 'improved-real':
            domain = convergence.alpha_domain(param)
            if domain.case == 'i':
                t = domain.threshold('x_alpha')
                value, residual = t.value, t.residual
            elif domain.case == 'ii':
                value, residual = mpmath.mpf(1), 0
            else:
                t = domain.threshold('mu_alpha')
                value, residual = mpmath.exp(param / t.value), t.residual
        elif curve == 'comtet-p':
            t = convergence.transformed_comtet_threshold(param)
            value, residual = t.value, t.residual
        elif curve == 'improved-p':
            t = convergence.transformed_improved_threshold(param, 'exact')
            value, residual = t.value, t.residual
        else:
            t = convergence.transformed_improved_threshold(param, 'approx')
            value, residual = t.value, t.residual
        rows.append({'param': param, 're_z': value, 'im_z': mpmath.mpf(0), 'residual': residual})
    return rows


def cmd_boundary(args) -> int:
    """Threshold curves over a parameter grid, or a sampled complex boundary."""
    if args.curve in COMPLEX_CURVES:
        p = mpmath.mpf(args.p)
        if args.curve == 'comtet-complex':
            curve = convergence.transformed_comtet_boundary(p, args.samples)
        else:
            curve = convergence.transformed_improved_boundary(p, args.samples)
        rows = [
            {'param': param, 're_z': x, 'im_z': y, 'residual': residual}
            for param, (x, y), residual in zip(curve.parameters, curve.samples, curve.residuals)
        ]
        meta = {'curve': curve.source, 'p': p, 'samples': len(curve)}
    else:
        params = _grid(args.grid or REAL_CURVES[args.curve])
        rows = _real_curve_rows(args.curve, params)
        meta = {'curve': args.curve}
    meta['precision'] = args.precision
    _emit(rows, BOUNDARY_HEADER, args.format or 'csv', args.out, meta)
    return 0


def _accuracy_value(value, oracle_value, measure: str):
    if measure == 'ratio':
        return mpmath.re(value / oracle_value)
    error = abs(value - oracle_value) / abs(oracle_value)
    return mpmath.log10(max(error, mpmath.eps))


def cmd_accuracy(args) -> int:
    """Partial-sum accuracy against the oracle over z, or over p at a fixed z."""
    truncations = _truncations(args.N)
    rows = []
    best = {}

    if args.fixed_z is not None:
        z = mpmath.mpf(args.fixed_z)
        oracle_value = lambert_w(0, z)
        points = [(p, z, p) for p in _grid(args.grid or '-1:1:41')]
    else:
        p = mpmath.mpf(args.p)
        points = [(z, z, p) for z in _grid(args.grid or '1.05:30:60')]

    for N in truncations:
        spec = series.SeriesSpec(args.series, N)
        for param, z, p in points:
            try:
                value = series.transformed_w(z, p, spec)
            except DomainError as e:
                db.log_event(f"accuracy: skipped {args.series} N={N} at {mpmath.nstr(param, 8)}: {e}")
                continue
            reference = oracle_value if args.fixed_z is not None else lambert_w(0, z)
            rows.append({'param': param, 'N': N, 'value': _accuracy_value(value, reference, args.measure),
                         'precision': args.precision})
            if args.fixed_z is not None:
                error = abs(value - reference)
                if N not in best or error < best[N][1]:
                    best[N] = (param, error)

    meta = {'series': args.series, 'measure': args.measure, 'precision': args.precision}
    for N, (param, _) in best.items():
        meta[f'best_p_N{N}'] = param
        print(f"best p for N={N}: {mpmath.nstr(param, 6)}", file=sys.stderr)
    _emit(rows, ACCURACY_HEADER, args.format or 'csv', args.out, meta)
    return 0


def cmd_branch_table(args) -> int:
    """W_-1 against both approximants, or an error sweep over (-1/e, 0)."""
    if args.sweep:
        lo = -1 / mpmath.e
        rows = []
        for t in np.linspace(0.0, 1.0, args.sweep + 2)[1:-1]:
            z = lo * (1 - mpmath.mpf(float(t)))
            exact = lambert_w(-1, z)
            rows.append({
                'z': z,
                'transformed_error': abs(series.branch_m1_approx(z, 'transformed') - exact),
                'untransformed_error': abs(series.branch_m1_approx(z, 'untransformed') - exact),
            })
        _emit(rows, ['z', 'transformed_error', 'untransformed_error'], args.format or 'csv', args.out)
        return 0

    rows = []
    for row in report.branch_table_rows():
        rows.append({
            'z': row['z'],
            'oracle': mpmath.nstr(row['oracle'], TABLE_DIGITS + 1),
            'transformed': mpmath.nstr(row['transformed'], TABLE_DIGITS + 1),
            'untransformed_re': mpmath.nstr(mpmath.re(row['untransformed']), TABLE_DIGITS + 1),
            'untransformed_im': mpmath.nstr(mpmath.im(row['untransformed']), TABLE_DIGITS),
        })
    header = ['z', 'oracle', 'transformed', 'untransformed_re', 'untransformed_im']
    _emit(rows, header, args.format or 'table', args.out)
    return 0


def cmd_identities(args) -> int:
    """Run the identity suites; exit 1 naming the first failing identity."""
    if args.max_n < 1:
        raise ConfigError(f"--max-n must be >= 1, got {args.max_n}")
    rows = report.identity_matrix(args.max_n)
    _emit(rows, ['suite', 'checked', 'passed', 'success', 'error'], args.format or 'table', args.out)
    failed = [row for row in rows if not row['success']]
    if failed:
        raise IdentityFailure(f"{failed[0]['suite']}: {failed[0]['error']}")
    return 0


def cmd_constants(args) -> int:
    _emit(report.constants_rows(), ['name', 'value', 'residual'], args.format or 'table', args.out,
          {'precision': args.precision})
    return 0


def cmd_report(args) -> int:
    out = args.out or str(db.get_data_dir() / 'w_series_report.pdf')
    try:
        path = report.generate_report_pdf(out, args.max_n)
    except ImportError as e:
        raise ConfigError(str(e)) from e
    print(f"Report written to {path}")
    return 0


def cmd_settings(args) -> int:
    for item in args.set or []:
        if '=' not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split('=', 1)
        db.set_setting(key.strip(), value.strip())
    for key in args.unset or []:
        db.delete_setting(key)
    rows = [{'key': k, 'value': v} for k, v in sorted(db.get_settings().items())]
    _emit(rows, ['key', 'value'], args.format or 'table', args.out)
    return 0


def cmd_runs(args) -> int:
    rows = db.get_runs(args.limit)
    header = ['id', 'command', 'arguments', 'exit_code', 'started_at', 'finished_at']
    _emit(rows, header, args.format or 'table', args.out)
    return 0


COMMANDS = {
    'eval': cmd_eval,
    'coeffs': cmd_coeffs,
    'boundary': cmd_boundary,
    'accuracy': cmd_accuracy,
    'branch-table': cmd_branch_table,
    'identities': cmd_identities,
    'constants': cmd_constants,
    'report': cmd_report,
    'settings': cmd_settings,
    'runs': cmd_runs,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=FORMATS, default=None)
    common.add_argument('--out', default=None, help='output path (default: stdout)')
    common.add_argument('--precision', choices=PRECISION_MODES, default='standard')

    parser = argparse.ArgumentParser(prog='w-series', description='Lambert W series and their convergence domains')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('eval', parents=[common], help='evaluate a series against the oracle')
    p.add_argument('--series', choices=series.VARIANTS, default='improved')
    p.add_argument('--N', type=int, default=40)
    p.add_argument('--x', type=float)
    p.add_argument('--alpha', type=float)
    p.add_argument('--z-re', type=float)
    p.add_argument('--z-im', type=float, default=0.0)
    p.add_argument('--p-re', type=float, default=0.0)
    p.add_argument('--p-im', type=float, default=0.0)
    p.add_argument('--branch', type=int, choices=(-1, 0, 1), default=0)
    p.add_argument('--trend', action='store_true',
                   help='add the windowed-error trend at N/3, 2N/3 and N (real points, branch 0)')

    p = sub.add_parser('coeffs', parents=[common], help='tabulate expansion coefficients')
    p.add_argument('--kind', choices=('cm', 'an'), default='cm')
    p.add_argument('--sigma', help='rational (1/3), real or complex (1+2i)')
    p.add_argument('--M', type=int, default=10)
    p.add_argument('--provenance', choices=('eulerian', 'improved'), default='eulerian')
    p.add_argument('--method', choices=series.WRIGHT_METHODS, default='recurrence')

    p = sub.add_parser('boundary', parents=[common], help='convergence thresholds and boundary curves')
    p.add_argument('--curve', choices=tuple(REAL_CURVES) + COMPLEX_CURVES, required=True)
    p.add_argument('--grid', help='start:stop:count over alpha or p')
    p.add_argument('--p', type=float, default=0.0)
    p.add_argument('--samples', type=int)

    p = sub.add_parser('accuracy', parents=[common], help='partial-sum accuracy sweeps')
    p.add_argument('--series', choices=series.VARIANTS, default='comtet')
    p.add_argument('--N', default='10,20,40', help='comma-separated truncations')
    p.add_argument('--grid', help='start:stop:count over z (or p with --fixed-z)')
    p.add_argument('--p', type=float, default=0.0)
    p.add_argument('--fixed-z', type=float)
    p.add_argument('--measure', choices=('ratio', 'log10-error'), default='ratio')

    p = sub.add_parser('branch-table', parents=[common], help='W_-1 against its approximants')
    p.add_argument('--sweep', type=int, default=0, help='emit an error sweep with this many points')

    p = sub.add_parser('identities', parents=[common], help='run the combinatorial identity suites')
    p.add_argument('--max-n', type=int, default=report.DEFAULT_MAX_N)

    sub.add_parser('constants', parents=[common], help='tabulate the convergence constants')

    p = sub.add_parser('report', parents=[common], help='write the PDF report')
    p.add_argument('--max-n', type=int, default=report.DEFAULT_MAX_N)

    p = sub.add_parser('settings', parents=[common], help='list or edit settings')
    p.add_argument('--set', action='append', metavar='KEY=VALUE')
    p.add_argument('--unset', action='append', metavar='KEY')

    p = sub.add_parser('runs', parents=[common], help='list recent runs')
    p.add_argument('--limit', type=int, default=20)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    # a_n tables cancel heavily; always build them at elevated precision
    if args.command == 'coeffs' and args.kind == 'an':
        args.precision = 'elevated'

    started_at = datetime.now()
    try:
        with working_precision(args.precision):
            code = COMMANDS[args.command](args)
    except IdentityFailure as e:
        db._log_error(f"{args.command}: identity failure: {e}")
        print(f"Identity failure: {e}", file=sys.stderr)
        code = 1
    except (DomainError, ConfigError) as e:
        db._log_error(f"{args.command}: {e}")
        print(f"Error: {e}", file=sys.stderr)
        code = 2
    except WSeriesError as e:
        db._log_error(f"{args.command}: {type(e).__name__}: {e}")
        print(f"Error: {e}", file=sys.stderr)
        code = 2

    try:
        db.record_run(args.command, argv, code, started_at)
    except sqlite3.Error as e:
        db._log_error(f"could not record run: {e}")
    db.log_event(f"{args.command} exit={code}")
    return code


if __name__ == '__main__':
    sys.exit(main())
