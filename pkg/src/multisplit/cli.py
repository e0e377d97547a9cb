"""Command line front end: ``multisplit <subcommand> [options]``.

Exit codes: 0 success (or certified), 1 not certified / not converged,
2 undecided (or usage error), 3 missing input file, 4 engine failure,
5 invalid input.
"""
import argparse
import json
import os
import sys

import numpy as np

from . import certificates, iteration, pss_params, problems
from .descfile import build_multisplitting, build_pss, load_description
from .errors import MultisplitError
from .linalg import spectral_radius
from .mmio import read_matrix, read_vector, write_matrix
from .parallel import default_workers

EXIT_OK, EXIT_FAIL, EXIT_UNDECIDED, EXIT_MISSING, EXIT_ENGINE, EXIT_INPUT = range(6)


class MissingFile(Exception):
    pass


def _require(path):
    if path is None:
        return None
    if not os.path.exists(path):
        raise MissingFile(path)
    return path


def _dump(obj, path=None):
    text = json.dumps(obj, indent=2, sort_keys=True) + '\n'
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, 'w') as fh:
            fh.write(text)


def _report_path(args, name):
    os.makedirs(args.report_dir, exist_ok=True)
    return os.path.join(args.report_dir, name)


def _load_system(args):
    A = read_matrix(_require(args.matrix))
    if getattr(args, 'rhs', None):
        b = read_vector(_require(args.rhs))
    else:
        b = A @ np.ones(A.shape[0])
    return A, b


# ---------------------------------------------------------------- commands

def cmd_gen(args):
    dims = tuple(int(d) for d in args.dims.split(','))
    spec = problems.ProblemSpec(family=args.family, dims=dims, strength=args.strength,
                                seed=args.seed, real=args.real,
                                block_size=args.block_size)
    A = problems.generate(spec)
    if isinstance(A, certificates.BlockMatrix):
        A = A.to_dense()
    out = args.out if args.out.endswith('.mtx') else args.out + '.mtx'
    if os.path.dirname(out) == '':
        out = _report_path(args, out)
    write_matrix(out, A, symmetry='general')
    _dump(spec.to_dict(), out[:-4] + '.json')
    print(out)
    return EXIT_OK


def cmd_certify(args):
    A = read_matrix(_require(args.matrix))
    if args.condition == 'extended-h':
        res = certificates.extended_h_matrix(
            certificates.BlockMatrix.from_dense(A, args.block_size))
    else:
        ms, _ = build_multisplitting(load_description(_require(args.splitting)), A)
        res = certificates.certify_multisplitting(ms, args.condition)
    doc = res.to_dict()
    _dump(doc, args.report)
    if res.status == certificates.CERTIFIED:
        return EXIT_OK
    return EXIT_UNDECIDED if res.status == certificates.UNDECIDED else EXIT_FAIL


def _cfg(args):
    return iteration.SolveConfig(tol=args.tol, max_iter=args.max_iter, omega=args.omega,
                                 workers=args.workers, exact_rho=args.exact_rho)


def _write_reports(args, report, stem):
    report.write_json(_report_path(args, stem + '_summary.json'))
    report.write_csv(_report_path(args, stem + '_history.csv'))
    if args.report:
        if args.report.endswith('.csv'):
            report.write_csv(args.report)
        else:
            report.write_json(args.report)


def cmd_solve(args):
    A, b = _load_system(args)
    ms, _ = build_multisplitting(load_description(_require(args.splitting)), A)
    report = iteration.multisplit_run(ms, b, _cfg(args))
    _write_reports(args, report, 'solve')
    _dump({k: v for k, v in report.summary().items() if not k.startswith('final_x')})
    return EXIT_OK if report.converged else EXIT_FAIL


def cmd_pss_solve(args):
    A, b = _load_system(args)
    splits, betas = build_pss(load_description(_require(args.splitting)), A)
    report = iteration.pss_run(splits, b, _cfg(args), weights=betas)
    _write_reports(args, report, 'pss_solve')
    _dump({k: v for k, v in report.summary().items() if not k.startswith('final_x')})
    return EXIT_OK if report.converged else EXIT_FAIL


def _parse_grid(text):
    lo, hi, steps = text.split(':')
    lo, hi, steps = float(lo), float(hi), int(steps)
    if not 0 < lo <= hi or steps < 1:
        raise ValueError(f'bad grid {text!r}; expected lo:hi:steps with 0 < lo <= hi')
    return np.geomspace(lo, hi, steps) if steps > 1 else np.array([lo])


def cmd_tune_alpha(args):
    from .splittings import PssSplitting
    if args.p_matrix:
        P = read_matrix(_require(args.p_matrix))
        p = PssSplitting(P, np.zeros_like(P, dtype=P.dtype), 1.0)
    else:
        A = read_matrix(_require(args.matrix))
        splits, _ = build_pss(load_description(_require(args.splitting)), A)
        p = splits[args.part - 1]
    analysis = pss_params.optimal_alpha(p.P)
    grid = np.sort(np.append(_parse_grid(args.grid), analysis.alpha_star))
    rows = pss_params.rho_vs_bound_sweep(p, grid)
    csv_path = args.report or _report_path(args, 'tune_alpha.csv')
    pss_params.write_sweep_csv(rows, csv_path)
    json_path = os.path.splitext(csv_path)[0] + '.json'
    _dump(analysis.to_dict(), json_path)
    _dump({'alpha_star': analysis.alpha_star, 'bound_at_star': analysis.bound_at_star,
           'grid_fallback': analysis.grid_fallback, 'sweep_csv': csv_path})
    return EXIT_OK


def cmd_lift_check(args):
    A = read_matrix(_require(args.matrix))
    ms, _ = build_multisplitting(load_description(_require(args.splitting)), A)
    rho_t = spectral_radius(iteration.iteration_matrix(ms))
    B, C = iteration.lifted_matrices(ms)
    rho_l = spectral_radius(np.linalg.solve(B, C))
    diff = abs(rho_t - rho_l)
    ok = diff <= 1e-10 * max(1.0, rho_t)
    _dump({'rho_T': rho_t, 'rho_lifted': rho_l, 'abs_diff': diff, 'agree': ok},
          args.report)
    return EXIT_OK if ok else EXIT_FAIL


# ------------------------------------------------------------------ parser

def build_parser():
    parser = argparse.ArgumentParser(prog='multisplit', description=__doc__.splitlines()[0])
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--workers', type=int, default=None,
                        help='worker threads (default: $MULTISPLIT_WORKERS or 1)')
    parser.add_argument('--tol', type=float, default=1e-10)
    parser.add_argument('--report-dir', default='.')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('gen', help='generate a test matrix')
    p.add_argument('--family', required=True, choices=problems.FAMILIES)
    p.add_argument('--dims', required=True, help='comma separated, e.g. 64 or 8,8')
    p.add_argument('--strength', type=float, default=0.0,
                   help='drift q, skew scale or off-diagonal scale')
    p.add_argument('--real', action='store_true')
    p.add_argument('--block-size', type=int, default=None)
    p.add_argument('--out', required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser('certify', help='decide a convergence condition')
    p.add_argument('--matrix', required=True)
    p.add_argument('--splitting')
    p.add_argument('--condition', default='contraction',
                   choices=sorted(certificates.CONDITIONS) + ['extended-h'])
    p.add_argument('--block-size', type=int, default=1)
    p.add_argument('--report')
    p.set_defaults(func=cmd_certify)

    for name, func in (('solve', cmd_solve), ('pss-solve', cmd_pss_solve)):
        p = sub.add_parser(name, help=f'run the {name} engine')
        p.add_argument('--matrix', required=True)
        p.add_argument('--rhs', help='right-hand side; default A @ ones')
        p.add_argument('--splitting', required=True)
        p.add_argument('--omega', type=float, default=1.0)
        p.add_argument('--tol', type=float, default=argparse.SUPPRESS)
        p.add_argument('--max-iter', type=int, default=10000)
        p.add_argument('--report', help='extra report path (.json or .csv)')
        p.add_argument('--exact-rho', action='store_true')
        p.set_defaults(func=func)

    p = sub.add_parser('tune-alpha', help='sweep the PSS shift and find its bound minimizer')
    p.add_argument('--matrix')
    p.add_argument('--splitting')
    p.add_argument('--p-matrix', help='analyze this positive definite P directly')
    p.add_argument('--part', type=int, default=1)
    p.add_argument('--grid', default='0.1:10:21')
    p.add_argument('--report', help='sweep CSV path (analysis JSON written alongside)')
    p.set_defaults(func=cmd_tune_alpha)

    p = sub.add_parser('lift-check', help='compare rho(T) with rho(B^-1 C)')
    p.add_argument('--matrix', required=True)
    p.add_argument('--splitting', required=True)
    p.add_argument('--report')
    p.set_defaults(func=cmd_lift_check)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.workers is None:
        args.workers = default_workers()
    if args.command == 'tune-alpha' and not (args.p_matrix or (args.matrix and args.splitting)):
        parser.error('tune-alpha needs --p-matrix or both --matrix and --splitting')
    if args.command == 'certify' and args.condition != 'extended-h' and not args.splitting:
        parser.error('certify needs --splitting for splitting conditions')
    try:
        return args.func(args)
    except (MissingFile, FileNotFoundError) as err:
        print(f'error: file not found: {err.args[0] if err.args else err}', file=sys.stderr)
        return EXIT_MISSING
    except MultisplitError as err:
        print(f'error: {type(err).__name__}: {err}', file=sys.stderr)
        return EXIT_ENGINE
    except (ValueError, KeyError) as err:
        print(f'error: invalid input: {err}', file=sys.stderr)
        return EXIT_INPUT


if __name__ == '__main__':
    sys.exit(main())
