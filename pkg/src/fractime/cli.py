"""
Command line interface::

    fractime solve --scheme ode2sided --gamma 0.5 --n 1024 --method fast
    fractime convergence --example 4 --gamma 0.1 --levels 3..8
    fractime bench --example 1 --gamma 0.5 --levels 9..14 --methods dense,cg,fast
    fractime bench --matvec --levels 16..19
    fractime weights --kind g --gamma 0.5 --count 10
"""
import argparse
import csv
import sys

from .errors import FractimeError
from .harness import (EXAMPLE_SCHEMES, ExperimentPlan, default_config, ladder,
                      matvec_scaling, run_convergence, run_timing,
                      solve_example, to_markdown, write_csv)
from .krylov import SolverConfig
from .schemes import Scheme
from .weights import g_weights, m_weights

_SCHEME_EXAMPLE = {s.value: k for k, s in EXAMPLE_SCHEMES.items()}


def _levels(text):
    try:
        a, b = text.split('..')
        a, b = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    if b < a:
        raise argparse.ArgumentTypeError("levels must be increasing")
    return a, b


def _floats(text):
    return [float(v) for v in text.split(',')]


def _add_solver_args(p):
    p.add_argument('--tol', type=float, default=None)
    p.add_argument('--restart', type=int, default=None,
                   help="GMRES restart length (0 = no restart)")
    p.add_argument('--max-iter', type=int, default=None)
    p.add_argument('--out', default=None, help="output file (default stdout)")
    p.add_argument('--format', choices=('csv', 'md'), default='csv')


def _config(args, scheme):
    base = default_config(scheme)
    restart = base.restart
    if args.restart is not None:
        restart = None if args.restart == 0 else args.restart
    return SolverConfig(tol=args.tol if args.tol is not None else base.tol,
                        max_iter=args.max_iter or base.max_iter,
                        restart=restart)


def build_parser():
    parser = argparse.ArgumentParser(
        prog='fractime',
        description="Fast Toeplitz/FFT solvers for Caputo time-fractional problems.")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('solve', help="solve one manufactured problem")
    p.add_argument('--scheme', required=True, choices=[s.value for s in Scheme])
    p.add_argument('--gamma', type=float, required=True)
    p.add_argument('--n', type=int, required=True, help="number of time steps")
    p.add_argument('--m', type=int, default=None, help="number of space cells")
    p.add_argument('--method', default='fast')
    p.add_argument('--solution', default=None,
                   help="also write the solution grid to this CSV file")
    _add_solver_args(p)

    p = sub.add_parser('convergence', help="error/rate table over a mesh ladder")
    p.add_argument('--example', type=int, required=True, choices=(1, 2, 3, 4))
    p.add_argument('--gamma', type=_floats, required=True,
                   help="one value or a comma separated list")
    p.add_argument('--levels', type=_levels, required=True, help="A..B, meshes 2^-A..2^-B")
    p.add_argument('--tau-exp', type=int, default=None,
                   help="pin tau = 2^-E and refine only h (PDE examples)")
    p.add_argument('--methods', default='fast')
    _add_solver_args(p)

    p = sub.add_parser('bench', help="wall-clock comparison of methods")
    p.add_argument('--example', type=int, choices=(1, 2, 3, 4), default=1)
    p.add_argument('--gamma', type=_floats, default=[0.5])
    p.add_argument('--levels', type=_levels, required=True)
    p.add_argument('--tau-exp', type=int, default=None)
    p.add_argument('--methods', default='fast')
    p.add_argument('--repeats', type=int, default=3)
    p.add_argument('--dense-cap', type=int, default=2**13)
    p.add_argument('--direct-cap', type=int, default=2**22)
    p.add_argument('--matvec', action='store_true',
                   help="time only the FFT Toeplitz product for n = 2^level")
    _add_solver_args(p)

    p = sub.add_parser('weights', help="print a Caputo weight sequence as CSV")
    p.add_argument('--kind', choices=('g', 'm'), required=True)
    p.add_argument('--gamma', type=float, required=True)
    p.add_argument('--count', type=int, required=True)
    return parser


def _write(rows, args, stdout):
    if args.format == 'md':
        text = to_markdown(rows)
        if args.out:
            with open(args.out, 'w') as fh:
                fh.write(text)
        else:
            stdout.write(text)
    else:
        write_csv(rows, args.out or stdout)


def _cmd_solve(args, stdout):
    example = _SCHEME_EXAMPLE[args.scheme]
    scheme = Scheme(args.scheme)
    cfg = _config(args, scheme)
    spec, grid, row = solve_example(example, args.gamma, (args.n, args.m),
                                    args.method, cfg)
    if args.solution:
        with open(args.solution, 'w', newline='') as fh:
            w = csv.writer(fh)
            if scheme is Scheme.ODE2SIDED:
                w.writerow(['t', 'u'])
                for t, u in zip(spec.times()[:-1], grid.values):
                    w.writerow([repr(float(t)), repr(float(u))])
            else:
                w.writerow(['x', 't', 'u'])
                for i, x in enumerate(spec.nodes()):
                    for n, t in enumerate(spec.times()):
                        w.writerow([repr(float(x)), repr(float(t)),
                                    repr(float(grid.values[i, n]))])
    _write([row], args, stdout)


def _plan(args):
    a, b = args.levels
    return ExperimentPlan(
        example=args.example, gammas=args.gamma,
        meshes=ladder(args.example, a, b, args.tau_exp),
        methods=[m.strip() for m in args.methods.split(',')],
        cfg=_config(args, EXAMPLE_SCHEMES[args.example]), fmt=args.format)


def _cmd_convergence(args, stdout):
    _write(run_convergence(_plan(args)), args, stdout)


def _cmd_bench(args, stdout):
    if args.matvec:
        a, b = args.levels
        res = matvec_scaling(range(a, b + 1), repeats=max(args.repeats, 1))
        w = csv.writer(stdout)
        w.writerow(['n', 'seconds', 'ratio'])
        prev = None
        for n, s in res:
            w.writerow([n, repr(s), '' if prev is None else repr(s / prev)])
            prev = s
        return
    plan = _plan(args)
    plan.dense_cap, plan.direct_cap = args.dense_cap, args.direct_cap
    _write(run_timing(plan, repeats=args.repeats), args, stdout)


def _cmd_weights(args, stdout):
    seq = (g_weights if args.kind == 'g' else m_weights)(args.gamma, args.count)
    w = csv.writer(stdout)
    w.writerow(['k', 'value'])
    for k, v in enumerate(seq.values):
        w.writerow([k, repr(float(v))])


_COMMANDS = {'solve': _cmd_solve, 'convergence': _cmd_convergence,
             'bench': _cmd_bench, 'weights': _cmd_weights}


def main(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        _COMMANDS[args.command](args, stdout)
    except (FractimeError, ValueError) as exc:
        print(f"fractime: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == '__main__':
    sys.exit(main())
