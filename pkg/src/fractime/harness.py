"""
Manufactured-solution experiments: convergence ladders, timing tables and
their CSV / Markdown output.
"""
from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import dataclass, fields
from math import gamma as gamma_fn
import math
import os
import statistics
import time
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError
from .krylov import SolverConfig
from .schemes import METHODS, ProblemSpec, Scheme, l2_error, solve
from .toeplitz import ToeplitzOperator

__all__ = ['EXAMPLE_SCHEMES', 'example_problem', 'ConvergenceRow',
           'TimingRow', 'ExperimentPlan', 'run_example', 'solve_example', 'run_convergence',
           'run_timing', 'matvec_scaling', 'ladder', 'write_csv', 'read_csv',
           'to_markdown', 'resolve_method', 'default_config']

EXAMPLE_SCHEMES = {
    1: Scheme.ODE2SIDED,
    2: Scheme.HYPERBOLIC,
    3: Scheme.DIFFUSION_WAVE,
    4: Scheme.DIFFUSION,
}

_ALIASES = {
    Scheme.ODE2SIDED: {'fast': 'fast_cg', 'dense': 'dense', 'direct': 'dense',
                       'cg': 'cg'},
    Scheme.HYPERBOLIC: {'fast': 'fast_space_order', 'direct': 'direct_time_order'},
    Scheme.DIFFUSION_WAVE: {'fast': 'fast_space_order', 'direct': 'direct_time_order'},
    Scheme.DIFFUSION: {'fast': 'fast_block_gmres', 'direct': 'direct_time_marching',
                       'dense': 'dense'},
}


def resolve_method(scheme, method):
    """Map the short names dense/direct/fast/cg onto a scheme's solver method."""
    scheme = Scheme(scheme)
    if method in METHODS[scheme]:
        return method
    try:
        return _ALIASES[scheme][method]
    except KeyError:
        raise ConfigError(f"method {method!r} is not available for {scheme.value}") from None


def default_config(scheme):
    if Scheme(scheme) is Scheme.DIFFUSION_WAVE:
        return SolverConfig(restart=None)
    return SolverConfig()


def _example1(g):
    a, b = gamma_fn(2 - g), gamma_fn(3 - g)

    def forcing(t):
        s = 1.0 - t
        # left and right Caputo derivatives of t(1-t); the right one follows
        # from the left by the reflection t -> 1 - t
        left = t**(1 - g) / a - 2 * t**(2 - g) / b
        right = s**(1 - g) / a - 2 * s**(2 - g) / b
        return left + right + t * s

    return forcing, lambda t: t * (1.0 - t)


def _example2(g):
    a = gamma_fn(2 - g)

    def forcing(x, t):
        return t**(1 - g) / a * np.sin(np.pi * x) + np.pi * t * np.cos(np.pi * x)

    return forcing, lambda x, t: t * np.sin(np.pi * x)


def _example3(g):
    a = gamma_fn(4 - g)

    def forcing(x, t):
        return 6 * t**(3 - g) / a * (x - x * x) + t**3 * (1 - 2 * x)

    return forcing, lambda x, t: t**3 * x * (1 - x)


def _example4(g):
    a = gamma_fn(4 - g)

    def forcing(x, t):
        return (6 * t**(3 - g) / a + np.pi**2 * t**3) * np.sin(np.pi * x)

    return forcing, lambda x, t: t**3 * np.sin(np.pi * x)


_EXAMPLES = {1: _example1, 2: _example2, 3: _example3, 4: _example4}


def example_problem(example, gamma, N, M=None, forcing=None):
    """
    ProblemSpec for one of the four manufactured problems.

    Passing ``forcing`` replaces the manufactured right-hand side (the
    exact solution used for the error stays the same).
    """
    if example not in _EXAMPLES:
        raise ConfigError(f"unknown example {example!r}; choose 1-4")
    f, exact = _EXAMPLES[example](gamma)
    return ProblemSpec(EXAMPLE_SCHEMES[example], gamma, N,
                       None if example == 1 else M,
                       forcing=f if forcing is None else forcing, exact=exact)


@dataclass
class ConvergenceRow:
    mesh_exp: float
    h: Optional[float]
    tau: float
    l2_error: float
    rate: Optional[float]
    iterations: int
    wall_seconds: float
    method: str
    gamma: float
    scheme: str


@dataclass
class TimingRow:
    mesh_exp: float
    N: int
    M: Optional[int]
    method: str
    wall_seconds: Optional[float]
    iterations: Optional[int]
    status: str


def ladder(example, start, stop, fixed_time_exp=None):
    """
    Mesh ladder ``2^-start .. 2^-stop``.

    Example 1 refines ``tau``. The PDE examples refine ``h = tau`` together,
    or only ``h`` when ``fixed_time_exp`` pins ``tau = 2^-fixed_time_exp``.
    """
    out = []
    for e in range(start, stop + 1):
        if example == 1:
            out.append((2**e, None))
        elif fixed_time_exp is None:
            out.append((2**e, 2**e))
        else:
            out.append((2**fixed_time_exp, 2**e))
    return out


@dataclass
class ExperimentPlan:
    example: int
    gammas: Sequence[float]
    meshes: Sequence[Tuple[int, Optional[int]]]
    methods: Sequence[str] = ('fast',)
    cfg: Optional[SolverConfig] = None
    fmt: str = 'csv'
    out: Optional[str] = None
    dense_cap: int = 2**13
    direct_cap: int = 2**22

    def __post_init__(self):
        if self.example not in EXAMPLE_SCHEMES:
            raise ConfigError(f"unknown example {self.example!r}")
        if not self.methods:
            raise ConfigError("plan needs at least one method")
        if not self.gammas:
            raise ConfigError("plan needs at least one gamma")
        sizes = [_refined(self.example, m) for m in self.meshes]
        if not sizes or any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ConfigError("mesh ladder must be non-empty and strictly increasing")
        if self.fmt not in ('csv', 'md'):
            raise ConfigError(f"unknown output format {self.fmt!r}")
        for m in self.methods:
            resolve_method(self.scheme, m)

    @property
    def scheme(self):
        return EXAMPLE_SCHEMES[self.example]


def _refined(example, mesh):
    N, M = mesh
    return N if example == 1 else M


def _exp(n):
    e = math.log2(n)
    return int(e) if e.is_integer() else e


def solve_example(example, gamma, mesh, method='fast', cfg=None, forcing=None):
    """Like :func:`run_example` but also returns the spec and solution grid."""
    N, M = mesh
    spec = example_problem(example, gamma, N, M, forcing=forcing)
    name = resolve_method(spec.scheme, method)
    grid, report = solve(spec, name, cfg or default_config(spec.scheme))
    row = ConvergenceRow(
        mesh_exp=_exp(_refined(example, mesh)), h=spec.h, tau=spec.tau,
        l2_error=l2_error(spec, grid), rate=None, iterations=report.iterations,
        wall_seconds=report.wall_seconds, method=name, gamma=float(gamma),
        scheme=spec.scheme.value)
    return spec, grid, row


def run_example(example, gamma, mesh, method='fast', cfg=None, forcing=None):
    """Solve one manufactured problem and measure error, iterations, time."""
    return solve_example(example, gamma, mesh, method, cfg, forcing)[2]


def _threads():
    try:
        return max(1, int(os.environ.get('FRACTIME_THREADS', '1')))
    except ValueError:
        return 1


def run_convergence(plan):
    """
    Run every (gamma, method, mesh) combination of ``plan``.

    Rows are grouped by gamma and method and ordered by mesh; the rate of a
    row compares it with the previous one in its group. If ``plan.out`` is
    set the table is also written there in ``plan.fmt``.
    """
    jobs = [(g, m, mesh) for g in plan.gammas for m in plan.methods
            for mesh in plan.meshes]

    def job(args):
        g, m, mesh = args
        return run_example(plan.example, g, mesh, m, plan.cfg)

    workers = _threads()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(job, jobs))
    else:
        rows = [job(j) for j in jobs]

    _fill_rates(rows, plan.example, plan.meshes, len(plan.meshes))
    if plan.out:
        _emit(rows, plan.out, plan.fmt)
    return rows


def _fill_rates(rows, example, meshes, per_group):
    sizes = [_refined(example, m) for m in meshes]
    for start in range(0, len(rows), per_group):
        group = rows[start:start + per_group]
        for k in range(1, len(group)):
            prev, cur = group[k - 1], group[k]
            if prev.l2_error > 0 and cur.l2_error > 0:
                cur.rate = (math.log(prev.l2_error / cur.l2_error)
                            / math.log(sizes[k] / sizes[k - 1]))


def _work(plan, method, mesh):
    N, M = mesh
    if plan.scheme is Scheme.ODE2SIDED:
        return N - 1, N - 1
    # dense unknowns, time-marching history work N^2 M
    return (M - 1) * N, N * N * M


def _timed(fn, repeats):
    fn()
    samples = []
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples), out


def run_timing(plan, repeats=3):
    """
    Wall-clock table: one warm-up run, then the median of ``repeats`` runs.

    Dense methods above ``plan.dense_cap`` unknowns and direct time-marching
    above ``plan.direct_cap`` work units are reported as skipped.
    """
    rows = []
    for g in plan.gammas:
        for mesh in plan.meshes:
            for m in plan.methods:
                name = resolve_method(plan.scheme, m)
                dense_n, direct_work = _work(plan, name, mesh)
                exp = _exp(_refined(plan.example, mesh))
                N, M = mesh
                skip = ((name in ('dense', 'cg') and dense_n > plan.dense_cap)
                        or (name.startswith('direct') and direct_work > plan.direct_cap))
                if skip:
                    rows.append(TimingRow(exp, N, M, name, None, None, 'skipped'))
                    continue
                seconds, row = _timed(
                    lambda: run_example(plan.example, g, mesh, name, plan.cfg), repeats)
                rows.append(TimingRow(exp, N, M, name, seconds, row.iterations, 'ok'))
    if plan.out:
        _emit(rows, plan.out, plan.fmt)
    return rows


def matvec_scaling(exponents, repeats=5, seed=0):
    """
    Time the FFT Toeplitz product for ``n = 2^e``.

    Returns ``(n, seconds)`` pairs, seconds being the fastest of
    ``repeats`` runs after a warm-up.
    """
    rng = np.random.default_rng(seed)
    out = []
    for e in exponents:
        n = 2**e
        col = rng.standard_normal(n)
        t = ToeplitzOperator.general(col, np.r_[col[0], rng.standard_normal(n - 1)])
        x = rng.standard_normal(n)
        t.apply(x)
        samples = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            t.apply(x)
            samples.append(time.perf_counter() - t0)
        out.append((n, min(samples)))
    return out


# -- output -----------------------------------------------------------------

def _fmt(v):
    if v is None:
        return ''
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(rows, target):
    """Write dataclass rows as CSV to a path or a text stream."""
    if not rows:
        raise ValueError("nothing to write")
    names = [f.name for f in fields(rows[0])]
    own = isinstance(target, (str, os.PathLike))
    fh = open(target, 'w', newline='') if own else target
    try:
        w = csv.writer(fh)
        w.writerow(names)
        for r in rows:
            w.writerow([_fmt(getattr(r, n)) for n in names])
    finally:
        if own:
            fh.close()


_CONVERTERS = {
    'mesh_exp': lambda s: float(s) if '.' in s else int(s),
    'h': float, 'tau': float, 'l2_error': float, 'rate': float,
    'iterations': int, 'wall_seconds': float, 'gamma': float,
    'N': int, 'M': int,
}


def read_csv(source, row_type=ConvergenceRow):
    """Parse a CSV written by :func:`write_csv` back into rows."""
    own = isinstance(source, (str, os.PathLike))
    fh = open(source, newline='') if own else source
    try:
        rows = []
        for rec in csv.DictReader(fh):
            kw = {}
            for k, v in rec.items():
                conv = _CONVERTERS.get(k, str)
                kw[k] = None if v == '' else conv(v)
            rows.append(row_type(**kw))
        return rows
    finally:
        if own:
            fh.close()


def to_markdown(rows):
    names = [f.name for f in fields(rows[0])]
    lines = ['| ' + ' | '.join(names) + ' |',
             '|' + '---|' * len(names)]
    for r in rows:
        cells = []
        for n in names:
            v = getattr(r, n)
            if v is None:
                cells.append('-' if n != 'wall_seconds' else 'skipped')
            elif n in ('l2_error',):
                cells.append(f'{v:.4e}')
            elif n == 'rate':
                cells.append(f'{v:.4f}')
            elif isinstance(v, float) and n in ('wall_seconds', 'h', 'tau'):
                cells.append(f'{v:.4g}')
            else:
                cells.append(str(v))
        lines.append('| ' + ' | '.join(cells) + ' |')
    return '\n'.join(lines) + '\n'


def _emit(rows, out, fmt):
    if fmt == 'csv':
        write_csv(rows, out)
    else:
        with open(out, 'w') as fh:
            fh.write(to_markdown(rows))
