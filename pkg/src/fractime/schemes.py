"""
Finite-difference schemes for Caputo time-fractional problems.

Four problems are supported, all with homogeneous Dirichlet data:

``ode2sided``
    ``D_left^g u + D_right^g u + u = f`` on ``(0, T)``, ``0 < g < 1``.
``hyperbolic``
    ``D^g u + u_x = f``, ``0 < g < 1``, box scheme centred at ``x_{i-1/2}``.
``wave``
    ``D^g u + u_x = f``, ``1 < g < 2``, centred at ``t_{n-1/2}``.
``diffusion``
    ``D^g u = u_xx + f``, ``0 < g < 1``.

Every scheme has a dense or time-marching reference path and a fast path.
The fast paths reorder unknowns so that each linear system has (block)
Toeplitz structure and is solved by CG or GMRES with FFT products.
"""
from dataclasses import dataclass
from enum import Enum
from math import gamma as gamma_fn
import time
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError, DomainError, SizeError
from .krylov import SolverConfig, cg_solve, dense_solve, gmres_solve
from .toeplitz import (BlockTridiagonalToeplitzOperator, DenseOperator,
                       ToeplitzOperator)
from .weights import first_difference, g_weights, m_weights, second_difference

__all__ = ['Scheme', 'ProblemSpec', 'SchemeConstants', 'SolutionGrid',
           'SolveReport', 'scheme_constants', 'assemble_scheme1',
           'assemble_scheme2_reordered', 'assemble_scheme3_reordered',
           'assemble_scheme4', 'solve_scheme1', 'solve_scheme2',
           'solve_scheme3', 'solve_scheme4', 'solve', 'caputo_left_apply',
           'caputo_right_apply', 'l2_error', 'thomas_solve', 'METHODS']


class Scheme(Enum):
    ODE2SIDED = 'ode2sided'
    HYPERBOLIC = 'hyperbolic'
    DIFFUSION_WAVE = 'wave'
    DIFFUSION = 'diffusion'


METHODS = {
    Scheme.ODE2SIDED: ('fast_cg', 'cg', 'dense'),
    Scheme.HYPERBOLIC: ('fast_space_order', 'direct_time_order'),
    Scheme.DIFFUSION_WAVE: ('fast_space_order', 'direct_time_order'),
    Scheme.DIFFUSION: ('fast_block_gmres', 'direct_time_marching', 'dense'),
}


@dataclass(frozen=True)
class ProblemSpec:
    """
    A discretized problem.

    ``forcing`` is ``f(t)`` for ``ode2sided`` and ``f(x, t)`` otherwise; it is
    called with broadcastable numpy arrays. ``initial_u0(x)`` and
    ``initial_phi(x)`` default to zero. ``exact`` follows the signature of
    ``forcing`` and is only used for error measurement.
    """
    scheme: Scheme
    gamma: float
    N: int
    M: Optional[int] = None
    T: float = 1.0
    L: float = 1.0
    forcing: Optional[Callable] = None
    initial_u0: Optional[Callable] = None
    initial_phi: Optional[Callable] = None
    exact: Optional[Callable] = None

    def __post_init__(self):
        try:
            scheme = Scheme(self.scheme)
        except ValueError:
            raise ConfigError(f"unknown scheme {self.scheme!r}") from None
        object.__setattr__(self, 'scheme', scheme)
        g = self.gamma
        if scheme is Scheme.DIFFUSION_WAVE:
            if not 1.0 < g < 2.0:
                raise ConfigError(f"scheme {scheme.value} needs gamma in (1, 2), got {g}")
        elif not 0.0 < g < 1.0:
            raise ConfigError(f"scheme {scheme.value} needs gamma in (0, 1), got {g}")
        if int(self.N) != self.N or self.N < 1:
            raise ConfigError(f"N must be a positive integer, got {self.N}")
        if scheme is Scheme.ODE2SIDED:
            if self.N < 2:
                raise ConfigError("the two-sided problem needs N >= 2")
        elif self.M is None or int(self.M) != self.M or self.M < 2:
            raise ConfigError(f"scheme {scheme.value} needs M >= 2, got {self.M}")
        if not (self.T > 0 and self.L > 0):
            raise ConfigError("domain lengths must be positive")

    @property
    def tau(self):
        return self.T / self.N

    @property
    def h(self):
        return None if self.M is None else self.L / self.M

    def times(self):
        """``t_1, ..., t_N``."""
        return self.tau * np.arange(1, self.N + 1)

    def nodes(self):
        """Interior nodes ``x_1, ..., x_{M-1}``."""
        return self.h * np.arange(1, self.M)


@dataclass(frozen=True)
class SchemeConstants:
    tau: float
    h: Optional[float]
    c: float

    @property
    def mu(self):
        return self.c


def scheme_constants(spec):
    tau, g = spec.tau, spec.gamma
    if spec.scheme is Scheme.HYPERBOLIC:
        c = tau**-g / (2.0 * gamma_fn(2.0 - g))
    elif spec.scheme is Scheme.DIFFUSION_WAVE:
        c = tau**-g / gamma_fn(3.0 - g)
    else:
        c = tau**-g / gamma_fn(2.0 - g)
    return SchemeConstants(tau, spec.h, c)


@dataclass
class SolutionGrid:
    """
    Numerical solution at the unknown nodes.

    For ``ode2sided`` ``values[n-1]`` approximates ``u(t_n)``, ``n = 1..N-1``.
    Otherwise ``values[i-1, n-1]`` approximates ``u(x_i, t_n)`` for
    ``i = 1..M-1`` and ``n = 1..N``. Boundary values are zero and not stored.
    """
    scheme: Scheme
    values: np.ndarray
    tau: float
    h: Optional[float] = None

    @property
    def final(self):
        """Solution at the last time level (PDE schemes)."""
        return self.values[:, -1]


@dataclass
class SolveReport:
    method: str
    iterations: int
    residual: float
    converged: bool
    wall_seconds: float


def _require(spec, scheme):
    if spec.scheme is not scheme:
        raise ConfigError(f"expected a {scheme.value} problem, got {spec.scheme.value}")


def _eval(fn, *args):
    shape = np.broadcast_shapes(*(np.shape(a) for a in args))
    if fn is None:
        return np.zeros(shape)
    return np.broadcast_to(np.asarray(fn(*args), dtype=float), shape).astype(float)


def _check_method(spec, method):
    if method not in METHODS[spec.scheme]:
        raise ConfigError(f"method {method!r} is not available for "
                          f"{spec.scheme.value}; choose from {METHODS[spec.scheme]}")


# -- Scheme 1: two-sided ODE --------------------------------------------------

def assemble_scheme1(spec):
    """Symmetric Toeplitz stiffness matrix and load vector, dimension N-1."""
    _require(spec, Scheme.ODE2SIDED)
    mu = scheme_constants(spec).mu
    n = spec.N - 1
    col = np.empty(n)
    col[0] = 1.0 + 2.0 * mu
    if n > 1:
        col[1:] = mu * first_difference(g_weights(spec.gamma, n))
    rhs = _eval(spec.forcing, spec.times()[:-1])
    return ToeplitzOperator.symmetric(col), rhs


def solve_scheme1(spec, method='fast_cg', cfg=None):
    _require(spec, Scheme.ODE2SIDED)
    _check_method(spec, method)
    cfg = cfg or SolverConfig()
    t0 = time.perf_counter()
    A, rhs = assemble_scheme1(spec)
    if method == 'dense':
        u = dense_solve(A.dense(), rhs)
        iterations, residual, converged = 0, _relres(A, u, rhs), True
    else:
        op = A if method == 'fast_cg' else DenseOperator(A.dense())
        res = cg_solve(op, rhs, cfg)
        u, iterations, residual, converged = (res.solution, res.iterations,
                                              res.residual, res.converged)
    wall = time.perf_counter() - t0
    return (SolutionGrid(spec.scheme, u, spec.tau),
            SolveReport(method, iterations, residual, converged, wall))


def _relres(op, u, b):
    bn = np.linalg.norm(b)
    r = np.linalg.norm(op.apply(u) - b)
    return r / bn if bn else r


# -- Scheme 2: fractional transport, 0 < gamma < 1 ------------------------------

def assemble_scheme2_reordered(spec):
    """
    Per-node operators of the space-ordered box scheme.

    Returns lower triangular Toeplitz ``(A, B)`` with
    ``A U_i = B U_{i-1} + F_{i-1/2}`` for the time history ``U_i`` of node i.
    """
    _require(spec, Scheme.HYPERBOLIC)
    k = scheme_constants(spec)
    N = spec.N
    a = np.empty(N)
    b = np.empty(N)
    a[0] = 1.0 / k.h + k.c
    b[0] = 1.0 / k.h - k.c
    if N > 1:
        d = first_difference(g_weights(spec.gamma, N))
        a[1:] = k.c * d
        b[1:] = -k.c * d
    return ToeplitzOperator.lower_triangular(a), ToeplitzOperator.lower_triangular(b)


def _scheme2_load(spec, G, c):
    h = spec.h
    xm = h * (np.arange(1, spec.M) - 0.5)
    F = _eval(spec.forcing, xm[:, None], spec.times()[None, :])
    u0 = _eval(spec.initial_u0, h * np.arange(0, spec.M))
    if np.any(u0):
        # -G_{n-1} u^0 from each of the two L1 sums, moved to the right
        F += c * (u0[1:] + u0[:-1])[:, None] * G.values[None, :spec.N]
    return F


def solve_scheme2(spec, method='fast_space_order', cfg=None):
    _require(spec, Scheme.HYPERBOLIC)
    _check_method(spec, method)
    cfg = cfg or SolverConfig()
    t0 = time.perf_counter()
    k = scheme_constants(spec)
    N, M, h, c = spec.N, spec.M, spec.h, k.c
    G = g_weights(spec.gamma, N)
    F = _scheme2_load(spec, G, c)
    U = np.zeros((M - 1, N))
    iterations, residual, converged = 0, 0.0, True

    if method == 'fast_space_order':
        A, B = assemble_scheme2_reordered(spec)
        prev = np.zeros(N)
        for i in range(M - 1):
            rhs = B.apply(prev) + F[i]
            res = gmres_solve(A, rhs, cfg, x0=prev)
            U[i] = prev = res.solution
            iterations += res.iterations
            residual = max(residual, res.residual)
            converged &= res.converged
    else:
        d = first_difference(G) if N > 1 else np.zeros(0)
        diag, sub = 1.0 / h + c, c - 1.0 / h
        for n in range(N):
            rhs = F[:, n].copy()
            if n:
                S = U[:, :n].copy()
                S[1:] += U[:-1, :n]
                rhs -= c * (S @ d[n - 1::-1])
            prev = 0.0
            for i in range(M - 1):
                prev = U[i, n] = (rhs[i] - sub * prev) / diag
    wall = time.perf_counter() - t0
    return (SolutionGrid(spec.scheme, U, spec.tau, h),
            SolveReport(method, iterations, residual, converged, wall))


# -- Scheme 3: diffusion-wave transport, 1 < gamma < 2 -------------------------

def _scheme3_history(spec):
    """Sub-diagonal coefficients ``M_1 - 2 M_0, W_2, ..., W_{N-1}``."""
    N = spec.N
    Mw = m_weights(spec.gamma, max(N, 2))
    s = np.empty(N - 1)
    if N > 1:
        s[0] = Mw.values[1] - 2.0 * Mw.values[0]
    if N > 2:
        s[1:] = second_difference(Mw)
    return Mw, s


def assemble_scheme3_reordered(spec):
    """Lower triangular Toeplitz ``A`` with ``A U_i = U_{i-1}/h + F_i``."""
    _require(spec, Scheme.DIFFUSION_WAVE)
    k = scheme_constants(spec)
    _, s = _scheme3_history(spec)
    col = np.concatenate(([1.0 / k.h + k.c], k.c * s))
    return ToeplitzOperator.lower_triangular(col)


def _scheme3_load(spec, Mw, c):
    N, tau = spec.N, spec.tau
    x = spec.nodes()
    th = tau * (np.arange(1, N + 1) - 0.5)
    F = _eval(spec.forcing, x[:, None], th[None, :])
    mv = Mw.values
    phi = _eval(spec.initial_phi, x)
    if np.any(phi):
        F += c * tau * phi[:, None] * mv[None, :N]
    u0 = _eval(spec.initial_u0, x)
    if np.any(u0):
        init = np.empty(N)
        init[0] = mv[0]
        init[1:] = -(mv[:N - 1] - mv[1:N])
        F += c * u0[:, None] * init[None, :]
    return F


def solve_scheme3(spec, method='fast_space_order', cfg=None):
    """
    The per-node systems are strongly non-normal for gamma near 2 and
    restarted GMRES can stall on them, so the default configuration runs
    GMRES without restarts.
    """
    _require(spec, Scheme.DIFFUSION_WAVE)
    _check_method(spec, method)
    cfg = cfg or SolverConfig(restart=None)
    t0 = time.perf_counter()
    k = scheme_constants(spec)
    N, M, h, c = spec.N, spec.M, spec.h, k.c
    Mw, s = _scheme3_history(spec)
    F = _scheme3_load(spec, Mw, c)
    U = np.zeros((M - 1, N))
    iterations, residual, converged = 0, 0.0, True

    if method == 'fast_space_order':
        A = assemble_scheme3_reordered(spec)
        prev = np.zeros(N)
        for i in range(M - 1):
            res = gmres_solve(A, prev / h + F[i], cfg, x0=prev)
            U[i] = prev = res.solution
            iterations += res.iterations
            residual = max(residual, res.residual)
            converged &= res.converged
    else:
        diag = 1.0 / h + c
        for n in range(N):
            rhs = F[:, n].copy()
            if n:
                rhs -= c * (U[:, :n] @ s[n - 1::-1])
            prev = 0.0
            for i in range(M - 1):
                prev = U[i, n] = (rhs[i] + prev / h) / diag
    wall = time.perf_counter() - t0
    return (SolutionGrid(spec.scheme, U, spec.tau, h),
            SolveReport(method, iterations, residual, converged, wall))


# -- Scheme 4: time-fractional diffusion ----------------------------------------

def assemble_scheme4(spec):
    """
    Space-ordered block system ``A U = F`` with ``U = (U_1, ..., U_{M-1})``
    and ``U_i`` the time history at node ``x_i``.
    """
    _require(spec, Scheme.DIFFUSION)
    k = scheme_constants(spec)
    N, h, c = spec.N, spec.h, k.c
    G = g_weights(spec.gamma, N)
    col = np.empty(N)
    col[0] = 2.0 / h**2 + c
    if N > 1:
        col[1:] = c * first_difference(G)
    op = BlockTridiagonalToeplitzOperator(
        spec.M - 1, ToeplitzOperator.lower_triangular(col), -1.0 / h**2)
    return op, _scheme4_load(spec, G, c).ravel()


def _scheme4_load(spec, G, c):
    x = spec.nodes()
    F = _eval(spec.forcing, x[:, None], spec.times()[None, :])
    u0 = _eval(spec.initial_u0, x)
    if np.any(u0):
        F += c * u0[:, None] * G.values[None, :spec.N]
    return F


def thomas_solve(lower, diag, upper, rhs):
    """
    Tridiagonal solve. ``lower`` and ``upper`` have length ``n-1``.

    ``rhs`` may be 2-D, in which case columns are independent right-hand
    sides.
    """
    diag = np.asarray(diag, dtype=float)
    n = len(diag)
    lower = np.broadcast_to(np.asarray(lower, dtype=float), (max(n - 1, 0),))
    upper = np.broadcast_to(np.asarray(upper, dtype=float), (max(n - 1, 0),))
    d = np.array(rhs, dtype=float)
    if d.shape[0] != n:
        raise SizeError(f"right-hand side has {d.shape[0]} rows, expected {n}")
    cp = np.empty(max(n - 1, 0))
    denom = diag[0]
    if n > 1:
        cp[0] = upper[0] / denom
    d[0] = d[0] / denom
    for i in range(1, n):
        denom = diag[i] - lower[i - 1] * cp[i - 1]
        if i < n - 1:
            cp[i] = upper[i] / denom
        d[i] = (d[i] - lower[i - 1] * d[i - 1]) / denom
    for i in range(n - 2, -1, -1):
        d[i] -= cp[i] * d[i + 1]
    return d


def solve_scheme4(spec, method='fast_block_gmres', cfg=None):
    _require(spec, Scheme.DIFFUSION)
    _check_method(spec, method)
    cfg = cfg or SolverConfig()
    t0 = time.perf_counter()
    k = scheme_constants(spec)
    N, M, h, c = spec.N, spec.M, spec.h, k.c
    iterations, residual, converged = 0, 0.0, True

    if method == 'fast_block_gmres':
        op, rhs = assemble_scheme4(spec)
        res = gmres_solve(op, rhs, cfg)
        U = res.solution.reshape(M - 1, N)
        iterations, residual, converged = res.iterations, res.residual, res.converged
    elif method == 'dense':
        op, rhs = assemble_scheme4(spec)
        U = dense_solve(op.dense(), rhs).reshape(M - 1, N)
        residual = _relres(op, U.ravel(), rhs)
    else:
        G = g_weights(spec.gamma, N)
        d = first_difference(G) if N > 1 else np.zeros(0)
        F = _scheme4_load(spec, G, c)
        U = np.zeros((M - 1, N))
        diag = np.full(M - 1, 2.0 / h**2 + c)
        off = -1.0 / h**2
        for n in range(N):
            rhs = F[:, n].copy()
            if n:
                rhs -= c * (U[:, :n] @ d[n - 1::-1])
            U[:, n] = thomas_solve(off, diag, off, rhs)
    wall = time.perf_counter() - t0
    return (SolutionGrid(spec.scheme, U, spec.tau, h),
            SolveReport(method, iterations, residual, converged, wall))


_SOLVERS = {
    Scheme.ODE2SIDED: solve_scheme1,
    Scheme.HYPERBOLIC: solve_scheme2,
    Scheme.DIFFUSION_WAVE: solve_scheme3,
    Scheme.DIFFUSION: solve_scheme4,
}


def solve(spec, method=None, cfg=None):
    """Dispatch on ``spec.scheme``; ``method=None`` picks the fast path."""
    method = method or METHODS[spec.scheme][0]
    return _SOLVERS[spec.scheme](spec, method, cfg)


def l2_error(spec, grid, exact=None):
    """
    Discrete L2 error against ``exact`` (defaults to ``spec.exact``).

    ODE: ``sqrt(tau * sum_n e_n^2)``. PDEs: spatial norm at the final time,
    ``sqrt(h * sum_i e_i^2)``.
    """
    exact = exact or spec.exact
    if exact is None:
        raise ConfigError("no exact solution to measure the error against")
    if spec.scheme is Scheme.ODE2SIDED:
        e = grid.values - _eval(exact, spec.times()[:-1])
        return float(np.sqrt(spec.tau * np.sum(e**2)))
    e = grid.final - _eval(exact, spec.nodes(), spec.T)
    return float(np.sqrt(spec.h * np.sum(e**2)))


# -- discrete Caputo operators --------------------------------------------------

def _l1_check(gamma, u):
    if not 0.0 < gamma < 1.0:
        raise DomainError(f"L1 Caputo operator needs gamma in (0, 1), got {gamma}")
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or len(u) < 2:
        raise SizeError("need at least two grid values")
    return u


def caputo_left_apply(gamma, u, tau):
    """
    L1 approximation of the left Caputo derivative at ``t_n``.

    ``u`` holds ``u_0, ..., u_n``. Evaluates
    ``mu * sum_{j<n} G_j (u_{n-j} - u_{n-j-1})``, which equals
    ``mu [G_0 u_n - sum_k (G_{n-k-1} - G_{n-k}) u_k - G_{n-1} u_0]``.
    """
    u = _l1_check(gamma, u)
    n = len(u) - 1
    G = g_weights(gamma, n).values
    mu = tau**-gamma / gamma_fn(2.0 - gamma)
    return float(mu * (G @ np.diff(u)[::-1]))


def caputo_right_apply(gamma, u, tau):
    """
    L1 approximation of the right Caputo derivative at ``t_n``.

    ``u`` holds ``u_n, ..., u_N``; evaluates
    ``mu * sum_{j<N-n} G_j (u_{n+j} - u_{n+j+1})``.
    """
    u = _l1_check(gamma, u)
    G = g_weights(gamma, len(u) - 1).values
    mu = tau**-gamma / gamma_fn(2.0 - gamma)
    return float(mu * (G @ -np.diff(u)))
