"""
Krylov solvers over the ``dim`` / ``apply`` operator contract.

Only matrix-vector products are needed, so the same solver runs against a
dense matrix or an FFT-backed Toeplitz operator. No preconditioning.
"""
from dataclasses import dataclass
from typing import Optional
import warnings

import numpy as np
import scipy.linalg

from .errors import ConfigError, DefinitenessError, SingularityError, SizeError
from .toeplitz import as_operator

__all__ = ['SolverConfig', 'KrylovResult', 'cg_solve', 'gmres_solve',
           'dense_solve']


@dataclass(frozen=True)
class SolverConfig:
    """
    Stopping and restart parameters.

    ``restart=None`` runs GMRES without restarts (full memory).
    """
    tol: float = 1e-10
    max_iter: int = 20000
    restart: Optional[int] = 20

    def __post_init__(self):
        if not self.tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ConfigError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.restart is not None and self.restart < 1:
            raise ConfigError(f"restart must be >= 1, got {self.restart}")


@dataclass
class KrylovResult:
    solution: np.ndarray
    iterations: int
    residual: float
    converged: bool


def _prepare(op, b, x0):
    op = as_operator(op)
    b = np.asarray(b, dtype=float)
    if b.shape != (op.dim,):
        raise SizeError(f"right-hand side of shape {b.shape} for operator of "
                        f"dimension {op.dim}")
    if x0 is None:
        x = np.zeros(op.dim)
        r = b.copy()
    else:
        x = np.array(x0, dtype=float)
        if x.shape != b.shape:
            raise SizeError(f"initial guess of shape {x.shape}, expected {b.shape}")
        r = b - op.apply(x)
    return op, b, x, r


def cg_solve(op, b, cfg=SolverConfig(), x0=None):
    """
    Conjugate gradients for a symmetric positive definite operator.

    ``iterations`` counts search directions, i.e. products ``A w_k``; the
    residual is the recursively updated ``||r_k|| / ||b||``.
    """
    op, b, x, r = _prepare(op, b, x0)
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return KrylovResult(np.zeros_like(b), 0, 0.0, True)

    rr = r @ r
    res = np.sqrt(rr) / bnorm
    if res <= cfg.tol:
        return KrylovResult(x, 0, res, True)

    w = r.copy()
    for k in range(1, cfg.max_iter + 1):
        Aw = op.apply(w)
        curv = w @ Aw
        if curv <= 0.0:
            raise DefinitenessError(k, curv)
        kappa = rr / curv
        x += kappa * w
        r -= kappa * Aw
        rr_new = r @ r
        res = np.sqrt(rr_new) / bnorm
        if res <= cfg.tol:
            return KrylovResult(x, k, res, True)
        w *= rr_new / rr
        w += r
        rr = rr_new
    return KrylovResult(x, cfg.max_iter, res, False)


def _givens(a, b):
    if b == 0.0:
        return 1.0, 0.0
    r = np.hypot(a, b)
    return a / r, b / r


def gmres_solve(op, b, cfg=SolverConfig(), x0=None):
    """
    Restarted GMRES(m) with modified Gram-Schmidt Arnoldi.

    The small least-squares problem ``min ||beta e_1 - H y||`` is updated
    with Givens rotations as columns arrive. A cycle ends on convergence of
    the rotated residual, on a zero subdiagonal ``h_{j+1,j}`` (the Krylov
    space is invariant), or after ``restart`` steps. The true residual is
    recomputed at the end of each cycle; a cycle that does not reduce it
    ends the solve with ``converged=False``.
    """
    op, b, x, r = _prepare(op, b, x0)
    n = op.dim
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return KrylovResult(np.zeros_like(b), 0, 0.0, True)
    m = n if cfg.restart is None else min(cfg.restart, n)

    beta = np.linalg.norm(r)
    res = beta / bnorm
    total = 0
    while res > cfg.tol and total < cfg.max_iter:
        V = [r / beta]
        H = np.zeros((m + 1, m))
        cs = np.zeros(m)
        sn = np.zeros(m)
        g = np.zeros(m + 1)
        g[0] = beta
        k = 0
        for j in range(m):
            w = op.apply(V[j])
            total += 1
            for i in range(j + 1):
                H[i, j] = w @ V[i]
                w -= H[i, j] * V[i]
            H[j + 1, j] = np.linalg.norm(w)
            invariant = H[j + 1, j] == 0.0
            if not invariant:
                V.append(w / H[j + 1, j])
            for i in range(j):
                hij = H[i, j]
                H[i, j] = cs[i] * hij + sn[i] * H[i + 1, j]
                H[i + 1, j] = -sn[i] * hij + cs[i] * H[i + 1, j]
            cs[j], sn[j] = _givens(H[j, j], H[j + 1, j])
            H[j, j] = cs[j] * H[j, j] + sn[j] * H[j + 1, j]
            H[j + 1, j] = 0.0
            g[j + 1] = -sn[j] * g[j]
            g[j] = cs[j] * g[j]
            k = j + 1
            if invariant or abs(g[k]) / bnorm <= cfg.tol or total >= cfg.max_iter:
                break

        y = scipy.linalg.solve_triangular(H[:k, :k], g[:k])
        for i in range(k):
            x += y[i] * V[i]
        r = b - op.apply(x)
        beta = np.linalg.norm(r)
        new_res = beta / bnorm
        if new_res >= res:
            res = new_res
            break
        res = new_res
        if beta == 0.0:
            break
    return KrylovResult(x, total, res, res <= cfg.tol)


def dense_solve(matrix, b):
    """Gaussian elimination with partial pivoting (LAPACK ``getrf``)."""
    A = np.asarray(matrix, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise SizeError(f"expected a square matrix, got shape {A.shape}")
    if b.shape != (A.shape[0],):
        raise SizeError(f"right-hand side of shape {b.shape} for a "
                        f"{A.shape[0]}x{A.shape[0]} matrix")
    if A.size == 0:
        return np.zeros(0)
    scale = np.abs(A).max()
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=True)
    pivots = np.abs(np.diag(lu))
    if scale == 0.0 or pivots.min() < 1e-14 * scale:
        raise SingularityError(
            f"matrix is numerically singular (smallest pivot {pivots.min():.3e}, "
            f"largest entry {scale:.3e})")
    return scipy.linalg.lu_solve((lu, piv), b)
