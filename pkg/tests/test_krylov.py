import numpy as np
import pytest

from fractime.errors import (ConfigError, DefinitenessError, SingularityError,
                             SizeError)
from fractime.krylov import SolverConfig, cg_solve, dense_solve, gmres_solve
from fractime.toeplitz import DenseOperator, ToeplitzOperator


def _spd(n, seed=0):
    rng = np.random.default_rng(seed)
    Q = rng.standard_normal((n, n))
    return Q @ Q.T + n * np.eye(n)


def test_config_validation():
    for kw in ({'tol': 0.0}, {'max_iter': 0}, {'restart': 0}):
        with pytest.raises(ConfigError):
            SolverConfig(**kw)
    assert SolverConfig(restart=None).restart is None


def test_cg_small():
    A = _spd(30)
    b = np.arange(30.0)
    res = cg_solve(A, b, SolverConfig(tol=1e-12))
    assert res.converged and res.residual <= 1e-12
    assert np.allclose(res.solution, np.linalg.solve(A, b), atol=1e-9)


def test_cg_counts_directions():
    # two distinct eigenvalues: exact convergence in two steps
    A = np.diag([1.0] * 5 + [3.0] * 5)
    res = cg_solve(A, np.ones(10), SolverConfig(tol=1e-14))
    assert res.iterations == 2


def test_cg_zero_rhs_and_initial_guess():
    A = _spd(5)
    res = cg_solve(A, np.zeros(5))
    assert res.iterations == 0 and np.all(res.solution == 0)
    x = np.linalg.solve(A, np.ones(5))
    res = cg_solve(A, np.ones(5), SolverConfig(tol=1e-8), x0=x)
    assert res.iterations == 0 and res.converged


def test_cg_indefinite():
    with pytest.raises(DefinitenessError) as exc:
        cg_solve(np.diag([1.0, -1.0]), np.array([0.0, 1.0]))
    assert exc.value.iteration == 1


def test_cg_not_converged():
    res = cg_solve(_spd(40, 2), np.ones(40), SolverConfig(tol=1e-14, max_iter=3))
    assert not res.converged and res.iterations == 3


def test_cg_toeplitz_equals_dense_iterations():
    t = ToeplitzOperator.symmetric(np.r_[4.0, -1.0, -0.5, np.zeros(61)])
    b = np.sin(np.arange(64.0))
    fast = cg_solve(t, b)
    slow = cg_solve(DenseOperator(t.dense()), b)
    assert fast.iterations == slow.iterations
    assert np.allclose(fast.solution, slow.solution, atol=1e-10)


@pytest.mark.parametrize('restart', [5, 20, None])
def test_gmres_nonsymmetric(restart):
    rng = np.random.default_rng(4)
    A = 8 * np.eye(40) + rng.standard_normal((40, 40))
    b = rng.standard_normal(40)
    res = gmres_solve(A, b, SolverConfig(tol=1e-11, restart=restart))
    assert res.converged
    assert np.allclose(res.solution, np.linalg.solve(A, b), atol=1e-8)


def test_gmres_invariant_subspace_exit():
    # b is an eigenvector: the Krylov space is one-dimensional
    A = np.diag([2.0, 3.0, 5.0])
    res = gmres_solve(A, np.array([1.0, 0.0, 0.0]), SolverConfig(tol=1e-15))
    assert res.iterations == 1 and res.converged
    assert np.allclose(res.solution, [0.5, 0.0, 0.0])


def test_gmres_stagnation_reports_failure():
    # cyclic shift: GMRES(1) makes no progress
    A = np.roll(np.eye(6), 1, axis=0)
    res = gmres_solve(A, np.eye(6)[0], SolverConfig(restart=1, max_iter=50))
    assert not res.converged


def test_gmres_warm_start():
    A = 5 * np.eye(10) + np.tril(np.ones((10, 10)), -1)
    b = np.ones(10)
    x = np.linalg.solve(A, b)
    res = gmres_solve(A, b, x0=x + 1e-13)
    assert res.iterations <= 1


def test_shape_checks():
    with pytest.raises(SizeError):
        gmres_solve(np.eye(3), np.ones(4))
    with pytest.raises(SizeError):
        cg_solve(np.eye(3), np.ones(3), x0=np.ones(2))


def test_dense_solve():
    A = _spd(12, 5)
    b = np.ones(12)
    assert np.allclose(A @ dense_solve(A, b), b)
    assert dense_solve(np.zeros((0, 0)), np.zeros(0)).shape == (0,)
    with pytest.raises(SingularityError):
        dense_solve(np.ones((3, 3)), np.ones(3))
    with pytest.raises(SizeError):
        dense_solve(np.ones((2, 3)), np.ones(2))
    with pytest.raises(SizeError):
        dense_solve(np.eye(2), np.ones(3))
