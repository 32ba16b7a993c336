import numpy as np
import pytest

from atmoslab.linsolve import SolverConfig, bicgstab, operator_diagonal


def test_identity_operator_one_iteration():
    rng = np.random.default_rng(0)
    b = rng.standard_normal((6, 5))
    x, stats = bicgstab(lambda v: v, b)
    assert stats.converged and stats.iterations == 1
    assert np.allclose(x, b, rtol=1e-12)


def test_zero_rhs_short_circuits():
    b = np.zeros((4, 3))
    x, stats = bicgstab(lambda v: 3.0 * v, b, x0=np.ones_like(b))
    assert stats.converged and stats.iterations == 0
    assert np.all(x == 0.0)


def test_periodic_laplacian_fourier_eigenvalue():
    # 1D periodic Laplacian; rhs a pure sine mode; x = rhs / lambda_mode
    n = 32
    h = 1.0 / n

    def lap(v):
        return (2 * v - np.roll(v, 1) - np.roll(v, -1)) / h**2

    m = 3
    mode = np.sin(2 * np.pi * m * np.arange(n) / n)
    lam = (2.0 - 2.0 * np.cos(2 * np.pi * m / n)) / h**2
    x, stats = bicgstab(lap, mode.copy(), cfg=SolverConfig(tol=1e-10, max_iter=500))
    assert stats.converged
    assert np.allclose(x, mode / lam, atol=1e-10 * np.abs(mode / lam).max())


def test_dense_system_matches_lu():
    rng = np.random.default_rng(5)
    A = np.diag(rng.uniform(1.0, 4.0, 8)) + 0.1 * rng.standard_normal((8, 8))
    A = A @ A.T + np.eye(8)     # SPD
    b = rng.standard_normal(8)
    x, stats = bicgstab(lambda v: A @ v, b, cfg=SolverConfig(tol=1e-10, max_iter=200))
    assert stats.converged
    assert np.allclose(x, np.linalg.solve(A, b), atol=1e-7)


def test_true_residual_reported():
    rng = np.random.default_rng(6)
    A = np.diag(rng.uniform(1.0, 2.0, 10))
    b = rng.standard_normal(10)
    x, stats = bicgstab(lambda v: A @ v, b)
    true = np.linalg.norm(b - A @ x) / np.linalg.norm(b)
    assert stats.residual == pytest.approx(true, rel=1e-10)
    assert stats.residual <= SolverConfig().tol


def test_singular_with_projection():
    # periodic Laplacian annihilates constants: solve with a compatible rhs
    n = 16

    def lap(v):
        return 2 * v - np.roll(v, 1) - np.roll(v, -1)

    def project(v):
        return v - v.mean()

    rng = np.random.default_rng(7)
    b = project(rng.standard_normal(n))
    x, stats = bicgstab(lap, b, project=project, cfg=SolverConfig(tol=1e-10, max_iter=300))
    assert stats.converged
    assert abs(x.mean()) < 1e-12
    assert np.linalg.norm(b - lap(x)) <= 1e-10 * np.linalg.norm(b) * 2


def test_diagonal_preconditioning_path():
    rng = np.random.default_rng(8)
    d = rng.uniform(0.5, 50.0, (7, 4))

    def op(v):
        return d * v

    diag = operator_diagonal(op, d)
    assert np.allclose(diag, d, rtol=1e-14)
    b = rng.standard_normal((7, 4))
    inv = 1.0 / diag
    x, stats = bicgstab(op, b, precond=lambda v: inv * v,
                        cfg=SolverConfig(precond="diagonal", tol=1e-12, max_iter=50))
    assert stats.converged
    assert np.allclose(x, b / d, rtol=1e-10)


def test_operator_diagonal_nine_point():
    # diagonal extraction via parity masks on a genuine 9-point stencil
    rng = np.random.default_rng(9)
    c = rng.uniform(0.5, 1.5, (8, 6))

    def op(v):
        out = 4.0 * c * v
        for ax, sh in ((0, 1), (0, -1), (1, 1), (1, -1)):
            out -= 0.5 * np.roll(v, sh, axis=ax)
        out -= 0.25 * (np.roll(np.roll(v, 1, 0), 1, 1) + np.roll(np.roll(v, -1, 0), -1, 1))
        return out

    diag = operator_diagonal(op, c)
    # check against explicit basis vectors
    e = np.zeros_like(c)
    for idx in ((0, 0), (3, 2), (7, 5)):
        e[...] = 0.0
        e[idx] = 1.0
        assert diag[idx] == pytest.approx(op(e)[idx], rel=1e-13)


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(tol=0.0)
    with pytest.raises(ValueError):
        SolverConfig(max_iter=0)
    with pytest.raises(ValueError):
        SolverConfig(precond="amg")
