"""Matrix-free BiCGSTAB for the nodal pressure system.

Works on node fields of any shape; reductions use fixed-order numpy sums so
repeated runs are bit-for-bit reproducible.  When the operator annihilates
constants (soundproof mode) the caller supplies a projection that removes
the weighted mean from the right-hand side and iterates.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-8          # relative residual target
    max_iter: int = 4000
    precond: str = "spectral"  # {none, diagonal, spectral}

    def __post_init__(self):
        if self.tol <= 0.0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.precond not in ("none", "diagonal", "spectral"):
            raise ValueError(f"unknown preconditioner {self.precond!r}")


@dataclass
class SolveStats:
    iterations: int
    residual: float            # true relative residual, recomputed at exit
    converged: bool
    breakdown: bool = False
    rhs_norm: float = 0.0


class SolverDivergence(RuntimeError):
    """The Krylov iteration failed to reach the requested tolerance."""


def _dot(a, b):
    return float(np.sum(a * b))


def _norm(a):
    return float(np.sqrt(np.sum(a * a)))


def bicgstab(apply_op, rhs, x0=None, cfg: SolverConfig = SolverConfig(),
             project=None, precond=None):
    """Solve apply_op(x) = rhs to ||rhs - apply_op(x)||_2 <= tol ||rhs||_2.

    apply_op : callable on node fields, linear.
    project : optional callable removing the operator's null-space
        components; applied to rhs, initial guess, and running residuals.
    precond : optional callable applying an approximate inverse.

    Returns (x, SolveStats).  A zero right-hand side short-circuits to the
    zero solution.
    """
    b = rhs.copy()
    if project is not None:
        b = project(b)
    norm_b = _norm(b)
    if norm_b == 0.0:
        return np.zeros_like(rhs), SolveStats(0, 0.0, True, rhs_norm=0.0)

    if x0 is None:
        x = np.zeros_like(b)
    else:
        x = x0.copy()
        if project is not None:
            x = project(x)

    psolve = precond if precond is not None else (lambda v: v)

    tol_abs = cfg.tol * norm_b

    def finish(x, iterations, breakdown=False):
        if project is not None:
            x = project(x)
        true_res = _norm(b - apply_op(x))
        return x, SolveStats(iterations, true_res / norm_b,
                             true_res <= tol_abs and not breakdown,
                             breakdown=breakdown, rhs_norm=norm_b)

    r = b - apply_op(x)
    r_hat = r.copy()
    rho = alpha = omega = 1.0
    v = np.zeros_like(b)
    p = np.zeros_like(b)
    restarts = 0
    iterations = 0

    while iterations < cfg.max_iter:
        iterations += 1
        rho_new = _dot(r_hat, r)
        if abs(rho_new) < 1e-300 * norm_b:
            if restarts >= 1:
                return finish(x, iterations, breakdown=True)
            # restart from the current iterate with a fresh shadow residual
            r = b - apply_op(x)
            if project is not None:
                r = project(r)
            r_hat = r.copy()
            rho = alpha = omega = 1.0
            v[...] = 0.0
            p[...] = 0.0
            restarts += 1
            rho_new = _dot(r, r)
            if abs(rho_new) < 1e-300 * norm_b:
                return finish(x, iterations, breakdown=True)
        beta = (rho_new / rho) * (alpha / omega)
        rho = rho_new
        p = r + beta * (p - omega * v)
        phat = psolve(p)
        v = apply_op(phat)
        denom = _dot(r_hat, v)
        if denom == 0.0:
            return finish(x, iterations, breakdown=True)
        alpha = rho / denom
        s = r - alpha * v
        if _norm(s) <= tol_abs:
            # half-step exit: x + alpha*phat has residual s
            x = x + alpha * phat
            r = s
            xf, stats = finish(x, iterations)
            if stats.converged:
                return xf, stats
            continue
        shat = psolve(s)
        t = apply_op(shat)
        tt = _dot(t, t)
        if tt == 0.0:
            return finish(x, iterations, breakdown=True)
        omega = _dot(t, s) / tt
        if omega == 0.0:
            return finish(x, iterations, breakdown=True)
        x = x + alpha * phat + omega * shat
        r = s - omega * t
        if project is not None:
            r = project(r)
        if _norm(r) <= tol_abs:
            xf, stats = finish(x, iterations)
            if stats.converged:
                return xf, stats

    return finish(x, cfg.max_iter)


def operator_diagonal(apply_op, template):
    """Exact diagonal of a local (<= distance-1) node stencil operator.

    Applies the operator to the four parity masks of the node grid; a
    nine-point stencil couples only nodes of differing parity, so each
    application returns the diagonal on its own color class.
    """
    I, Kp1 = template.shape
    ii = np.arange(I)[:, None]
    kk = np.arange(Kp1)[None, :]
    diag = np.zeros_like(template)
    for px in (0, 1):
        for pz in (0, 1):
            mask = ((ii % 2 == px) & (kk % 2 == pz)).astype(float)
            diag += mask * apply_op(mask)
    return diag
