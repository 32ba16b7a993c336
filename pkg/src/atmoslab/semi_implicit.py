"""Non-advective forcing dynamics: the trapezoidal Euler pair.

The explicit half applies pressure-gradient, Coriolis, and buoyancy sources
evaluated at the current state.  The implicit half eliminates the new-time
velocities into a node-centered Helmholtz equation for the Exner pressure
perturbation, solves it matrix-free with BiCGSTAB, and back-substitutes.
The soundproof (alpha_P) and hydrostatic (alpha_w) switches live entirely
in this step.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .grid import (FaceFluxes, Grid, cell_gradient, cell_to_node,
                   faces_from_cells, node_divergence)
from .linsolve import SolveStats, SolverConfig, SolverDivergence, bicgstab, operator_diagonal
from .state import Background, ModelSwitches, SimState, from_solver_vars, to_solver_vars
from .thermo import GasConstants, dP_dpi_from_P


@dataclass
class HelmholtzSystem:
    """Frozen coefficients of one implicit Euler solve of duration dt."""

    grid: Grid
    hx: np.ndarray        # (I, K)  dt^2 c_p (P Theta) / (1 + (dt f)^2)
    hz: np.ndarray        # (I, K)  dt^2 c_p (P Theta) / (alpha_w + (dt N)^2)
    diag: np.ndarray      # (I, K+1)  alpha_P (dP/dpi) averaged to nodes
    dt: float
    switches: ModelSwitches

    def apply(self, pi):
        return kernels.helmholtz_apply(pi, self.diag, self.hx, self.hz,
                                       self.grid.dx, self.grid.dz)

    @property
    def has_null_space(self):
        return self.switches.alpha_P == 0.0

    def _null_vectors(self):
        # constants always; the full checkerboard pattern also has zero
        # face-averaged gradient (only realizable for even column counts)
        grid = self.grid
        vecs = [np.ones((grid.I, grid.K + 1))]
        if grid.I % 2 == 0:
            vecs.append((-1.0) ** (np.arange(grid.I)[:, None]
                                   + np.arange(grid.K + 1)[None, :]))
        return vecs

    def project(self, a):
        """Remove the dual-volume-weighted null-space components."""
        v = self.grid.node_volumes()
        out = a
        for n in self._null_vectors():
            out = out - n * (np.sum(v * out * n) / np.sum(v * n * n))
        return out

    def make_preconditioner(self):
        """x-spectral / z-tridiagonal solve of the x-homogenized operator.

        The coefficient fields vary weakly in x, so diagonalizing the
        x-mean operator by a real FFT and solving one small tridiagonal
        system per x wavenumber gives a near-exact preconditioner.  All
        mode systems are solved by a Thomas sweep vectorized across modes;
        a small ridge keeps the soundproof null modes finite (the solver's
        projection removes them anyway).
        """
        grid = self.grid
        I, K = grid.I, grid.K
        dx, dz = grid.dx, grid.dz
        hx = self.hx.mean(axis=0)        # (K,)
        hz = self.hz.mean(axis=0)
        dg = self.diag.mean(axis=0)      # (K+1,)

        m = np.arange(I // 2 + 1)
        k = 2.0 * np.pi * m / I
        lam = (2.0 - 2.0 * np.cos(k))[:, None] / dx**2   # x second-difference symbol
        ax = ((2.0 + 2.0 * np.cos(k)) / 4.0)[:, None]    # x face-average symbol

        lower = np.zeros((m.size, K + 1))
        diag = np.zeros((m.size, K + 1))
        upper = np.zeros((m.size, K + 1))

        # x-part: lam * (node-average of hx * node-pair mean)
        diag[:, 0] += lam[:, 0] * 0.5 * hx[0]
        upper[:, 0] += lam[:, 0] * 0.5 * hx[0]
        diag[:, K] += lam[:, 0] * 0.5 * hx[K - 1]
        lower[:, K] += lam[:, 0] * 0.5 * hx[K - 1]
        if K > 1:
            diag[:, 1:K] += lam * 0.25 * (hx[:-1] + hx[1:])[None, :]
            lower[:, 1:K] += lam * 0.25 * hx[:-1][None, :]
            upper[:, 1:K] += lam * 0.25 * hx[1:][None, :]

        # z-part: ax * (wall-halved second difference with hz weights)
        diag[:, 0] += ax[:, 0] * 2.0 * hz[0] / dz**2
        upper[:, 0] -= ax[:, 0] * 2.0 * hz[0] / dz**2
        diag[:, K] += ax[:, 0] * 2.0 * hz[K - 1] / dz**2
        lower[:, K] -= ax[:, 0] * 2.0 * hz[K - 1] / dz**2
        if K > 1:
            diag[:, 1:K] += ax * ((hz[:-1] + hz[1:]) / dz**2)[None, :]
            lower[:, 1:K] -= ax * (hz[:-1] / dz**2)[None, :]
            upper[:, 1:K] -= ax * (hz[1:] / dz**2)[None, :]

        diag += dg[None, :]
        diag += 1e-9 * np.abs(diag).max()   # ridge for singular soundproof modes

        # precompute the Thomas forward-elimination factors
        cp = np.empty_like(diag)
        cp[:, 0] = upper[:, 0] / diag[:, 0]
        denom = np.empty_like(diag)
        denom[:, 0] = diag[:, 0]
        for j in range(1, K + 1):
            denom[:, j] = diag[:, j] - lower[:, j] * cp[:, j - 1]
            cp[:, j] = upper[:, j] / denom[:, j]

        def precond(r):
            rhat = np.fft.rfft(r, axis=0)            # (I//2+1, K+1) complex
            y = np.empty_like(rhat)
            y[:, 0] = rhat[:, 0] / denom[:, 0]
            for j in range(1, K + 1):
                y[:, j] = (rhat[:, j] - lower[:, j] * y[:, j - 1]) / denom[:, j]
            for j in range(K - 1, -1, -1):
                y[:, j] -= cp[:, j] * y[:, j + 1]
            return np.fft.irfft(y, n=grid.I, axis=0)

        return precond


def explicit_forcing(state: SimState, bg: Background, c: GasConstants,
                     switches: ModelSwitches, dt, u_ref: float = 0.0) -> SimState:
    """Explicit Euler step of the forcing terms, sources at the entry state.

    rho and P carry no source and are untouched.  With alpha_w = 0 the
    vertical momentum has no prognostic tendency here; it is overwritten
    diagnostically by the implicit step.  ``u_ref`` is a geostrophically
    balanced background wind: the Coriolis force acts on the deviation from
    it, so a uniform zonal jet stays steady under rotation.
    """
    grid = state.grid
    gx, gz = cell_gradient(grid, state.pi_prime)
    rho_u = state.rhou_i.copy()
    rho_v = state.rhov_i.copy()
    Pw = (state.P_i / state.rho_i) * state.rhow_i   # entry-state flux P*w
    P = state.P_i

    # The vertical source -c_p P gz - g P chi' is the exact-perturbation form:
    # the background pressure gradient and gravity cancel identically.
    state.rhou_i[...] += dt * (-c.c_p * P * gx + c.f * rho_v)
    state.rhov_i[...] += dt * (-c.f * (rho_u - u_ref * state.rho_i))
    if switches.alpha_w > 0.0:
        state.rhow_i[...] += (dt / switches.alpha_w) * (
            -c.c_p * P * gz - c.g * state.Pchi_i)
    state.Pchi_i[...] += dt * (-Pw * bg.dchi_dz_c[None, :])
    return state


def assemble_helmholtz(state: SimState, bg: Background, c: GasConstants,
                       switches: ModelSwitches, dt) -> HelmholtzSystem:
    """Freeze the elliptic coefficients from whatever state is current."""
    grid = state.grid
    P = state.P_i
    theta = P / state.rho_i
    ptheta = P * theta

    vert = switches.alpha_w + dt * dt * bg.N2_c[None, :]
    if np.any(vert <= 0.0):
        raise ValueError("alpha_w + (dt N)^2 must be positive; "
                         "hydrostatic mode needs stable stratification")
    rot = 1.0 + (dt * c.f) ** 2

    hx = dt * dt * c.c_p * ptheta / rot
    hz = dt * dt * c.c_p * ptheta / vert

    diag = switches.alpha_P * cell_to_node(grid, dP_dpi_from_P(P, c))
    return HelmholtzSystem(grid, hx, hz, diag, dt, switches)


def helmholtz_rhs(state: SimState, bg: Background, c: GasConstants,
                  sys: HelmholtzSystem):
    """Right-hand side of the nodal pressure equation."""
    grid = state.grid
    dt = sys.dt
    U, V, W, Tt, _ = to_solver_vars(state, bg)
    rot = 1.0 + (dt * c.f) ** 2
    vert = sys.switches.alpha_w + dt * dt * bg.N2_c[None, :]

    fx = (U + dt * c.f * V) / rot
    fz = (sys.switches.alpha_w * W + dt * c.g * Tt / bg.Theta_c[None, :]) / vert
    return sys.diag * state.pi_prime - dt * node_divergence(grid, fx, fz)


def apply_helmholtz(pi, sys: HelmholtzSystem):
    """Matrix-free application of the Helmholtz operator (module surface)."""
    return sys.apply(pi)


def implicit_forcing(state: SimState, bg: Background, c: GasConstants,
                     switches: ModelSwitches, dt,
                     solver_cfg: SolverConfig = SolverConfig(),
                     u_ref: float = 0.0) -> SolveStats:
    """Implicit Euler step of the forcing terms over dt, in place.

    Solves the nodal Helmholtz equation, back-substitutes the new-time
    velocities and buoyancy variable, and stores the solved pi' on the
    state.  Raises :class:`SolverDivergence` on non-convergence.
    """
    grid = state.grid
    sys = assemble_helmholtz(state, bg, c, switches, dt)
    U, V, W, Tt, theta = to_solver_vars(state, bg)

    rot = 1.0 + (dt * c.f) ** 2
    vert = switches.alpha_w + dt * dt * bg.N2_c[None, :]
    # rotation acts on the deviation from the balanced reference wind
    Ud = U - u_ref * state.P_i
    fx = u_ref * state.P_i + (Ud + dt * c.f * V) / rot
    fy = (V - dt * c.f * Ud) / rot
    fz = (switches.alpha_w * W + dt * c.g * Tt / bg.Theta_c[None, :]) / vert

    rhs = sys.diag * state.pi_prime - dt * node_divergence(grid, fx, fz)

    project = sys.project if sys.has_null_space else None
    precond = None
    if solver_cfg.precond == "diagonal":
        diag_op = operator_diagonal(sys.apply, state.pi_prime)
        inv_diag = 1.0 / diag_op
        precond = lambda v: inv_diag * v
    elif solver_cfg.precond == "spectral":
        # strongly diagonal-dominated systems converge in a couple of
        # plain iterations; skip the spectral setup cost there
        off = float((4.0 * sys.hx / grid.dx**2 + 4.0 * sys.hz / grid.dz**2).max())
        if sys.diag.size == 0 or float(sys.diag.min()) <= 3.0 * off:
            precond = sys.make_preconditioner()
    pi_new, stats = bicgstab(sys.apply, rhs, x0=state.pi_prime, cfg=solver_cfg,
                             project=project, precond=precond)
    if not stats.converged:
        raise SolverDivergence(
            f"pressure solve failed: {stats.iterations} iterations, "
            f"relative residual {stats.residual:.3e}"
            + (" (breakdown)" if stats.breakdown else ""))

    gx, gz = cell_gradient(grid, pi_new)
    Gx = (sys.hx / dt) * gx
    Gz = (sys.hz / dt) * gz

    U_new = fx - Gx
    V_new = fy + dt * c.f * Gx
    W_new = fz - Gz
    Tt_new = Tt - dt * bg.dTheta_dz_c[None, :] * W_new

    from_solver_vars(state, bg, U_new, V_new, W_new, Tt_new, theta)
    state.pi_prime = pi_new
    return stats


def make_advective_fluxes(state: SimState) -> FaceFluxes:
    """Divergence-controlled face fluxes from the current momenta."""
    theta = state.P_i / state.rho_i
    return faces_from_cells(state.grid, theta * state.rhou_i, theta * state.rhow_i)
