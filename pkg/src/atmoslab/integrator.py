"""Three-stage time step and the run loop.

One step is: half-time flux predictor (first-order advection plus implicit
Euler), explicit Euler forcing on the time-n state, full Strang advection by
the predicted fluxes, optional artificial diffusion, implicit Euler forcing,
and synchronization of the auxiliary perturbation fields.
"""

import time as _time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .advection import advect_first_order, advect_strang
from .grid import BC_SCALAR, BC_ZMOM, FaceFluxes, Grid, apply_bc_cell, node_divergence
from .linsolve import SolverConfig
from .semi_implicit import explicit_forcing, implicit_forcing, make_advective_fluxes
from .state import Background, ModelSwitches, SimState, synchronize
from .thermo import GasConstants, pi_from_bigP, sound_speed


@dataclass
class StepConfig:
    """Everything one step needs besides the state itself."""

    constants: GasConstants = GasConstants()
    switches: ModelSwitches = ModelSwitches()
    solver: SolverConfig = SolverConfig()
    limiter: str = "none"
    cfl_adv: float | None = 0.9
    dt_fixed: float | None = None
    dt_max: float = float("inf")
    diffusion_mu: float = 0.0
    cfl_policy: str = "abort"
    u_ref: float = 0.0        # balanced reference wind for the Coriolis term

    def __post_init__(self):
        if (self.cfl_adv is None) == (self.dt_fixed is None):
            raise ValueError("exactly one of cfl_adv / dt_fixed must be set")
        if self.cfl_adv is not None and not 0.0 < self.cfl_adv <= 1.0:
            raise ValueError("cfl_adv must lie in (0, 1]")
        if self.dt_fixed is not None and self.dt_fixed <= 0.0:
            raise ValueError("dt_fixed must be positive")


def compute_dt(state: SimState, grid: Grid, cfg: StepConfig) -> float:
    """Advective-CFL step size; falls back to dt_max when the flow is at rest."""
    if cfg.dt_fixed is not None:
        return cfg.dt_fixed
    u = np.abs(state.rhou_i / state.rho_i).max()
    w = np.abs(state.rhow_i / state.rho_i).max()
    rate = max(u / grid.dx, w / grid.dz)
    if rate == 0.0:
        if not np.isfinite(cfg.dt_max):
            raise ValueError("flow at rest and no dt_max configured")
        return cfg.dt_max
    return min(cfg.cfl_adv / rate, cfg.dt_max)


def courant_numbers(state: SimState, bg: Background, c: GasConstants, dt: float):
    """(CFL_adv, CFL_ac) for reporting: dt * max |v|/dx and (|v|+c_s)/dx."""
    grid = state.grid
    u = np.abs(state.rhou_i / state.rho_i)
    w = np.abs(state.rhow_i / state.rho_i)
    theta = state.P_i / state.rho_i
    T = theta * pi_from_bigP(state.P_i, c)
    cs = sound_speed(T, c)
    adv = dt * max(float(u.max()) / grid.dx, float(w.max()) / grid.dz)
    ac = dt * max(float((u + cs).max()) / grid.dx, float((w + cs).max()) / grid.dz)
    return adv, ac


def apply_diffusion(state: SimState, bg: Background, mu: float, dt: float):
    """Explicit artificial diffusion of u, v, w and Theta.

    Increments are applied in conservative flux form,
    d(rho q)/dt = div(mu rho_face grad q), with zero-flux walls and periodic
    x, so total mass-weighted sums (in particular P) are preserved exactly.
    The Theta increment feeds the P equation.
    """
    grid = state.grid
    if mu * dt * (1.0 / grid.dx**2 + 1.0 / grid.dz**2) > 0.5:
        warnings.warn("artificial diffusion explicit-Euler stability bound exceeded",
                      RuntimeWarning, stacklevel=2)

    rho = state.rho.copy()
    apply_bc_cell(grid, rho, BC_SCALAR)

    def flux_div(qfull, kind):
        # q is a specific quantity on the full ghosted array
        apply_bc_cell(grid, qfull, kind)
        ng, I, K = grid.ng, grid.I, grid.K
        q = qfull
        # face diffusive fluxes mu * rho_face * dq/dn on interior faces
        rf_x = 0.5 * (rho[ng - 1:ng + I, ng:ng + K] + rho[ng:ng + I + 1, ng:ng + K])
        dq_x = (q[ng:ng + I + 1, ng:ng + K] - q[ng - 1:ng + I, ng:ng + K]) / grid.dx
        fx = mu * rf_x * dq_x                      # (I+1, K)
        rf_z = 0.5 * (rho[ng:ng + I, ng - 1:ng + K] + rho[ng:ng + I, ng:ng + K + 1])
        dq_z = (q[ng:ng + I, ng:ng + K + 1] - q[ng:ng + I, ng - 1:ng + K]) / grid.dz
        fz = mu * rf_z * dq_z                      # (I, K+1)
        fz[:, 0] = 0.0
        fz[:, -1] = 0.0
        return ((fx[1:, :] - fx[:-1, :]) / grid.dx
                + (fz[:, 1:] - fz[:, :-1]) / grid.dz)

    u = state.rhou / np.where(rho != 0.0, rho, 1.0)
    v = state.rhov / np.where(rho != 0.0, rho, 1.0)
    w = state.rhow / np.where(rho != 0.0, rho, 1.0)
    theta = state.P / np.where(rho != 0.0, rho, 1.0)

    state.rhou_i[...] += dt * flux_div(u, BC_SCALAR)
    state.rhov_i[...] += dt * flux_div(v, BC_SCALAR)
    state.rhow_i[...] += dt * flux_div(w, BC_ZMOM)
    state.P_i[...] += dt * flux_div(theta, BC_SCALAR)
    return state


def predictor(state: SimState, bg: Background, cfg: StepConfig, dt: float) -> FaceFluxes:
    """Half-time advecting fluxes (P u, P w)^{n+1/2}.

    Works on a copy: advect by dt/2 with old-time fluxes (including the P
    half-update through the carrier), apply the implicit Euler forcing over
    dt/2 with coefficients linearized about the advected state, and return
    the divergence-controlled fluxes of the result.  Everything else about
    the predictor state is discarded.
    """
    work = state.copy()
    f_old = make_advective_fluxes(work)
    update_P = cfg.switches.alpha_P != 0.0
    advect_first_order(work, f_old, 0.5 * dt, cfg.limiter, update_P, cfg.cfl_policy)
    # the implicit solve reads its buoyancy from the transported (rho, P):
    # chi' = chi - chi_bar by definition, which the advection realizes in
    # conservative flux form (wall-consistent, unlike the one-sided source)
    synchronize(work, bg)
    implicit_forcing(work, bg, cfg.constants, cfg.switches, 0.5 * dt, cfg.solver,
                     u_ref=cfg.u_ref)
    return make_advective_fluxes(work)


@dataclass
class StepStats:
    solver_iterations: int = 0
    max_courant: float = 0.0


def step(state: SimState, bg: Background, cfg: StepConfig, dt: float,
         stats: StepStats | None = None) -> SimState:
    """Advance one full step of size dt; returns a new state at t + dt."""
    f_half = predictor(state, bg, cfg, dt)

    new = state.copy()
    explicit_forcing(new, bg, cfg.constants, cfg.switches, 0.5 * dt, u_ref=cfg.u_ref)
    update_P = cfg.switches.alpha_P != 0.0
    advect_strang(new, f_half, dt, cfg.limiter, update_P, cfg.cfl_policy)
    if cfg.diffusion_mu > 0.0:
        apply_diffusion(new, bg, cfg.diffusion_mu, dt)
    # Buoyancy entering the final implicit solve: chi' = chi - chi_bar from
    # the transported (rho, P); the advection carries the background
    # stratification term in conservative flux form, which is the
    # wall-consistent realization of the chi' source.
    synchronize(new, bg)
    solve = implicit_forcing(new, bg, cfg.constants, cfg.switches, 0.5 * dt,
                             cfg.solver, u_ref=cfg.u_ref)
    synchronize(new, bg)
    new.t = float(state.t + dt)
    if stats is not None:
        stats.solver_iterations += solve.iterations
    return new


@dataclass
class RunReport:
    steps: int = 0
    t_final: float = 0.0
    wall_seconds: float = 0.0
    theta_min: float = 0.0
    theta_max: float = 0.0
    mass_drift: float = 0.0
    P_drift: float = 0.0
    max_node_div: float = 0.0
    solver_iterations: int = 0
    dt_history: list = field(default_factory=list)


def max_nodal_divergence(state: SimState) -> float:
    theta = state.P_i / state.rho_i
    div = node_divergence(state.grid, theta * state.rhou_i, theta * state.rhow_i)
    return float(np.abs(div).max())


def run(state: SimState, bg: Background, cfg: StepConfig, t_max: float,
        observer=None) -> tuple[SimState, RunReport]:
    """Advance to t_max (final step clipped to land exactly on it).

    ``observer(state, dt, report)`` is called once with dt of the upcoming
    step before stepping begins, then after every completed step; snapshot
    and diagnostics sinks hang off it.
    """
    report = RunReport()
    mass0 = float(np.sum(state.rho_i))
    P0 = float(np.sum(state.P_i))
    start = _time.perf_counter()

    eps = 1e-9 * max(t_max, 1.0)
    first = True
    while state.t < t_max - eps:
        dt = min(compute_dt(state, state.grid, cfg), t_max - state.t)
        if first:
            if observer is not None:
                observer(state, dt, report)
            first = False
        stats = StepStats()
        state = step(state, bg, cfg, dt, stats)
        report.steps += 1
        report.solver_iterations += stats.solver_iterations
        report.dt_history.append(dt)
        if observer is not None:
            observer(state, dt, report)
    if first and observer is not None:
        observer(state, 0.0, report)   # t_max == 0: initial snapshot only

    report.t_final = state.t
    report.wall_seconds = _time.perf_counter() - start
    theta_p = state.theta_prime(bg)
    report.theta_min = float(theta_p.min())
    report.theta_max = float(theta_p.max())
    report.mass_drift = abs(float(np.sum(state.rho_i)) - mass0) / abs(mass0)
    report.P_drift = abs(float(np.sum(state.P_i)) - P0) / abs(P0)
    report.max_node_div = max_nodal_divergence(state)
    return state, report
