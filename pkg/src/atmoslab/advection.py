"""Directionally split MUSCL advection of the specific variables.

All conserved components (rho, momenta, P*chi') are advected as
psi = (P psi)/P by a fixed face-flux field; P itself rides along as the
carrier with face value 1.  The second-order step is the Strang palindrome
x-z-z-x with half-duration sweeps; the advecting fluxes stay frozen for the
whole cycle while psi and the carrier are re-evaluated sweep by sweep.
"""

import numpy as np

from . import kernels
from .grid import BC_SCALAR, BC_XMOM, BC_ZMOM, FaceFluxes, Grid, apply_bc_cell
from .kernels import LIMITER_IDS
from .state import SimState


class CFLViolation(RuntimeError):
    """A face Courant number left the scheme's validity range |C| <= 1."""


_COMPONENT_BCS = (BC_SCALAR, BC_XMOM, BC_SCALAR, BC_ZMOM, BC_SCALAR)


def _limiter_id(limiter):
    if isinstance(limiter, str):
        try:
            return LIMITER_IDS[limiter]
        except KeyError:
            raise ValueError(f"unknown limiter {limiter!r}") from None
    return int(limiter)


def _gather(state: SimState):
    """Stack the advected components into one contiguous work array."""
    return np.stack([state.rho, state.rhou, state.rhov, state.rhow, state.Pchi])


def _scatter(state: SimState, q):
    state.rho[...] = q[0]
    state.rhou[...] = q[1]
    state.rhov[...] = q[2]
    state.rhow[...] = q[3]
    state.Pchi[...] = q[4]


def _fill_ghosts(grid: Grid, q, P):
    for c, kind in enumerate(_COMPONENT_BCS):
        apply_bc_cell(grid, q[c], kind)
    apply_bc_cell(grid, P, BC_SCALAR)


def _check_courant(max_c, where, policy):
    if max_c > 1.0 + 1e-12:
        msg = f"advective Courant number {max_c:.3f} > 1 in {where} sweep"
        if policy == "warn":
            import warnings

            warnings.warn(msg, RuntimeWarning, stacklevel=3)
        else:
            raise CFLViolation(msg)


def sweep_x(state: SimState, f: FaceFluxes, dt, limiter="none",
            update_P=True, cfl_policy="abort") -> SimState:
    """One x sweep of duration dt; ghost layers are refreshed first."""
    grid = state.grid
    q = _gather(state)
    P = state.P
    _fill_ghosts(grid, q, P)
    max_c = kernels.muscl_sweep_x(q, P, f.fx, dt, grid.dx, grid.ng,
                                  _limiter_id(limiter), update_P)
    _check_courant(max_c, "x", cfl_policy)
    _scatter(state, q)
    return state


def sweep_z(state: SimState, f: FaceFluxes, dt, limiter="none",
            update_P=True, cfl_policy="abort") -> SimState:
    """One z sweep of duration dt; wall faces carry zero flux."""
    grid = state.grid
    q = _gather(state)
    P = state.P
    _fill_ghosts(grid, q, P)
    max_c = kernels.muscl_sweep_z(q, P, f.fz, dt, grid.dz, grid.ng,
                                  _limiter_id(limiter), update_P)
    _check_courant(max_c, "z", cfl_policy)
    _scatter(state, q)
    return state


def advect_strang(state: SimState, f: FaceFluxes, dt, limiter="none",
                  update_P=True, cfl_policy="abort") -> SimState:
    """Strang palindrome x-z-z-x with dt/2 sweeps, fluxes held fixed.

    The carrier P is always advected through the sweeps: the split
    directions have non-vanishing one-directional divergences that cancel
    only over the whole cycle, and psi = q/P stays consistent only if P
    sees them too.  With ``update_P`` the advected carrier is kept and
    telescopes to P - dt * cell_divergence_from_faces(f) exactly; without
    it (soundproof mode) P is restored afterwards, the advected carrier
    having returned to it up to the divergence-control residual anyway.
    """
    grid = state.grid
    lid = _limiter_id(limiter)
    q = _gather(state)
    P = state.P
    P_in = None if update_P else P.copy()
    half = 0.5 * dt

    for direction in ("x", "z", "z", "x"):
        _fill_ghosts(grid, q, P)
        if direction == "x":
            max_c = kernels.muscl_sweep_x(q, P, f.fx, half, grid.dx, grid.ng,
                                          lid, True)
        else:
            max_c = kernels.muscl_sweep_z(q, P, f.fz, half, grid.dz, grid.ng,
                                          lid, True)
        _check_courant(max_c, direction, cfl_policy)

    if P_in is not None:
        P[...] = P_in
    _scatter(state, q)
    return state


def advect_first_order(state: SimState, f_old: FaceFluxes, dt, limiter="none",
                       update_P=True, cfl_policy="abort") -> SimState:
    """Predictor advection: same machinery, driven by old-time fluxes.

    The caller passes fluxes built from the time-level-n momenta; the
    carrier update realizes P -> P - dt * div(f_old) (skipped in soundproof
    mode, where those fluxes are divergence-free and P stays constant).
    """
    return advect_strang(state, f_old, dt, limiter, update_P, cfl_policy)
