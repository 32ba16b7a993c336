"""Pure numpy implementations of the hot kernels.

These are the reference semantics for the compiled backend: MUSCL sweeps of
the stacked conserved components along x or z, and the node-centered
Helmholtz stencil.  Shapes follow :mod:`atmoslab.grid` conventions.
"""

import numpy as np

LIM_NONE = 0
LIM_MINMOD = 1
LIM_VANLEER = 2
LIM_MC = 3

LIMITER_IDS = {"none": LIM_NONE, "minmod": LIM_MINMOD,
               "vanleer": LIM_VANLEER, "mc": LIM_MC}


def limited_slope(a, b, limiter_id):
    """Limited slope from the two one-sided differences a, b."""
    if limiter_id == LIM_NONE:
        return 0.5 * (a + b)
    pos = a * b > 0.0
    if limiter_id == LIM_MINMOD:
        s = np.where(a > 0.0, np.minimum(a, b), np.maximum(a, b))
    elif limiter_id == LIM_VANLEER:
        s = 2.0 * a * b / np.where(pos, a + b, 1.0)
    elif limiter_id == LIM_MC:
        s = np.sign(a) * np.minimum(0.5 * np.abs(a + b),
                                    np.minimum(2.0 * np.abs(a), 2.0 * np.abs(b)))
    else:
        raise ValueError(f"unknown limiter id {limiter_id}")
    return np.where(pos, s, 0.0)


def muscl_sweep_x(q, P, fx, dt, dx, ng, limiter_id, update_P):
    """One upwind-biased x sweep of duration dt.

    q : (ncomp, NX, NZ) ghosted conserved components, updated in place on
        the interior; the advected quantity is psi = q / P.
    P : (NX, NZ) ghosted carrier, updated in place when ``update_P``.
    fx : (I+1, K) fixed advecting fluxes on interior x-faces.

    Returns the largest |face Courant number| seen.
    """
    ncomp, NX, NZ = q.shape
    I, K = NX - 2 * ng, NZ - 2 * ng
    zs = slice(ng, ng + K)

    psi = q / P[None, :, :]
    d = np.diff(psi, axis=1) / dx
    s = np.zeros_like(psi)
    s[:, 1:-1, :] = limited_slope(d[:, :-1, :], d[:, 1:, :], limiter_id)

    Pf = 0.5 * (P[ng - 1:ng + I, zs] + P[ng:ng + I + 1, zs])
    C = (dt / dx) * fx / Pf
    up = fx >= 0.0

    psi_m = psi[:, ng - 1:ng + I, zs] + (0.5 * dx) * (1.0 - C) * s[:, ng - 1:ng + I, zs]
    psi_p = psi[:, ng:ng + I + 1, zs] - (0.5 * dx) * (1.0 + C) * s[:, ng:ng + I + 1, zs]
    flux = fx * np.where(up[None, :, :], psi_m, psi_p)

    q[:, ng:ng + I, zs] -= (dt / dx) * (flux[:, 1:, :] - flux[:, :-1, :])
    if update_P:
        P[ng:ng + I, zs] -= (dt / dx) * (fx[1:, :] - fx[:-1, :])
    return float(np.max(np.abs(C))) if C.size else 0.0


def muscl_sweep_z(q, P, fz, dt, dz, ng, limiter_id, update_P):
    """Transpose of :func:`muscl_sweep_x`; fz is (I, K+1) with zero walls."""
    ncomp, NX, NZ = q.shape
    I, K = NX - 2 * ng, NZ - 2 * ng
    xs = slice(ng, ng + I)

    psi = q / P[None, :, :]
    d = np.diff(psi, axis=2) / dz
    s = np.zeros_like(psi)
    s[:, :, 1:-1] = limited_slope(d[:, :, :-1], d[:, :, 1:], limiter_id)

    Pf = 0.5 * (P[xs, ng - 1:ng + K] + P[xs, ng:ng + K + 1])
    C = (dt / dz) * fz / Pf
    up = fz >= 0.0

    psi_m = psi[:, xs, ng - 1:ng + K] + (0.5 * dz) * (1.0 - C) * s[:, xs, ng - 1:ng + K]
    psi_p = psi[:, xs, ng:ng + K + 1] - (0.5 * dz) * (1.0 + C) * s[:, xs, ng:ng + K + 1]
    flux = fz * np.where(up[None, :, :], psi_m, psi_p)

    q[:, xs, ng:ng + K] -= (dt / dz) * (flux[:, :, 1:] - flux[:, :, :-1])
    if update_P:
        P[xs, ng:ng + K] -= (dt / dz) * (fz[:, 1:] - fz[:, :-1])
    return float(np.max(np.abs(C))) if C.size else 0.0


def helmholtz_apply(pi, diag, hx, hz, dx, dz):
    """Node Helmholtz operator diag*pi - div(hx*grad_x pi, hz*grad_z pi).

    pi, diag : (I, K+1) node fields; hx, hz : (I, K) cell coefficients.
    Periodic in x; dual cells halved at the walls with zero wall flux.
    """
    I, Kp1 = pi.shape
    K = Kp1 - 1
    pr = np.roll(pi, -1, axis=0)
    gx = ((pr[:, :-1] + pr[:, 1:]) - (pi[:, :-1] + pi[:, 1:])) / (2.0 * dx)
    gz = ((pi[:, 1:] + pr[:, 1:]) - (pi[:, :-1] + pr[:, :-1])) / (2.0 * dz)
    u = hx * gx
    w = hz * gz

    uh = np.empty_like(pi)
    uh[:, 1:K] = 0.5 * (u[:, :-1] + u[:, 1:])
    uh[:, 0] = u[:, 0]
    uh[:, K] = u[:, -1]
    divx = (uh - np.roll(uh, 1, axis=0)) / dx

    wh = 0.5 * (np.roll(w, 1, axis=0) + w)
    divz = np.empty_like(pi)
    divz[:, 1:K] = (wh[:, 1:] - wh[:, :-1]) / dz
    divz[:, 0] = 2.0 * wh[:, 0] / dz
    divz[:, K] = -2.0 * wh[:, -1] / dz
    return diag * pi - (divx + divz)
