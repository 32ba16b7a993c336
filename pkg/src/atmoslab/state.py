"""Prognostic state, hydrostatic background profiles, and variable maps.

The state carries conserved cell fields (rho, momenta, P = rho*Theta, and
the auxiliary P*chi' with chi = 1/Theta) plus the node-centered Exner
pressure perturbation pi'.  The background holds vertical profiles of the
hydrostatically balanced reference atmosphere; it is built once per run and
never recomputed.
"""

from dataclasses import dataclass

import numpy as np

from .grid import Grid
from .thermo import GasConstants, bigP_from_pi


@dataclass(frozen=True)
class ModelSwitches:
    """Blending parameters: alpha_P (compressible <-> pseudo-incompressible)
    and alpha_w (nonhydrostatic <-> hydrostatic)."""

    alpha_P: float = 1.0
    alpha_w: float = 1.0

    def __post_init__(self):
        for v in (self.alpha_P, self.alpha_w):
            if not 0.0 <= v <= 1.0:
                raise ValueError("switches must lie in [0, 1]")


@dataclass
class Background:
    """Vertical profiles of the balanced reference atmosphere.

    ``*_c`` arrays live at the K cell levels, ``*_n`` at the K+1 node levels.
    The discrete hydrostatic balance
    ``(pi_c[k+1] - pi_c[k])/dz = -(g/c_p) chi_n[k+1]`` holds to round-off by
    construction (midpoint ladder), and likewise for the node ladder with
    chi at cell levels.
    """

    z_c: np.ndarray
    z_n: np.ndarray
    pi_c: np.ndarray
    pi_n: np.ndarray
    Theta_c: np.ndarray
    Theta_n: np.ndarray
    chi_c: np.ndarray
    chi_n: np.ndarray
    dTheta_dz_c: np.ndarray
    N2_c: np.ndarray
    P_c: np.ndarray

    @property
    def dchi_dz_c(self):
        # chi = 1/Theta  =>  dchi/dz = -(dTheta/dz)/Theta^2
        return -self.dTheta_dz_c / self.Theta_c**2


def build_background(theta_profile, grid: Grid, c: GasConstants) -> Background:
    """Integrate the hydrostatic Exner ladders for a given Theta(z) profile.

    ``theta_profile`` is a callable z -> Theta_bar, evaluated analytically
    wherever the midpoint quadrature needs it.  pi_bar(0) = 1 anchors the
    node ladder at the bottom wall.
    """
    if abs(grid.z_min) > 1e-12 * max(1.0, abs(grid.z_max)):
        raise ValueError("background construction expects z_min = 0")

    z_c, z_n, dz = grid.z_c, grid.z_n, grid.dz
    Theta_c = np.asarray(theta_profile(z_c), dtype=float)
    Theta_n = np.asarray(theta_profile(z_n), dtype=float)
    if np.any(Theta_c <= 0.0) or np.any(Theta_n <= 0.0):
        raise ValueError("Theta profile must be positive on the domain")
    chi_c = 1.0 / Theta_c
    chi_n = 1.0 / Theta_n

    gcp = c.g / c.c_p
    K = grid.K

    pi_n = np.empty(K + 1)
    pi_n[0] = 1.0
    for k in range(K):
        pi_n[k + 1] = pi_n[k] - gcp * chi_c[k] * dz

    pi_c = np.empty(K)
    chi_q = 1.0 / float(theta_profile(grid.z_min + 0.25 * dz))
    pi_c[0] = pi_n[0] - gcp * chi_q * (0.5 * dz)
    for k in range(K - 1):
        pi_c[k + 1] = pi_c[k] - gcp * chi_n[k + 1] * dz

    if np.any(pi_c <= 0.0) or np.any(pi_n <= 0.0):
        raise ValueError("atmosphere too deep: Exner pressure non-positive")

    dTheta_dz = np.empty(K)
    dTheta_dz[1:-1] = (Theta_c[2:] - Theta_c[:-2]) / (2.0 * dz)
    dTheta_dz[0] = (Theta_c[1] - Theta_c[0]) / dz
    dTheta_dz[-1] = (Theta_c[-1] - Theta_c[-2]) / dz
    N2 = (c.g / Theta_c) * dTheta_dz

    return Background(
        z_c=z_c, z_n=z_n, pi_c=pi_c, pi_n=pi_n,
        Theta_c=Theta_c, Theta_n=Theta_n, chi_c=chi_c, chi_n=chi_n,
        dTheta_dz_c=dTheta_dz, N2_c=N2, P_c=bigP_from_pi(pi_c, c),
    )


@dataclass
class SimState:
    """Complete prognostic state on one grid.

    Cell fields are ghosted arrays; ``pi_prime`` is the node field of the
    Exner pressure perturbation (unique periodic columns, K+1 levels).
    """

    grid: Grid
    rho: np.ndarray
    rhou: np.ndarray
    rhov: np.ndarray
    rhow: np.ndarray
    P: np.ndarray
    Pchi: np.ndarray
    pi_prime: np.ndarray
    t: float = 0.0

    @classmethod
    def zeros(cls, grid: Grid):
        f = grid.new_cell_field
        return cls(grid, f(), f(), f(), f(), f(), f(), grid.new_node_field())

    def copy(self):
        return SimState(
            self.grid, self.rho.copy(), self.rhou.copy(), self.rhov.copy(),
            self.rhow.copy(), self.P.copy(), self.Pchi.copy(),
            self.pi_prime.copy(), self.t,
        )

    # interior views of the conserved fields
    @property
    def rho_i(self):
        return self.grid.interior(self.rho)

    @property
    def rhou_i(self):
        return self.grid.interior(self.rhou)

    @property
    def rhov_i(self):
        return self.grid.interior(self.rhov)

    @property
    def rhow_i(self):
        return self.grid.interior(self.rhow)

    @property
    def P_i(self):
        return self.grid.interior(self.P)

    @property
    def Pchi_i(self):
        return self.grid.interior(self.Pchi)

    def theta_prime(self, bg: Background):
        """Potential temperature perturbation P/rho - Theta_bar, interior."""
        return self.P_i / self.rho_i - bg.Theta_c[None, :]


def synchronize(state: SimState, bg: Background) -> SimState:
    """Reset P*chi' = P (rho/P - chi_bar) from the primary fields, in place.

    The background is held fixed for the whole run, so this is idempotent.
    """
    state.Pchi_i[...] = state.rho_i - state.P_i * bg.chi_c[None, :]
    return state


def to_solver_vars(state: SimState, bg: Background):
    """Map conserved fields to the linear-solve variables (U, V, W, Tt).

    U = P u = Theta rho u (and likewise V, W); the buoyancy variable is
    Tt = P (1/chi)' = -Theta Theta_bar (P chi'), an exact identity given
    chi' = chi - chi_bar.  Returns interior-extent arrays plus the frozen
    Theta used, so the inverse map is exact.
    """
    theta = state.P_i / state.rho_i
    U = theta * state.rhou_i
    V = theta * state.rhov_i
    W = theta * state.rhow_i
    Tt = -theta * bg.Theta_c[None, :] * state.Pchi_i
    return U, V, W, Tt, theta


def from_solver_vars(state: SimState, bg: Background, U, V, W, Tt, theta) -> SimState:
    """Inverse of :func:`to_solver_vars` with the same frozen Theta."""
    state.rhou_i[...] = U / theta
    state.rhov_i[...] = V / theta
    state.rhow_i[...] = W / theta
    state.Pchi_i[...] = -Tt / (theta * bg.Theta_c[None, :])
    return state
