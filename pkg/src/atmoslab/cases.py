"""Benchmark initial conditions and scalar diagnostics.

Four setups: the falling cold bubble (straka), the stratified-channel
gravity-wave family at three horizontal scales (igw_nh / igw_h /
igw_planetary), and the isothermal acoustic-gravity channel
(acoustic_gravity).  Initializers return a synchronized state, the
background, and a CaseSetup carrying the run defaults.
"""

import math
from dataclasses import dataclass

import numpy as np

from .grid import Grid
from .state import Background, SimState, build_background, synchronize
from .thermo import GasConstants

CASE_NAMES = ("straka", "igw_nh", "igw_h", "igw_planetary", "acoustic_gravity")


@dataclass
class CaseSetup:
    name: str
    grid: Grid
    constants: GasConstants
    t_max: float
    cfl_adv: float | None = None
    dt_fixed: float | None = None
    dt_max: float = float("inf")
    mu: float = 0.0
    u0: float = 0.0
    u_ref: float = 0.0   # Coriolis acts on the deviation from this wind


def straka_T_prime(x, z):
    """Cold-bubble thermal perturbation [K] at (x, z) in meters."""
    r = np.sqrt((np.asarray(x) / 4000.0) ** 2 + ((np.asarray(z) - 3000.0) / 2000.0) ** 2)
    return np.where(r < 1.0, -15.0 * (1.0 + np.cos(np.pi * np.minimum(r, 1.0))) / 2.0, 0.0)


def igw_theta_prime(x, z, x_c, a, H, amplitude=0.01):
    """Gravity-wave potential temperature perturbation [K]."""
    x = np.asarray(x)
    z = np.asarray(z)
    return amplitude * np.sin(np.pi * z / H) / (1.0 + ((x - x_c) / a) ** 2)


def _build_state(grid, bg, theta_pert, u0, c):
    """State with unperturbed pressure: P = P_bar, rho from the EOS."""
    state = SimState.zeros(grid)
    xx = grid.x_c[:, None]
    zz = grid.z_c[None, :]
    theta = bg.Theta_c[None, :] + theta_pert(xx, zz)
    state.P_i[...] = bg.P_c[None, :]
    state.rho_i[...] = state.P_i / theta
    state.rhou_i[...] = u0 * state.rho_i
    synchronize(state, bg)
    return state


def _constants(overrides, **defaults):
    merged = dict(defaults)
    merged.update(overrides or {})
    return GasConstants(**merged)


def init_straka(nx=128, nz=16, const_overrides=None):
    """Falling cold bubble in a neutral atmosphere; resolution in cells."""
    grid = Grid(-25600.0, 25600.0, 0.0, 6400.0, nx, nz)
    c = _constants(const_overrides, f=0.0)
    bg = build_background(lambda z: np.full_like(np.asarray(z, dtype=float), 300.0),
                          grid, c)

    def pert(x, z):
        # theta' = T' / pi_bar, pressure initially unperturbed
        pi_bar = np.interp(np.asarray(z), grid.z_c, bg.pi_c)
        return straka_T_prime(x, z) / pi_bar

    state = _build_state(grid, bg, pert, 0.0, c)
    cfl = 0.96
    setup = CaseSetup("straka", grid, c, t_max=900.0, cfl_adv=cfl,
                      dt_max=cfl * min(grid.dx, grid.dz) / 15.0, mu=75.0)
    return state, bg, setup


_IGW_SCALES = {
    "nh": dict(x_n=300.0e3, t_max=3000.0, f=0.0),
    "h": dict(x_n=6000.0e3, t_max=60000.0, f=1.0e-4),
    "planetary": dict(x_n=48000.0e3, t_max=480000.0, f=0.0),
}


def init_igw(scale="nh", nx=300, nz=10, u0=20.0, const_overrides=None):
    """Inertia-gravity wave channel with constant buoyancy frequency."""
    if scale not in _IGW_SCALES:
        raise ValueError(f"unknown igw scale {scale!r}; pick from {sorted(_IGW_SCALES)}")
    p = _IGW_SCALES[scale]
    H = 10.0e3
    N = 0.01
    grid = Grid(0.0, p["x_n"], 0.0, H, nx, nz)
    c = _constants(const_overrides, f=p["f"])
    bg = build_background(lambda z: 300.0 * np.exp(N * N * np.asarray(z, dtype=float) / c.g),
                          grid, c)
    a = p["x_n"] / 60.0
    x_c = p["x_n"] / 3.0
    state = _build_state(grid, bg,
                         lambda x, z: igw_theta_prime(x, z, x_c, a, H), u0, c)
    setup = CaseSetup(f"igw_{scale}", grid, c, t_max=p["t_max"], cfl_adv=0.9, u0=u0,
                      u_ref=u0 if p["f"] != 0.0 else 0.0)
    return state, bg, setup


def init_acoustic_gravity(nx=1200, nz=80, const_overrides=None):
    """Isothermal channel: acoustic-gravity pulse plus internal wave modes."""
    H = 10.0e3
    x_n = 6000.0e3
    T0 = 250.0
    grid = Grid(0.0, x_n, 0.0, H, nx, nz)
    c = _constants(const_overrides, f=1.03126e-4)
    # isothermal balance: Theta_bar = T0 exp(g z / (c_p T0))
    bg = build_background(
        lambda z: T0 * np.exp(c.g * np.asarray(z, dtype=float) / (c.c_p * T0)), grid, c)
    a = x_n / 60.0
    x_c = x_n / 3.0
    state = _build_state(grid, bg,
                         lambda x, z: igw_theta_prime(x, z, x_c, a, H), 0.0, c)
    setup = CaseSetup("acoustic_gravity", grid, c, t_max=28800.0, dt_fixed=0.125)
    return state, bg, setup


def make_case(name, nx=None, nz=None, const_overrides=None):
    """Initializer dispatch with per-case default resolutions."""
    if name == "straka":
        return init_straka(nx or 128, nz or 16, const_overrides)
    if name in ("igw_nh", "igw_h", "igw_planetary"):
        return init_igw(name.removeprefix("igw_"), nx or 300, nz or 10,
                        const_overrides=const_overrides)
    if name == "acoustic_gravity":
        return init_acoustic_gravity(nx or 1200, nz or 80, const_overrides)
    raise ValueError(f"unknown case {name!r}; pick from {CASE_NAMES}")


def theta_extrema(state: SimState, bg: Background):
    """(min, max) of the potential temperature perturbation, interior scan."""
    tp = state.theta_prime(bg)
    return float(tp.min()), float(tp.max())


def front_from_row(theta_row, x, threshold=-1.0):
    """Rightmost linear-interpolated crossing of a threshold along a row.

    Returns NaN when the row never crosses.
    """
    t = np.asarray(theta_row) - threshold
    sign_change = t[:-1] * t[1:] <= 0.0
    idx = np.nonzero(sign_change & ((t[:-1] != 0.0) | (t[1:] != 0.0)))[0]
    if idx.size == 0:
        return float("nan")
    best = float("nan")
    for i in idx:
        if t[i + 1] == t[i]:
            xc = x[i + 1]
        else:
            xc = x[i] + (0.0 - t[i]) / (t[i + 1] - t[i]) * (x[i + 1] - x[i])
        best = xc if math.isnan(best) else max(best, xc)
    return float(best)


def front_location(state: SimState, bg: Background):
    """Front position: -1 K crossing along the lowest interior cell row."""
    tp = state.theta_prime(bg)[:, 0]
    return front_from_row(tp, state.grid.x_c)


def field_diff(theta_a, theta_b):
    """Pointwise difference of two theta' fields on identical grids."""
    a = np.asarray(theta_a)
    b = np.asarray(theta_b)
    if a.shape != b.shape:
        raise ValueError(f"grid mismatch: {a.shape} vs {b.shape}")
    return a - b
