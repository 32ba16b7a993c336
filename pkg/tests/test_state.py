import numpy as np
import pytest

from atmoslab.grid import Grid
from atmoslab.state import (ModelSwitches, SimState, build_background,
                            from_solver_vars, synchronize, to_solver_vars)
from atmoslab.thermo import GasConstants

C = GasConstants()


def test_switch_validation():
    ModelSwitches(0.0, 1.0)
    with pytest.raises(ValueError):
        ModelSwitches(1.5, 0.0)


def test_constant_theta_background_exact():
    g = Grid(0.0, 1000.0, 0.0, 6400.0, 4, 16)
    bg = build_background(lambda z: np.full_like(np.asarray(z, dtype=float), 300.0), g, C)
    expect = 1.0 - C.g * g.z_c / (C.c_p * 300.0)
    assert np.allclose(bg.pi_c, expect, rtol=1e-14)
    assert np.allclose(bg.N2_c, 0.0, atol=1e-18)
    assert bg.pi_n[0] == 1.0


def test_hydrostatic_balance_invariant():
    g = Grid(0.0, 1000.0, 0.0, 10e3, 4, 25)
    bg = build_background(lambda z: 300.0 * np.exp(1e-4 * np.asarray(z, dtype=float) / C.g), g, C)
    res_c = (bg.pi_c[1:] - bg.pi_c[:-1]) / g.dz + (C.g / C.c_p) * bg.chi_n[1:-1]
    res_n = (bg.pi_n[1:] - bg.pi_n[:-1]) / g.dz + (C.g / C.c_p) * bg.chi_c
    scale = C.c_p / C.g
    assert np.abs(res_c).max() * scale < 1e-12
    assert np.abs(res_n).max() * scale < 1e-12


def test_stratification_frequency_recovered():
    # N = 0.01 1/s profile; centered differences at dz = 100 m recover N^2
    # to better than 1e-6 relative in the interior
    g = Grid(0.0, 1000.0, 0.0, 10e3, 4, 100)
    N2 = 1e-4
    bg = build_background(lambda z: 300.0 * np.exp(N2 * np.asarray(z, dtype=float) / C.g), g, C)
    assert np.allclose(bg.N2_c[1:-1], N2, rtol=1e-6)


def test_isothermal_exner_profile():
    # analytic isothermal hydrostatics: pi = exp(-g z / (c_p T0)).  The
    # midpoint ladder carries O(dz^3) local error; at 80 x 125 m this
    # accumulates to ~4e-7, so the discrete profile matches to 1e-6.
    g = Grid(0.0, 1000.0, 0.0, 10e3, 4, 80)
    T0 = 250.0
    bg = build_background(lambda z: T0 * np.exp(C.g * np.asarray(z, dtype=float) / (C.c_p * T0)), g, C)
    assert np.allclose(bg.pi_c, np.exp(-C.g * g.z_c / (C.c_p * T0)), rtol=1e-6, atol=0)


def test_too_deep_atmosphere_rejected():
    g = Grid(0.0, 1.0, 0.0, 60e3, 2, 30)
    with pytest.raises(ValueError):
        build_background(lambda z: np.full_like(np.asarray(z, dtype=float), 150.0), g, C)


def balanced_state(I=6, K=8):
    g = Grid(0.0, 6000.0, 0.0, 8000.0, I, K)
    bg = build_background(lambda z: 300.0 * np.exp(1e-4 * np.asarray(z, dtype=float) / C.g), g, C)
    st = SimState.zeros(g)
    st.P_i[...] = bg.P_c[None, :]
    st.rho_i[...] = bg.P_c[None, :] * bg.chi_c[None, :]
    synchronize(st, bg)
    return st, bg


def test_synchronize_rest_and_offset():
    st, bg = balanced_state()
    assert np.all(st.Pchi_i == 0.0)
    # uniform chi offset: chi = chi_bar + 0.001 -> Pchi' = 0.001 P
    st.rho_i[...] = st.P_i * (bg.chi_c[None, :] + 0.001)
    synchronize(st, bg)
    assert np.allclose(st.Pchi_i, 0.001 * st.P_i, rtol=1e-12)
    before = st.Pchi_i.copy()
    synchronize(st, bg)
    assert np.array_equal(before, st.Pchi_i)


def test_solver_vars_rest_is_zero():
    st, bg = balanced_state()
    U, V, W, Tt, theta = to_solver_vars(st, bg)
    for f in (U, V, W, Tt):
        assert np.allclose(f, 0.0, atol=1e-12)


def test_theta_tilde_identity():
    # uniform Theta = Theta_bar = 300 and Pchi' = p gives Tt = -9e4 p
    g = Grid(0.0, 1000.0, 0.0, 1000.0, 4, 4)
    bg = build_background(lambda z: np.full_like(np.asarray(z, dtype=float), 300.0), g, C)
    st = SimState.zeros(g)
    st.P_i[...] = 300.0
    st.rho_i[...] = 1.0     # Theta = 300
    st.Pchi_i[...] = 2.5
    U, V, W, Tt, theta = to_solver_vars(st, bg)
    assert np.allclose(Tt, -9.0e4 * 2.5, rtol=1e-13)


def test_solver_vars_round_trip():
    st, bg = balanced_state()
    rng = np.random.default_rng(2)
    st.rhou_i[...] = rng.standard_normal(st.rhou_i.shape)
    st.rhov_i[...] = rng.standard_normal(st.rhov_i.shape)
    st.rhow_i[...] = rng.standard_normal(st.rhow_i.shape)
    st.Pchi_i[...] = 0.01 * rng.standard_normal(st.Pchi_i.shape)
    before = [st.rhou_i.copy(), st.rhov_i.copy(), st.rhow_i.copy(), st.Pchi_i.copy()]
    out = to_solver_vars(st, bg)
    from_solver_vars(st, bg, *out[:4], out[4])
    for a, b in zip(before, (st.rhou_i, st.rhov_i, st.rhow_i, st.Pchi_i)):
        assert np.allclose(a, b, rtol=1e-13, atol=1e-16)
