import numpy as np
import pytest

from atmoslab.grid import (BC_SCALAR, BC_XMOM, BC_ZMOM, Grid, apply_bc_cell,
                           cell_divergence_from_faces, cell_gradient, cell_to_node,
                           faces_from_cells, node_divergence, node_to_cell)


def small_grid(I=8, K=5):
    return Grid(0.0, 1.0 * I, 0.0, 1.0 * K, I, K)


def rng_fields(grid, seed=0):
    rng = np.random.default_rng(seed)
    u = rng.standard_normal((grid.I, grid.K))
    w = rng.standard_normal((grid.I, grid.K))
    return u, w


def test_grid_spacings():
    g = Grid(-25600.0, 25600.0, 0.0, 6400.0, 128, 16)
    assert g.dx == pytest.approx(400.0)
    assert g.dz == pytest.approx(400.0)
    with pytest.raises(ValueError):
        Grid(0.0, 1.0, 0.0, 1.0, 4, 4, ng=1)


def test_apply_bc_periodic_and_mirror():
    g = small_grid()
    a = g.new_cell_field()
    g.interior(a)[...] = np.arange(g.I * g.K, dtype=float).reshape(g.I, g.K)
    apply_bc_cell(g, a, BC_SCALAR)
    ng = g.ng
    # periodic wrap: ghost column left of the interior equals last interior column
    assert np.array_equal(a[ng - 1, ng:-ng], a[ng + g.I - 1, ng:-ng])
    assert np.array_equal(a[ng + g.I, ng:-ng], a[ng, ng:-ng])
    # mirror in z
    assert np.array_equal(a[:, ng - 1], a[:, ng])
    assert np.array_equal(a[:, ng + g.K], a[:, ng + g.K - 1])

    w = g.new_cell_field()
    g.interior(w)[...] = 3.0
    apply_bc_cell(g, w, BC_ZMOM)
    assert np.all(w[:, g.ng - 1] == -3.0)
    assert np.all(w[:, g.ng + g.K] == -3.0)
    u = g.new_cell_field()
    g.interior(u)[...] = 2.0
    apply_bc_cell(g, u, BC_XMOM)
    assert np.all(u[:, g.ng - 1] == 2.0)


def test_averages_preserve_constants():
    g = small_grid()
    c = np.full((g.I, g.K), 4.25)
    assert np.allclose(cell_to_node(g, c), 4.25)
    n = np.full((g.I, g.K + 1), -1.5)
    assert np.allclose(node_to_cell(g, n), -1.5)
    f = faces_from_cells(g, c, np.zeros_like(c))
    assert np.allclose(f.fx, 4.25)
    assert np.all(f.fz[:, 0] == 0.0) and np.all(f.fz[:, -1] == 0.0)


def test_cell_to_node_hand_values():
    g = small_grid(4, 3)
    a = np.zeros((4, 3))
    # node (2, 1) sits between cells (1,0),(2,0),(1,1),(2,1)
    a[1, 0], a[2, 0], a[1, 1], a[2, 1] = 1.0, 2.0, 3.0, 4.0
    assert cell_to_node(g, a)[2, 1] == pytest.approx(2.5)


def test_node_to_cell_hand_values():
    g = small_grid(4, 3)
    n = np.zeros((4, 4))
    n[1, 1], n[2, 1], n[1, 2], n[2, 2] = 0.0, 0.0, 1.0, 1.0
    assert node_to_cell(g, n)[1, 1] == pytest.approx(0.5)


def test_node_linear_in_z():
    g = small_grid()
    zc = np.broadcast_to(g.z_c, (g.I, g.K)).copy()
    nodes = cell_to_node(g, zc)
    # interior node levels reproduce the node height exactly
    assert np.allclose(nodes[:, 1:-1], g.z_n[1:-1])
    back = node_to_cell(g, np.broadcast_to(g.z_n, (g.I, g.K + 1)).copy())
    assert np.allclose(back, g.z_c)


def test_faces_single_impulse_weights():
    g = small_grid()
    u = np.zeros((g.I, g.K))
    u[3, 2] = 8.0
    f = faces_from_cells(g, u, np.zeros_like(u))
    assert f.fx[4, 2] == pytest.approx(2.0)   # face i0+1/2, same row
    assert f.fx[3, 2] == pytest.approx(2.0)   # face i0-1/2
    assert f.fx[4, 1] == pytest.approx(1.0)
    assert f.fx[4, 3] == pytest.approx(1.0)
    assert f.fx[5, 2] == pytest.approx(0.0)


def test_faces_linear_in_x():
    g = small_grid()
    u = np.broadcast_to(g.x_c[:, None], (g.I, g.K)).copy()
    f = faces_from_cells(g, u, np.zeros_like(u))
    # interior faces (away from the periodic seam) see the face coordinate
    xf = g.x_min + np.arange(1, g.I) * g.dx
    assert np.allclose(f.fx[1:g.I, :], xf[:, None])


def test_node_divergence_constants_and_linear():
    g = small_grid()
    u = np.full((g.I, g.K), 2.0)
    w = np.full((g.I, g.K), 0.0)
    assert np.allclose(node_divergence(g, u, w), 0.0, atol=1e-14)
    ux = np.broadcast_to(g.x_c[:, None], (g.I, g.K)).copy()
    div = node_divergence(g, ux, w)
    assert np.allclose(div[1:-1, :], 1.0)  # away from the periodic seam


def brute_force_node_divergence(grid, u, w):
    """Independent quadrature: boundary flux sum over each dual cell."""
    I, K = grid.I, grid.K
    dx, dz = grid.dx, grid.dz
    out = np.zeros((I, K + 1))
    for n in range(I):
        for m in range(K + 1):
            z_lo = max(m * dz - 0.5 * dz, 0.0)
            z_hi = min(m * dz + 0.5 * dz, K * dz)
            vol = dx * (z_hi - z_lo)
            flux = 0.0
            # x faces at cell columns n-1 and n; face value = vertical mean of
            # the cell values overlapping the dual cell
            for col, sgn in ((n % I, +1.0), ((n - 1) % I, -1.0)):
                if m == 0:
                    val = u[col, 0]
                elif m == K:
                    val = u[col, K - 1]
                else:
                    val = 0.5 * (u[col, m - 1] + u[col, m])
                flux += sgn * val * (z_hi - z_lo)
            # z faces at cell rows m-1 and m (walls carry zero flux)
            for row, sgn in ((m, +1.0), (m - 1, -1.0)):
                if 0 <= row <= K - 1:
                    val = 0.5 * (w[(n - 1) % I, row] + w[n % I, row])
                    flux += sgn * val * dx
            out[n, m] = flux / vol
    return out


def test_node_divergence_vs_quadrature_oracle():
    g = small_grid(4, 4)
    u, w = rng_fields(g, seed=3)
    assert np.allclose(node_divergence(g, u, w),
                       brute_force_node_divergence(g, u, w), atol=1e-13)


def test_divergence_control_identity():
    # cell_div(faces(U,W)) == node_to_cell(node_div(U,W)) to round-off
    g = small_grid(8, 5)
    u, w = rng_fields(g, seed=7)
    lhs = cell_divergence_from_faces(g, faces_from_cells(g, u, w))
    rhs = node_to_cell(g, node_divergence(g, u, w))
    assert np.allclose(lhs, rhs, atol=1e-13)


def test_cell_divergence_linear_faces():
    g = small_grid()
    f = faces_from_cells(g, np.zeros((g.I, g.K)), np.zeros((g.I, g.K)))
    f.fx[...] = np.arange(g.I + 1, dtype=float)[:, None] * g.dx
    f.fz[...] = 0.0
    assert np.allclose(cell_divergence_from_faces(g, f), 1.0)


def test_gradient_constant_and_linear():
    g = small_grid()
    pi = np.full((g.I, g.K + 1), 2.0)
    gx, gz = cell_gradient(g, pi)
    assert np.allclose(gx, 0.0) and np.allclose(gz, 0.0)
    pi = np.broadcast_to(g.x_n[:, None], (g.I, g.K + 1)).copy()
    gx, gz = cell_gradient(g, pi)
    assert np.allclose(gx[:-1, :], 1.0)   # seam column wraps
    assert np.allclose(gz, 0.0, atol=1e-14)
    pi = np.broadcast_to(g.z_n, (g.I, g.K + 1)).copy()
    gx, gz = cell_gradient(g, pi)
    assert np.allclose(gz, 1.0)


def test_summation_by_parts_adjointness():
    # <div(U,W), pi>_V = -<(U,W), grad pi> exactly (no boundary terms)
    g = small_grid(6, 4)
    rng = np.random.default_rng(11)
    u, w = rng_fields(g, seed=5)
    pi = rng.standard_normal((g.I, g.K + 1))
    div = node_divergence(g, u, w)
    gx, gz = cell_gradient(g, pi)
    vol = g.node_volumes()
    lhs = np.sum(vol * div * pi)
    rhs = -np.sum((u * gx + w * gz)) * g.dx * g.dz
    assert lhs == pytest.approx(rhs, rel=1e-12)
