"""Cartesian x-z mesh, boundary conditions, and averaging stencils.

Conventions
-----------
* Cell-centered state arrays are ghosted, shape ``(I + 2*ng, K + 2*ng)``,
  indexed ``[i, k]`` with x first.  Interior cells live in
  ``a[ng:ng+I, ng:ng+K]``.
* Stencil operators in this module act on *interior-extent* views:
  cell fields of shape ``(I, K)`` and node fields of shape ``(I, K+1)``.
  x is periodic, so node column ``I`` is an alias of column ``0`` and is not
  stored; z runs over the ``K+1`` wall-to-wall node levels.
* Face fluxes: ``fx`` has shape ``(I+1, K)`` (x-faces of interior cells,
  ``fx[0] == fx[I]`` by periodicity), ``fz`` has shape ``(I, K+1)`` with the
  wall rows ``fz[:, 0] == fz[:, K] == 0``.

Wall treatment mirrors the interior (scalar / horizontal momentum) or
reflects with a sign flip (vertical momentum).  Dual cells around wall nodes
are halved; their divergence uses only interior flux contributions, which
makes the node divergence the exact negative adjoint of the cell gradient
under dual-volume weights.
"""

from dataclasses import dataclass

import numpy as np

NG = 2  # ghost width; two upwind neighbours for the slope reconstruction

BC_SCALAR = "scalar"
BC_XMOM = "x-momentum"
BC_ZMOM = "z-momentum"


@dataclass(frozen=True)
class Grid:
    """Uniform x-z mesh: periodic in x, solid walls at z_min and z_max."""

    x_min: float
    x_max: float
    z_min: float
    z_max: float
    I: int
    K: int
    ng: int = NG

    def __post_init__(self):
        if self.I < 2 or self.K < 2:
            raise ValueError("need at least 2 cells per direction")
        if self.ng < 2:
            raise ValueError("ghost width must be >= 2")
        if self.x_max <= self.x_min or self.z_max <= self.z_min:
            raise ValueError("degenerate domain extents")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.I

    @property
    def dz(self) -> float:
        return (self.z_max - self.z_min) / self.K

    @property
    def shape(self):
        """Ghosted cell-array shape."""
        return (self.I + 2 * self.ng, self.K + 2 * self.ng)

    @property
    def x_c(self):
        """Interior cell-center x coordinates, shape (I,)."""
        return self.x_min + (np.arange(self.I) + 0.5) * self.dx

    @property
    def z_c(self):
        """Interior cell-center z coordinates, shape (K,)."""
        return self.z_min + (np.arange(self.K) + 0.5) * self.dz

    @property
    def z_n(self):
        """Node z levels including both walls, shape (K+1,)."""
        return self.z_min + np.arange(self.K + 1) * self.dz

    @property
    def x_n(self):
        """Unique node x coordinates (periodic), shape (I,)."""
        return self.x_min + np.arange(self.I) * self.dx

    def new_cell_field(self):
        return np.zeros(self.shape)

    def new_node_field(self):
        return np.zeros((self.I, self.K + 1))

    def interior(self, a):
        """Interior view of a ghosted cell array."""
        ng = self.ng
        return a[ng:ng + self.I, ng:ng + self.K]

    def node_volumes(self):
        """Dual-cell volumes, shape (I, K+1); wall rows are halved."""
        v = np.full((self.I, self.K + 1), self.dx * self.dz)
        v[:, 0] *= 0.5
        v[:, -1] *= 0.5
        return v


@dataclass
class FaceFluxes:
    """Advecting mass-flux components (P*u, P*w) on cell faces."""

    fx: np.ndarray  # (I+1, K)
    fz: np.ndarray  # (I, K+1); rows 0 and K are the walls and must stay 0

    def copy(self):
        return FaceFluxes(self.fx.copy(), self.fz.copy())


def apply_bc_cell(grid: Grid, a, kind: str = BC_SCALAR):
    """Fill the ghost layers of a cell field in place.

    x ghosts wrap periodically; z ghosts mirror the interior, with a sign
    flip for the vertical-momentum class so that the wall value of rho*w
    effectively vanishes.
    """
    ng, I, K = grid.ng, grid.I, grid.K
    a[:ng, :] = a[I:I + ng, :]
    a[I + ng:, :] = a[ng:2 * ng, :]
    s = -1.0 if kind == BC_ZMOM else 1.0
    for j in range(ng):
        a[:, ng - 1 - j] = s * a[:, ng + j]
        a[:, ng + K + j] = s * a[:, ng + K - 1 - j]
    return a


def _zpad_edge(a_int):
    """Duplicate the first and last z rows (mirror-ghost semantics)."""
    return np.concatenate([a_int[:, :1], a_int, a_int[:, -1:]], axis=1)


def cell_to_node(grid: Grid, a_int):
    """Average a cell field to the nodes (4-point mean in 2D).

    Walls use the mirrored interior row, consistent with scalar boundary
    conditions.  Input (I, K), output (I, K+1).
    """
    ae = _zpad_edge(a_int)                     # (I, K+2)
    am = np.roll(ae, 1, axis=0)                # column i-1
    return 0.25 * (ae[:, :-1] + ae[:, 1:] + am[:, :-1] + am[:, 1:])


def node_to_cell(grid: Grid, a_node):
    """Average a node field to cell centers (4-point mean in 2D)."""
    ar = np.roll(a_node, -1, axis=0)           # column i+1
    return 0.25 * (a_node[:, :-1] + a_node[:, 1:] + ar[:, :-1] + ar[:, 1:])


def faces_from_cells(grid: Grid, u_int, w_int) -> FaceFluxes:
    """Divergence-controlled interpolation of cell fluxes to cell faces.

    Weights are the 2D reduction of the dual-cell averaging pattern:
    1-2-1 in the transverse direction, 1-1 in the normal direction, /8.
    The wall-normal flux is forced to zero on both walls.
    """
    I, K = grid.I, grid.K
    ue = _zpad_edge(u_int)
    gcol = 0.25 * (ue[:, :-2] + 2.0 * ue[:, 1:-1] + ue[:, 2:])   # (I, K)
    fx = np.empty((I + 1, K))
    fx[1:I, :] = 0.5 * (gcol[:-1, :] + gcol[1:, :])
    seam = 0.5 * (gcol[-1, :] + gcol[0, :])
    fx[0, :] = seam
    fx[I, :] = seam

    grow = 0.25 * (np.roll(w_int, 1, axis=0) + 2.0 * w_int + np.roll(w_int, -1, axis=0))
    fz = np.zeros((I, K + 1))
    fz[:, 1:K] = 0.5 * (grow[:, :-1] + grow[:, 1:])
    return FaceFluxes(fx, fz)


def node_divergence(grid: Grid, u_int, w_int):
    """Flux divergence on the dual (node-centered) cells.

    Dual x-faces average the two vertically adjacent cells; dual cells at the
    walls are halved and see zero wall-normal flux.  Input (I, K) cell
    fields, output (I, K+1).
    """
    I, K = grid.I, grid.K
    dx, dz = grid.dx, grid.dz

    uh = np.empty((I, K + 1))
    uh[:, 1:K] = 0.5 * (u_int[:, :-1] + u_int[:, 1:])
    uh[:, 0] = u_int[:, 0]
    uh[:, K] = u_int[:, -1]
    divx = (uh - np.roll(uh, 1, axis=0)) / dx

    wh = 0.5 * (np.roll(w_int, 1, axis=0) + w_int)   # (I, K) at node columns
    divz = np.empty((I, K + 1))
    divz[:, 1:K] = (wh[:, 1:] - wh[:, :-1]) / dz
    divz[:, 0] = 2.0 * wh[:, 0] / dz
    divz[:, K] = -2.0 * wh[:, -1] / dz
    return divx + divz


def cell_divergence_from_faces(grid: Grid, f: FaceFluxes):
    """Standard cell-centered divergence of face fluxes, shape (I, K)."""
    dfx = (f.fx[1:, :] - f.fx[:-1, :]) / grid.dx
    dfz = (f.fz[:, 1:] - f.fz[:, :-1]) / grid.dz
    return dfx + dfz


def cell_gradient(grid: Grid, pi_node):
    """Cell-centered gradient of a node field via face-averaged node values.

    Returns (gx, gz), each of shape (I, K).
    """
    pr = np.roll(pi_node, -1, axis=0)          # node column i+1
    gx = ((pr[:, :-1] + pr[:, 1:]) - (pi_node[:, :-1] + pi_node[:, 1:])) / (2.0 * grid.dx)
    gz = ((pi_node[:, 1:] + pr[:, 1:]) - (pi_node[:, :-1] + pr[:, :-1])) / (2.0 * grid.dz)
    return gx, gz


def node_mean(grid: Grid, a_node):
    """Dual-volume-weighted mean of a node field."""
    v = grid.node_volumes()
    return float(np.sum(v * a_node) / np.sum(v))
