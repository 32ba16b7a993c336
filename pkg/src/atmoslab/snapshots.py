"""On-disk output: flat binary snapshots and a diagnostics CSV.

A snapshot file is a sequence of sections, one per field.  Each section is
an ASCII header line ``AFVM1 <field> <I> <K> <time_s>\\n`` followed by
little-endian float64 values, row-major with k (z) as the outer index.
Cell sections hold I*K values; the node section ``pi_prime_nodes`` holds
(I+1)*(K+1) values, the aliased periodic column included.  Velocities and
theta' are derived from the conserved fields at write time.
"""

import csv

import numpy as np

from .state import Background, SimState

MAGIC = "AFVM1"
CELL_FIELDS = ("rho", "u", "v", "w", "theta_prime", "P")
NODE_FIELD = "pi_prime_nodes"
FIELD_ORDER = ("rho", "u", "v", "w", "theta_prime", "pi_prime_nodes", "P")

DIAG_COLUMNS = ("t", "dt", "cfl_adv", "cfl_ac", "theta_min", "theta_max",
                "front_x", "mass", "Psum", "max_div_nodes", "solver_iters")


def _section_bytes(name, values, I, K, t):
    header = f"{MAGIC} {name} {I} {K} {float(t)!r}\n".encode("ascii")
    data = np.ascontiguousarray(values.T, dtype="<f8").tobytes()
    return header + data


def snapshot_fields(state: SimState, bg: Background):
    """Derive the output fields from the conserved state."""
    rho = state.rho_i
    fields = {
        "rho": rho.copy(),
        "u": state.rhou_i / rho,
        "v": state.rhov_i / rho,
        "w": state.rhow_i / rho,
        "theta_prime": state.theta_prime(bg),
        "P": state.P_i.copy(),
    }
    # append the aliased periodic node column so files are self-contained
    pin = np.concatenate([state.pi_prime, state.pi_prime[:1, :]], axis=0)
    fields["pi_prime_nodes"] = pin
    return fields


def write_snapshot(state: SimState, bg: Background, path):
    """Write one snapshot file; returns the path."""
    grid = state.grid
    fields = snapshot_fields(state, bg)
    with open(path, "wb") as fh:
        for name in FIELD_ORDER:
            fh.write(_section_bytes(name, fields[name], grid.I, grid.K, state.t))
    return path


def read_snapshot(path):
    """Parse a snapshot file into {field: array} plus (I, K, t).

    Cell arrays come back with shape (I, K), the node array with
    shape (I+1, K+1), matching the writer's conventions.
    """
    fields = {}
    meta = None
    with open(path, "rb") as fh:
        while True:
            header = fh.readline()
            if not header:
                break
            parts = header.decode("ascii").split()
            if len(parts) != 5 or parts[0] != MAGIC:
                raise ValueError(f"bad section header in {path}: {header!r}")
            name, I, K, t = parts[1], int(parts[2]), int(parts[3]), float(parts[4])
            if meta is None:
                meta = (I, K, t)
            elif meta != (I, K, t):
                raise ValueError(f"inconsistent section metadata in {path}")
            if name == NODE_FIELD:
                ni, nk = I + 1, K + 1
            else:
                ni, nk = I, K
            raw = fh.read(8 * ni * nk)
            if len(raw) != 8 * ni * nk:
                raise ValueError(f"truncated section {name!r} in {path}")
            fields[name] = np.frombuffer(raw, dtype="<f8").reshape(nk, ni).T.copy()
    if meta is None:
        raise ValueError(f"empty snapshot file {path}")
    return fields, meta


def write_diagnostics(rows, path):
    """Write the diagnostics time series as CSV, one row per step."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(DIAG_COLUMNS)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v
                             for v in (row[k] for k in DIAG_COLUMNS)])
    return path
