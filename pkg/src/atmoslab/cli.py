"""Run configuration and the command-line interface.

Subcommands:
  run     advance a benchmark case and write snapshots + diagnostics
  diff    pointwise theta' difference of two snapshots
  table1  cold-bubble extrema / front-location table over resolutions
"""

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from .cases import field_diff, front_location, make_case, theta_extrema
from .integrator import RunReport, StepConfig, courant_numbers, max_nodal_divergence, run
from .linsolve import SolverConfig
from .snapshots import read_snapshot, write_diagnostics, write_snapshot
from .state import ModelSwitches

MODES = {"comp": (1.0, 1.0), "psinc": (0.0, 1.0), "hyd": (1.0, 0.0)}

_CONFIG_KEYS = {
    "case": str, "mode": str, "nx": int, "nz": int, "cfl": float, "dt": float,
    "tmax": float, "limiter": str, "mu": float, "out": str, "snap_every": float,
    "dt_max": float, "solver_tol": float, "solver_max_iter": int,
    "solver_precond": str, "R": float, "c_p": float, "p_ref": float,
    "g": float, "f": float,
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    case: str
    mode: str = "comp"
    nx: int | None = None
    nz: int | None = None
    cfl: float | None = None
    dt: float | None = None
    tmax: float | None = None
    limiter: str = "none"
    mu: float | None = None
    out: str = "out"
    snap_every: float | None = None
    dt_max: float | None = None
    solver_tol: float = 1e-8
    solver_max_iter: int = 4000
    solver_precond: str = "none"
    R: float | None = None
    c_p: float | None = None
    p_ref: float | None = None
    g: float | None = None
    f: float | None = None

    @property
    def switches(self) -> ModelSwitches:
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; pick from {sorted(MODES)}")
        a_p, a_w = MODES[self.mode]
        return ModelSwitches(alpha_P=a_p, alpha_w=a_w)

    def constant_overrides(self):
        return {k: getattr(self, k) for k in ("R", "c_p", "p_ref", "g", "f")
                if getattr(self, k) is not None}


def parse_config(file=None, overrides=None) -> RunConfig:
    """Merge a JSON config file with flag overrides (flags win)."""
    merged = {}
    if file is not None:
        with open(file) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        merged.update(data)
    for k, v in (overrides or {}).items():
        if v is not None:
            merged[k] = v

    unknown = set(merged) - set(_CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "case" not in merged:
        raise ConfigError("a case name is required")
    if merged.get("cfl") is not None and merged.get("dt") is not None:
        raise ConfigError("cfl and dt are mutually exclusive")
    for k, caster in _CONFIG_KEYS.items():
        if k in merged and merged[k] is not None:
            merged[k] = caster(merged[k])
    cfg = RunConfig(**merged)
    cfg.switches  # validates the mode
    return cfg


def build_run(cfg: RunConfig):
    """Materialize (state, bg, step_cfg, t_max) from a RunConfig."""
    state, bg, setup = make_case(cfg.case, cfg.nx, cfg.nz,
                                 const_overrides=cfg.constant_overrides())
    cfl = setup.cfl_adv
    dt_fixed = setup.dt_fixed
    if cfg.cfl is not None:
        cfl, dt_fixed = cfg.cfl, None
    if cfg.dt is not None:
        cfl, dt_fixed = None, cfg.dt
    step_cfg = StepConfig(
        constants=setup.constants,
        switches=cfg.switches,
        solver=SolverConfig(tol=cfg.solver_tol, max_iter=cfg.solver_max_iter,
                            precond=cfg.solver_precond),
        limiter=cfg.limiter,
        cfl_adv=cfl,
        dt_fixed=dt_fixed,
        dt_max=cfg.dt_max if cfg.dt_max is not None else setup.dt_max,
        diffusion_mu=cfg.mu if cfg.mu is not None else setup.mu,
        u_ref=setup.u_ref,
    )
    t_max = cfg.tmax if cfg.tmax is not None else setup.t_max
    return state, bg, setup, step_cfg, t_max


class OutputSink:
    """Observer writing snapshots on interval crossings plus diagnostics."""

    def __init__(self, out_dir, bg, step_cfg, t_max, snap_every):
        self.out_dir = out_dir
        self.bg = bg
        self.cfg = step_cfg
        self.t_max = t_max
        self.snap_every = snap_every if snap_every else t_max
        self.next_snap = 0.0
        self.rows = []
        self.paths = []
        os.makedirs(out_dir, exist_ok=True)

    def _snap_path(self, t):
        return os.path.join(self.out_dir, f"snap_t{t:013.3f}.bin")

    def __call__(self, state, dt, report: RunReport):
        eps = 1e-9 * max(self.t_max, 1.0)
        if state.t >= self.next_snap - eps:
            self.paths.append(write_snapshot(state, self.bg, self._snap_path(state.t)))
            while self.next_snap <= state.t + eps:
                self.next_snap += self.snap_every
        adv, ac = courant_numbers(state, self.bg, self.cfg.constants, dt)
        tmin, tmax = theta_extrema(state, self.bg)
        self.rows.append({
            "t": state.t, "dt": dt, "cfl_adv": adv, "cfl_ac": ac,
            "theta_min": tmin, "theta_max": tmax,
            "front_x": front_location(state, self.bg),
            "mass": float(np.sum(state.rho_i)) * state.grid.dx * state.grid.dz,
            "Psum": float(np.sum(state.P_i)) * state.grid.dx * state.grid.dz,
            "max_div_nodes": max_nodal_divergence(state),
            "solver_iters": report.solver_iterations,
        })

    def finish(self):
        write_diagnostics(self.rows, os.path.join(self.out_dir, "diagnostics.csv"))


def run_case(cfg: RunConfig, quiet=False):
    """Full run driver used by the `run` and `table1` subcommands."""
    state, bg, setup, step_cfg, t_max = build_run(cfg)
    sink = OutputSink(cfg.out, bg, step_cfg, t_max, cfg.snap_every)
    meta = {"config": {k: v for k, v in asdict(cfg).items() if v is not None},
            "resolved": {"nx": state.grid.I, "nz": state.grid.K,
                         "dx": state.grid.dx, "dz": state.grid.dz,
                         "t_max": t_max, "mu": step_cfg.diffusion_mu,
                         "mode": cfg.mode, "case": setup.name,
                         "constants": asdict(setup.constants)}}
    os.makedirs(cfg.out, exist_ok=True)
    with open(os.path.join(cfg.out, "meta.json"), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)

    state, report = run(state, bg, step_cfg, t_max, observer=sink)
    sink.finish()
    if not quiet:
        print(f"{setup.name}[{cfg.mode}] steps={report.steps} t={report.t_final:g}s "
              f"theta'=[{report.theta_min:.4f}, {report.theta_max:.4f}] K "
              f"wall={report.wall_seconds:.1f}s")
    return state, bg, report, sink


def _cmd_run(args):
    overrides = {k: getattr(args, k, None) for k in _CONFIG_KEYS}
    cfg = parse_config(args.config, overrides)
    run_case(cfg)
    return 0


def _cmd_diff(args):
    fa, (Ia, Ka, ta) = read_snapshot(args.a)
    fb, (Ib, Kb, tb) = read_snapshot(args.b)
    if (Ia, Ka) != (Ib, Kb):
        raise ConfigError(f"grid mismatch: {(Ia, Ka)} vs {(Ib, Kb)}")
    d = field_diff(fa["theta_prime"], fb["theta_prime"])
    header = f"AFVM1 theta_prime {Ia} {Ka} {float(ta)!r}\n".encode("ascii")
    with open(args.out, "wb") as fh:
        fh.write(header + np.ascontiguousarray(d.T, dtype="<f8").tobytes())
    print(f"theta' diff extrema: [{d.min():.6e}, {d.max():.6e}] K -> {args.out}")
    return 0


def _cmd_table1(args):
    resolutions = [float(r) for r in args.resolutions.split(",")]
    print(f"{'dx [m]':>8} {'theta_min [K]':>14} {'theta_max [K]':>14} {'front [m]':>10}")
    for dx in resolutions:
        nx, nz = 51200.0 / dx, 6400.0 / dx
        if abs(nx - round(nx)) > 1e-9 or abs(nz - round(nz)) > 1e-9:
            raise ConfigError(f"resolution {dx} m does not divide the bubble domain")
        cfg = parse_config(None, {"case": "straka", "nx": int(round(nx)),
                                  "nz": int(round(nz)),
                                  "out": os.path.join(args.out, f"straka_{int(dx)}m"),
                                  "cfl": args.cfl, "mu": args.mu})
        state, bg, report, _ = run_case(cfg, quiet=True)
        tmin, tmax = theta_extrema(state, bg)
        front = front_location(state, bg)
        print(f"{dx:8.0f} {tmin:14.4f} {tmax:14.4f} {front:10.1f}")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(prog="atmoslab",
                                     description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="advance a benchmark case")
    p_run.add_argument("--case", required=False)
    p_run.add_argument("--config", help="JSON config file; flags override it")
    p_run.add_argument("--mode", choices=sorted(MODES))
    p_run.add_argument("--nx", type=int)
    p_run.add_argument("--nz", type=int)
    p_run.add_argument("--cfl", type=float)
    p_run.add_argument("--dt", type=float)
    p_run.add_argument("--tmax", type=float)
    p_run.add_argument("--limiter", choices=("none", "minmod", "vanleer", "mc"))
    p_run.add_argument("--mu", type=float)
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--snap-every", dest="snap_every", type=float)
    p_run.set_defaults(func=_cmd_run)

    p_diff = sub.add_parser("diff", help="theta' difference of two snapshots")
    p_diff.add_argument("--a", required=True)
    p_diff.add_argument("--b", required=True)
    p_diff.add_argument("--out", required=True)
    p_diff.set_defaults(func=_cmd_diff)

    p_t1 = sub.add_parser("table1", help="cold-bubble summary over resolutions")
    p_t1.add_argument("--resolutions", default="400,200,100")
    p_t1.add_argument("--out", default="out/table1")
    p_t1.add_argument("--cfl", type=float, default=None)
    p_t1.add_argument("--mu", type=float, default=None)
    p_t1.set_defaults(func=_cmd_table1)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
