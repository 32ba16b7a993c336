"""Compare the compiled kernel backend against the pure numpy fallback.

Times the two hot kernels (MUSCL sweeps, Helmholtz stencil) on realistic
grid sizes plus one full cold-bubble step at 100 m resolution with each
backend.  Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from atmoslab.kernels import pure

try:
    from atmoslab.kernels import _core
except ImportError:
    _core = None


def timeit(fn, repeat=7):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def sweep_inputs(I, K, ng=2, seed=0):
    rng = np.random.default_rng(seed)
    q = rng.uniform(0.5, 1.5, (5, I + 2 * ng, K + 2 * ng))
    P = rng.uniform(1.0, 2.0, (I + 2 * ng, K + 2 * ng))
    fx = rng.uniform(-0.5, 0.5, (I + 1, K))
    fz = np.zeros((I, K + 1))
    fz[:, 1:-1] = rng.uniform(-0.5, 0.5, (I, K - 1))
    return q, P, fx, fz


def helm_inputs(I, K, seed=1):
    rng = np.random.default_rng(seed)
    return (rng.standard_normal((I, K + 1)), rng.uniform(0.5, 1.5, (I, K + 1)),
            rng.uniform(0.5, 1.5, (I, K)), rng.uniform(0.5, 1.5, (I, K)))


def bench_kernels():
    rows = []
    for I, K in ((512, 64), (1200, 80)):
        q, P, fx, fz = sweep_inputs(I, K)
        for name, mod in (("python", pure),) + ((("compiled", _core),) if _core else ()):
            tx = timeit(lambda: mod.muscl_sweep_x(q.copy(), P.copy(), fx, 0.3, 1.0, 2, 0, True))
            tz = timeit(lambda: mod.muscl_sweep_z(q.copy(), P.copy(), fz, 0.3, 1.0, 2, 0, True))
            pi, diag, hx, hz = helm_inputs(I, K)
            th = timeit(lambda: mod.helmholtz_apply(pi, diag, hx, hz, 1.0, 1.0))
            rows.append((f"{I}x{K}", name, tx, tz, th))
    print(f"{'grid':>9} {'backend':>9} {'sweep_x [ms]':>13} {'sweep_z [ms]':>13} {'helmholtz [ms]':>15}")
    speed = {}
    for grid, name, tx, tz, th in rows:
        print(f"{grid:>9} {name:>9} {tx * 1e3:13.2f} {tz * 1e3:13.2f} {th * 1e3:15.2f}")
        speed[(grid, name)] = (tx, tz, th)
    if _core is not None:
        for grid in ("512x64", "1200x80"):
            p = speed[(grid, "python")]
            c = speed[(grid, "compiled")]
            ratios = ", ".join(f"{a / b:.1f}x" for a, b in zip(p, c))
            print(f"{grid}: compiled speedup (sweep_x, sweep_z, helmholtz) = {ratios}")


def bench_full_step():
    import os

    from atmoslab.cases import init_straka
    from atmoslab.integrator import StepConfig, step

    print("\nfull cold-bubble step at 100 m resolution (512 x 64):")
    for backend in ("python", "compiled") if _core else ("python",):
        import atmoslab.advection as adv
        import atmoslab.kernels as kern
        import atmoslab.semi_implicit as si
        mod = pure if backend == "python" else _core
        kern.muscl_sweep_x = mod.muscl_sweep_x
        kern.muscl_sweep_z = mod.muscl_sweep_z
        kern.helmholtz_apply = mod.helmholtz_apply
        st, bg, setup = init_straka(512, 64)
        cfg = StepConfig(constants=setup.constants, cfl_adv=None, dt_fixed=2.0,
                         diffusion_mu=75.0)
        st = step(st, bg, cfg, 2.0)     # warm up
        t0 = time.perf_counter()
        n = 5
        for _ in range(n):
            st = step(st, bg, cfg, 2.0)
        dt_ms = (time.perf_counter() - t0) / n * 1e3
        print(f"  {backend:>9}: {dt_ms:8.1f} ms/step")


if __name__ == "__main__":
    if _core is None:
        print("compiled backend not available; timing the python backend only\n")
    bench_kernels()
    bench_full_step()
