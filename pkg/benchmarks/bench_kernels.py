"""Compare the compiled kernels against the NumPy fallback.

Run:  python benchmarks/bench_kernels.py [npoints]

Times the three hot kernels on grid-ordered queries (the solver's access
pattern) and one full solver step at a production-like size.
"""

import sys
import time

import numpy as np

import vlamap._kernels_py as kpy

try:
    import vlamap._kernels as kcy
except ImportError:
    kcy = None


def bench_kernels(npts):
    rng = np.random.default_rng(0)
    n = 512
    fields = [np.ascontiguousarray(rng.standard_normal((n, n))) for _ in range(8)]
    side = int(np.sqrt(npts))
    X, V = np.meshgrid(10 * np.arange(side) / side,
                       -10 + 20 * np.arange(side) / side, indexing="ij")
    xq = np.ascontiguousarray(X.ravel() + 0.003)
    vq = np.ascontiguousarray(V.ravel() - 0.004)
    args = (0.0, -10.0, 10 / n, 20 / n, xq, vq)

    backends = [("numpy", kpy)] + ([("cython", kcy)] if kcy else [])
    rows = []
    for name, mod in backends:
        for fn_name, fargs in (("bicubic_eval", fields[:4]),
                               ("stream_velocity_batch", fields[:4]),
                               ("map_apply_batch", fields)):
            fn = getattr(mod, fn_name)
            fn(*fargs, *args)  # warm up
            reps = 3
            t0 = time.perf_counter()
            for _ in range(reps):
                fn(*fargs, *args)
            rate = xq.size * reps / (time.perf_counter() - t0) / 1e6
            rows.append((name, fn_name, rate))
    print(f"{'backend':8s} {'kernel':24s} {'Mpts/s':>8s}")
    for name, fn_name, rate in rows:
        print(f"{name:8s} {fn_name:24s} {rate:8.1f}")
    if kcy:
        by_kernel = {}
        for name, fn_name, rate in rows:
            by_kernel.setdefault(fn_name, {})[name] = rate
        print("\nspeedup (cython / numpy):")
        for fn_name, d in by_kernel.items():
            print(f"  {fn_name:24s} {d['cython'] / d['numpy']:6.1f}x")


def bench_solver_step():
    from vlamap import BACKEND, preset_config, run_cmm

    cfg = preset_config("landau-linear").with_overrides(
        N=64, N_f=256, N_psi=256, T_final=0.5, dt=1 / 16)
    t0 = time.perf_counter()
    run_cmm(cfg)
    steps = 0.5 * 16
    print(f"\nfull solver step (backend={BACKEND}, N=64, N_f=N_psi=256): "
          f"{(time.perf_counter() - t0) / steps * 1e3:.1f} ms/step")
    print("set VLAMAP_PURE_PYTHON=1 to time the fallback end to end")


if __name__ == "__main__":
    npts = int(sys.argv[1]) if len(sys.argv) > 1 else 1 << 20
    bench_kernels(npts)
    bench_solver_step()
