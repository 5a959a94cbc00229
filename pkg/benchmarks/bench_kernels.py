"""Timing comparison of the compiled and pure-Python kernels.

Run as a script::

    python3 benchmarks/bench_kernels.py

Reports per-call timings for a representative phase-plane shot and for a
fixed block of PDE time steps, plus the speedup ratio.
"""

import time

import numpy as np

from frontlab import _kernels_py

try:
    from frontlab import _kernels
except ImportError:
    _kernels = None

SHOOT_ARGS = (3.0, 3.0, 1.0, 2.0, 1.2, 1e-6, 2.11e-6,
              1e-12, 1e-14, 1e9, 1e-10, 10.0, 1e4, 2_000_000, True)


def time_call(fn, repeat, *args):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_shoot(mod, repeat):
    return time_call(mod.shoot_core, repeat, *SHOOT_ARGS)


def bench_pde(mod, repeat):
    u0 = np.where(np.linspace(-40, 40, 1601) < 0, 0.0, 1.0)

    def run():
        u = u0.copy()
        mod.pde_advance(u, 0.05, 5e-4, 2000, 3.0, 3.0, 1.0, 2.0)
    return time_call(lambda: run(), repeat)


def main():
    rows = []
    rows.append(("shoot_core [python]", bench_shoot(_kernels_py, 3)))
    rows.append(("pde_advance [python]", bench_pde(_kernels_py, 3)))
    if _kernels is not None:
        rows.append(("shoot_core [cython]", bench_shoot(_kernels, 10)))
        rows.append(("pde_advance [cython]", bench_pde(_kernels, 10)))

    width = max(len(name) for name, _ in rows)
    for name, t in rows:
        print(f"{name:<{width}}  {t * 1e3:10.3f} ms")
    if _kernels is not None:
        for op in ("shoot_core", "pde_advance"):
            tp = next(t for n, t in rows if n.startswith(op) and "python" in n)
            tc = next(t for n, t in rows if n.startswith(op) and "cython" in n)
            print(f"{op} speedup: {tp / tc:.1f}x")


if __name__ == "__main__":
    main()
