"""Compare the numba and numpy backends of the RK4 and invariant kernels.

    python benchmarks/bench_kernels.py [--steps 4000] [--repeat 5]

Prints best-of-N wall time per backend and the speed-up.  The first numba
call is a warm-up so JIT compilation is not timed.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from hodograph import _accel, _kernels


def states(n: int, seed: int = 1) -> np.ndarray:
    rng = np.random.default_rng(seed)
    rad = rng.uniform(0.8, 1.2, n)
    th = rng.uniform(-np.pi, np.pi, n)
    # near-circular prograde speeds keep every trajectory away from the centre
    speed = rng.uniform(0.8, 1.1, n) / np.sqrt(rad)
    return np.column_stack([rad * np.cos(th), rad * np.sin(th), -speed * np.sin(th), speed * np.cos(th)])


def best_of(fn, repeat: int) -> float:
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=4000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--batches", type=int, nargs="+", default=[1, 16, 256])
    args = ap.parse_args(argv)

    if not _accel.HAVE_NUMBA:
        print("numba not installed; nothing to compare")
        return 0

    dt = 2 * np.pi / args.steps
    previous = _accel.get_backend()
    print(f"{'kernel':<12} {'batch':>6} {'numba [s]':>11} {'numpy [s]':>11} {'speed-up':>9}")
    try:
        for n in args.batches:
            y0 = states(n)
            work = {
                "rk4": lambda: _kernels.rk4_integrate(y0, 1.0, dt, args.steps, 1e-6),
            }
            traj = _kernels.rk4_integrate(y0, 1.0, dt, args.steps, 1e-6)[0].reshape(-1, 4)
            work["invariants"] = lambda: _kernels.invariants(traj, 1.0)
            work["lrl_rate"] = lambda: _kernels.lrl_rate(traj, 1.0)
            for name, fn in work.items():
                timings = {}
                for backend in ("numba", "numpy"):
                    _accel.set_backend(backend)
                    timings[backend] = best_of(fn, args.repeat)
                ratio = timings["numpy"] / timings["numba"]
                print(f"{name:<12} {n:>6} {timings['numba']:>11.4f} {timings['numpy']:>11.4f} {ratio:>8.1f}x")
    finally:
        _accel.set_backend(previous)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
