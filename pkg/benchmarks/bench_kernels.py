"""Compare the numba and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5] [--nodes 256 1024]

Each kernel is run once untimed (JIT compile / cache load), then timed with
``timeit`` taking the best of ``--repeat`` rounds.  A full support-function
step loop is timed as well, since that is where the solver spends its time.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from hmcf import _kernels
from hmcf import _kernels_numpy as npk


def _oval(n):
    th = 2 * np.pi * np.arange(n) / n
    return 1 + 0.3 * np.cos(2 * th), -np.ones(n), 2 * np.pi / n


def _step_loop(impl, s, w, h, steps=200):
    for _ in range(steps):
        s, w, status, _, _ = impl.rk4_support_step(s, w, 1e-4, -0.1, -0.1, -0.1, h, 1e-8)
    return s


def cases(n):
    s, w, h = _oval(n)
    ts, cs = np.array([0.0]), np.array([-0.5])
    return {
        f"deriv2 n={n}": lambda m: m.deriv2(s, h),
        f"support_rhs n={n}": lambda m: m.support_rhs(s, w, -0.1, h),
        f"rk4 step n={n}": lambda m: m.rk4_support_step(s, w, 1e-4, -0.1, -0.1, -0.1, h, 1e-8),
        f"200 rk4 steps n={n}": lambda m: _step_loop(m, s, w, h),
        "radial collapse": lambda m: m.radial_integrate(1.0, 0.0, 1.0, ts, cs, 1e-2, 1e-6, 10 ** 7),
    }


def time_case(fn, impl, repeat):
    fn(impl)  # warm-up
    number = 1
    while timeit.timeit(lambda: fn(impl), number=number) < 0.05 and number < 10 ** 5:
        number *= 10
    return min(timeit.repeat(lambda: fn(impl), number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--nodes", type=int, nargs="+", default=[256, 1024])
    args = ap.parse_args(argv)

    nbk = _kernels.numba_impl
    if nbk is None:
        print("numba is not installed; only the numpy backend can be timed")
    print(f"{'kernel':<24}{'numpy [us]':>14}{'numba [us]':>14}{'speedup':>10}")
    seen = set()
    for n in args.nodes:
        for name, fn in cases(n).items():
            if name in seen:
                continue
            seen.add(name)
            t_np = time_case(fn, npk, args.repeat)
            if nbk is None:
                print(f"{name:<24}{t_np * 1e6:>14.1f}{'-':>14}{'-':>10}")
                continue
            t_nb = time_case(fn, nbk, args.repeat)
            print(f"{name:<24}{t_np * 1e6:>14.1f}{t_nb * 1e6:>14.1f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
