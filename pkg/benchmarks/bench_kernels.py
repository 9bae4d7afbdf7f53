"""Time the numba kernels against their numpy fallbacks.

Run with ``python benchmarks/bench_kernels.py``. The first numba call of each
kernel is excluded so compile time does not count.
"""

import argparse
import timeit

import numpy as np

from pdment import _kernels as K


def _cases(scale):
    rng = np.random.default_rng(0)
    nk, nx = 64 * scale, 2000 * scale
    ks = np.linspace(-50.0, 50.0, nk)
    xs = np.sinh(np.linspace(-6.0, 6.0, nx))
    wf = np.exp(-xs * xs) * rng.uniform(0.5, 1.5, nx)
    u = np.linspace(-5.0, 5.0, 100_000 * scale)
    n = 20_000 * scale
    diag = 2.0 + rng.uniform(0.0, 1.0, n)
    off = -np.ones(n - 1)
    rhs = rng.standard_normal(n)
    return {
        "fourier_sums": (lambda f: f(ks, xs, wf), K.fourier_sums_numpy, K.fourier_sums_numba),
        "hermite(n=20)": (lambda f: f(20, u), K.hermite_numpy, K.hermite_numba),
        "thomas_solve": (lambda f: f(off, diag, off, rhs), K.thomas_solve_numpy,
                         K.thomas_solve_numba),
    }


def _best(call, fn, repeat):
    return min(timeit.repeat(lambda: call(fn), number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scale", type=int, default=1, help="problem-size multiplier")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not K.HAS_NUMBA:
        print("numba is not importable; only the numpy path can run")
        return 1
    print(f"{'kernel':<16}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}  max |diff|")
    for name, (call, f_np, f_nb) in _cases(args.scale).items():
        call(f_nb)  # compile
        t_np = _best(call, f_np, args.repeat)
        t_nb = _best(call, f_nb, args.repeat)
        a = np.asarray(call(f_np))
        b = np.asarray(call(f_nb))
        diff = float(np.max(np.abs(a - b)))
        print(f"{name:<16}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>10.2f}  {diff:.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
