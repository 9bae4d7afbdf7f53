"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly and ``PDMENT_NUMBA`` is
not set to ``0``. Both paths are always importable under explicit names
(``*_numba`` / ``*_numpy``) so tests and the benchmark can compare them.
"""

import os

import numpy as np
from scipy.linalg import solve_banded

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and os.environ.get("PDMENT_NUMBA", "1") != "0"

# numpy path keeps the (k, x) phase matrix below this many entries
_CHUNK_ENTRIES = 1 << 21


# ---------------------------------------------------------------- numpy ----

def fourier_sums_numpy(ks, xs, wf):
    """Weighted sums for exp(-ikx) and its k-derivative.

    Returns ``(re, im, dre, dim)`` where ``re + i*im = sum_j wf_j exp(-i k x_j)``
    and ``dre + i*dim`` is the derivative of that sum with respect to k.
    """
    ks = np.ascontiguousarray(ks, dtype=np.float64)
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    wf = np.ascontiguousarray(wf, dtype=np.float64)
    out = np.empty((4, ks.size))
    step = max(1, _CHUNK_ENTRIES // max(xs.size, 1))
    wx = wf * xs
    for start in range(0, ks.size, step):
        kc = ks[start:start + step]
        phase = np.outer(kc, xs)
        c = np.cos(phase)
        s = np.sin(phase)
        out[0, start:start + step] = c @ wf
        out[1, start:start + step] = -(s @ wf)
        out[2, start:start + step] = -(s @ wx)
        out[3, start:start + step] = -(c @ wx)
    return out[0], out[1], out[2], out[3]


def hermite_numpy(n, u):
    u = np.asarray(u, dtype=np.float64)
    h_prev = np.ones_like(u)
    if n == 0:
        return h_prev
    h = 2.0 * u
    for j in range(1, n):
        h_prev, h = h, 2.0 * u * h - 2.0 * j * h_prev
    return h


def thomas_solve_numpy(lower, diag, upper, rhs):
    """Solve a tridiagonal system; ``lower``/``upper`` have length n-1."""
    n = diag.size
    ab = np.zeros((3, n))
    ab[0, 1:] = upper
    ab[1] = diag
    ab[2, :-1] = lower
    return solve_banded((1, 1), ab, rhs)


# ---------------------------------------------------------------- numba ----

if HAS_NUMBA:

    @numba.njit(cache=True, fastmath=False)
    def _fourier_sums_jit(ks, xs, wf):
        nk = ks.size
        nx = xs.size
        re = np.zeros(nk)
        im = np.zeros(nk)
        dre = np.zeros(nk)
        dim = np.zeros(nk)
        for i in range(nk):
            k = ks[i]
            a = 0.0
            b = 0.0
            c = 0.0
            d = 0.0
            for j in range(nx):
                ph = k * xs[j]
                cs = np.cos(ph)
                sn = np.sin(ph)
                w = wf[j]
                wx = w * xs[j]
                a += w * cs
                b -= w * sn
                c -= wx * sn
                d -= wx * cs
            re[i] = a
            im[i] = b
            dre[i] = c
            dim[i] = d
        return re, im, dre, dim

    @numba.njit(cache=True)
    def _hermite_jit(n, u):
        out = np.empty_like(u)
        for i in range(u.size):
            x = u[i]
            h_prev = 1.0
            if n == 0:
                out[i] = 1.0
                continue
            h = 2.0 * x
            for j in range(1, n):
                h_new = 2.0 * x * h - 2.0 * j * h_prev
                h_prev = h
                h = h_new
            out[i] = h
        return out

    @numba.njit(cache=True)
    def _thomas_jit(lower, diag, upper, rhs):
        n = diag.size
        cp = np.empty(n)
        dp = np.empty(n)
        cp[0] = upper[0] / diag[0] if n > 1 else 0.0
        dp[0] = rhs[0] / diag[0]
        for i in range(1, n):
            denom = diag[i] - lower[i - 1] * cp[i - 1]
            if i < n - 1:
                cp[i] = upper[i] / denom
            dp[i] = (rhs[i] - lower[i - 1] * dp[i - 1]) / denom
        x = np.empty(n)
        x[n - 1] = dp[n - 1]
        for i in range(n - 2, -1, -1):
            x[i] = dp[i] - cp[i] * x[i + 1]
        return x

    def fourier_sums_numba(ks, xs, wf):
        return _fourier_sums_jit(
            np.ascontiguousarray(ks, dtype=np.float64),
            np.ascontiguousarray(xs, dtype=np.float64),
            np.ascontiguousarray(wf, dtype=np.float64),
        )

    def hermite_numba(n, u):
        u = np.asarray(u, dtype=np.float64)
        flat = np.ascontiguousarray(u.ravel())
        return _hermite_jit(int(n), flat).reshape(u.shape)

    def thomas_solve_numba(lower, diag, upper, rhs):
        return _thomas_jit(
            np.ascontiguousarray(lower, dtype=np.float64),
            np.ascontiguousarray(diag, dtype=np.float64),
            np.ascontiguousarray(upper, dtype=np.float64),
            np.ascontiguousarray(rhs, dtype=np.float64),
        )

else:  # pragma: no cover
    fourier_sums_numba = fourier_sums_numpy
    hermite_numba = hermite_numpy
    thomas_solve_numba = thomas_solve_numpy


if USE_NUMBA:
    fourier_sums = fourier_sums_numba
    hermite_kernel = hermite_numba
    thomas_solve = thomas_solve_numba
else:
    fourier_sums = fourier_sums_numpy
    hermite_kernel = hermite_numpy
    thomas_solve = thomas_solve_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"
