import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdment import _kernels as K

needs_numba = pytest.mark.skipif(not K.HAS_NUMBA, reason="numba not importable")


@needs_numba
@given(n=st.integers(0, 30), seed=st.integers(0, 2**16))
def test_hermite_backends_agree(n, seed):
    u = np.random.default_rng(seed).uniform(-3, 3, 50)
    a, b = K.hermite_numpy(n, u), K.hermite_numba(n, u)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-13 * np.max(np.abs(a)))


@needs_numba
@given(seed=st.integers(0, 2**16), nk=st.integers(1, 40), nx=st.integers(1, 300))
def test_fourier_backends_agree(seed, nk, nx):
    rng = np.random.default_rng(seed)
    ks = rng.uniform(-50, 50, nk)
    xs = rng.normal(0, 3, nx)
    wf = rng.uniform(-1, 1, nx)
    for a, b in zip(K.fourier_sums_numpy(ks, xs, wf), K.fourier_sums_numba(ks, xs, wf)):
        assert np.allclose(a, b, rtol=1e-10, atol=1e-10)


@needs_numba
@given(seed=st.integers(0, 2**16), n=st.integers(2, 200))
def test_thomas_backends_agree(seed, n):
    rng = np.random.default_rng(seed)
    diag = 4.0 + rng.uniform(0, 1, n)
    lo, up = rng.uniform(-1, 1, n - 1), rng.uniform(-1, 1, n - 1)
    rhs = rng.standard_normal(n)
    x_np = K.thomas_solve_numpy(lo, diag, up, rhs)
    x_nb = K.thomas_solve_numba(lo, diag, up, rhs)
    assert np.allclose(x_np, x_nb, rtol=1e-12, atol=1e-12)
    dense = np.diag(diag) + np.diag(up, 1) + np.diag(lo, -1)
    assert np.allclose(dense @ x_nb, rhs, atol=1e-10)


def test_backend_flag():
    assert K.BACKEND == ("numba" if K.USE_NUMBA else "numpy")
    code = "from pdment import _kernels as K; print(K.BACKEND)"
    env = dict(os.environ, PDMENT_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.strip()
    assert out == "numpy"


def test_numpy_backend_reproduces_table_cell():
    code = ("from pdment.measures import full_report; from pdment.states import *;"
            "r = full_report(StateModel(StateId.SYMWELL_PDM, lam=0.05, mode='renormalized'));"
            "print(repr(r.F_k))")
    outs = []
    for flag in ("0", "1"):
        env = dict(os.environ, PDMENT_NUMBA=flag)
        outs.append(float(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                                         text=True, check=True).stdout))
    assert outs[0] == pytest.approx(outs[1], rel=1e-10)
