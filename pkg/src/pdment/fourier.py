"""Momentum-space amplitudes: printed closed forms and direct numeric transforms.

The transform convention is ``phi(k) = (2 pi)^-1/2 int exp(-i k x) psi(x) dx``.
"""

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .errors import InvalidParams, NotConvergedWarning
from .quad import DEFAULT_CONFIG, accumulate, integrate_interval, integrate_line
from .states import (
    SYMWELL_NORM,
    Amplitude,
    NormalizationMode,
    StateId,
    _even_poly,
    _gauss,
    _power_1px2,
    _product,
    _stretch,
    build_state,
)

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
MAX_K = 50.0
RESIDUAL_WINDOW = 10.0
_MEMO_SIZE = 64


class Provenance(str, Enum):
    PAPER_ANALYTIC = "paper-analytic"
    NUMERIC_FT = "numeric-ft"


@dataclass(frozen=True)
class MomentumState(Amplitude):
    provenance: Provenance = Provenance.PAPER_ANALYTIC
    k_support_halfwidth: float = math.inf


# --------------------------------------------------------- printed forms ---

def _phi_triple(model):
    """Printed phi(k) as a (value, d/dk, d2/dk2) triple; may be complex."""
    if model.id is StateId.QUARTIC_CONST:
        A = model.A
        amp = 1.0 / math.sqrt(math.pi)
        return lambda k: tuple(amp * t for t in _gauss(k, 1.0 / A))
    if model.id is StateId.QUARTIC_PDM:
        A = model.A

        def quartic_pdm(k):
            v = (A / math.sqrt(2.0)) * np.exp(-0.5 * k * k - 1j * k)
            d1 = (-k - 1j) * v
            d2 = ((-k - 1j) ** 2 - 1.0) * v
            return v, d1, d2

        return quartic_pdm
    if model.id is StateId.SYMWELL_CONST:
        lam = model.lam
        amp = SYMWELL_NORM**0.25
        # 1.174/sqrt(lam) - 0.348/lam^1.5 (lam - k^2)
        bracket = (1.174 / math.sqrt(lam) - 0.348 / math.sqrt(lam), 0.348 / lam**1.5)
        return lambda k: tuple(
            amp * t for t in _product(_gauss(k, 1.0 / lam), _even_poly(k, bracket))
        )
    lam = model.lam
    amp = 1.0 / math.sqrt(math.pi)
    l2 = lam * lam
    poly = (1.0, l2 / 10.0, l2 * l2 / 126.0, l2**3 / 2520.0)
    return lambda k: tuple(
        amp * t
        for t in _product(_gauss(k, 1.0), _stretch(_power_1px2, k, lam, -0.5), _even_poly(k, poly))
    )


def _momentum_from_triple(triple, scale, label):
    return MomentumState(
        func=lambda k: scale * triple(np.asarray(k, dtype=float))[0],
        deriv=lambda k: scale * triple(np.asarray(k, dtype=float))[1],
        deriv2=lambda k: scale * triple(np.asarray(k, dtype=float))[2],
        normalizable=True,
        label=label,
        joint=lambda k: tuple(scale * t for t in triple(np.asarray(k, dtype=float))[:2]),
        provenance=Provenance.PAPER_ANALYTIC,
    )


def analytic_phi(model, cfg=DEFAULT_CONFIG):
    """The printed momentum amplitude of ``model``; rescaled in renormalised mode."""
    triple = _phi_triple(model)
    phi = _momentum_from_triple(triple, 1.0, f"{model.id.value}:phi")
    if model.mode is NormalizationMode.RENORMALIZED:
        n2 = integrate_line(phi.density, cfg).value
        phi = _momentum_from_triple(triple, 1.0 / math.sqrt(n2), f"{model.id.value}:phi")
    return phi


# ----------------------------------------------------------- numeric FT ---

@dataclass(frozen=True)
class FourierResult:
    k: np.ndarray
    values: np.ndarray
    derivs: np.ndarray
    converged: np.ndarray
    error: np.ndarray


def _ft_reducer(psi, ks):
    def reduce(x, w):
        f = np.asarray(psi(x))
        parts = [f.real, f.imag] if np.iscomplexobj(f) else [f]
        out = np.zeros((len(parts), 4, ks.size))
        for p, part in enumerate(parts):
            wf = w * part
            keep = wf != 0.0
            if not np.all(np.isfinite(wf[keep])):
                raise InvalidParams("wavefunction is not finite on the quadrature nodes")
            if np.any(keep):
                out[p] = _kernels.fourier_sums(ks, x[keep], wf[keep])
        return out.ravel()

    return reduce, 2 if np.iscomplexobj(psi(np.zeros(1))) else 1


def numeric_ft_batch(psi, ks, cfg=DEFAULT_CONFIG):
    """Transform ``psi`` at every ``k`` in ``ks`` together with ``d phi / dk``.

    Normalizable amplitudes are integrated over the whole line; the others over
    [-L, L] with ``L = cfg.box_halfwidth_L``.
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=float))
    if np.any(np.abs(ks) > MAX_K):
        raise InvalidParams(f"|k| must be <= {MAX_K}")
    reduce, nparts = _ft_reducer(psi, ks)
    if psi.normalizable:
        value, err, conv, _ = accumulate(reduce, "line", cfg)
    else:
        value, err, conv, _ = accumulate(reduce, "box", cfg, scale=cfg.box_halfwidth_L)
    value = value.reshape(nparts, 4, ks.size)
    err = err.reshape(nparts, 4, ks.size).max(axis=(0, 1))
    conv = np.asarray(conv).reshape(nparts, 4, ks.size).all(axis=(0, 1))
    phi = value[0, 0] + 1j * value[0, 1]
    dphi = value[0, 2] + 1j * value[0, 3]
    if nparts == 2:
        phi = phi + 1j * (value[1, 0] + 1j * value[1, 1])
        dphi = dphi + 1j * (value[1, 2] + 1j * value[1, 3])
    return FourierResult(ks, _INV_SQRT_2PI * phi, _INV_SQRT_2PI * dphi, conv, _INV_SQRT_2PI * err)


def numeric_ft(psi, k, cfg=DEFAULT_CONFIG):
    res = numeric_ft_batch(psi, k, cfg)
    if not res.converged.all():
        warnings.warn("numeric Fourier transform did not converge", NotConvergedWarning, stacklevel=2)
    return complex(res.values[0]) if np.ndim(k) == 0 else res.values


def numeric_momentum_state(psi, cfg=DEFAULT_CONFIG, k_support=MAX_K):
    """Momentum amplitude of ``psi`` by direct quadrature, zero beyond ``k_support``."""
    if not 0 < k_support <= MAX_K:
        raise InvalidParams(f"k_support must be in (0, {MAX_K}]")

    # the measures revisit identical node sets; results are deterministic
    memo = {}

    def joint(k):
        k = np.asarray(k, dtype=float)
        key = (k.shape, k.tobytes())
        if key in memo:
            return memo[key]
        flat = k.ravel()
        val = np.zeros(flat.size, complex)
        der = np.zeros(flat.size, complex)
        inside = np.abs(flat) <= k_support
        if np.any(inside):
            res = numeric_ft_batch(psi, flat[inside], cfg)
            if not res.converged.all():
                warnings.warn("numeric Fourier transform did not converge",
                              NotConvergedWarning, stacklevel=3)
            val[inside] = res.values
            der[inside] = res.derivs
        out = (val.reshape(k.shape), der.reshape(k.shape))
        if len(memo) >= _MEMO_SIZE:
            memo.pop(next(iter(memo)))
        memo[key] = out
        return out

    return MomentumState(
        func=lambda k: joint(k)[0],
        deriv=lambda k: joint(k)[1],
        normalizable=True,
        label=f"{psi.label}:ft",
        joint=joint,
        provenance=Provenance.NUMERIC_FT,
        k_support_halfwidth=float(k_support),
    )


def transform_residual(model, cfg=DEFAULT_CONFIG, window=RESIDUAL_WINDOW):
    """L2 distance between printed and numerically transformed momentum densities.

    Both densities are rescaled to unit mass on ``[-window, window]`` first.
    """
    phi_a = analytic_phi(model, cfg)
    phi_n = numeric_momentum_state(build_state(model, cfg), cfg, k_support=window)

    rho_n = phi_n.density

    na = integrate_interval(phi_a.density, window, cfg).value
    nn = integrate_interval(rho_n, window, cfg).value

    def sq(k):
        d = phi_a.density(k) / na - rho_n(k) / nn
        return d * d

    return math.sqrt(max(integrate_interval(sq, window, cfg).value, 0.0))
