"""Shannon entropy, Fisher information and variances in both spaces.

Every measure takes an :class:`~pdment.states.Amplitude` and a normalisation
mode. ``PAPER`` integrates the printed density as it stands (raw moments,
no division by the norm); ``RENORMALIZED`` divides the density by its norm
first. Non-normalizable amplitudes are integrated over the box [-L, L].
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .fourier import Provenance, analytic_phi, numeric_momentum_state
from .quad import DEFAULT_CONFIG, integrate_interval, integrate_line
from .states import NormalizationMode, build_state

HBAR = 1.0
DIMENSION = 1
BBM_BOUND = DIMENSION * (1.0 + math.log(math.pi))
FISHER_BOUND = 4.0 * HBAR**2
RHO_FLOOR = 1e-300
NORM_TOLERANCE = 1e-6

POSITION_ENTROPY_REGULARIZED = "PositionEntropyRegularized"
NORM_DEVIATES_FROM_UNITY = "NormDeviatesFromUnity"


def _integrate(amp, f, cfg):
    if amp.normalizable:
        return integrate_line(f, cfg).value
    return integrate_interval(f, cfg.box_halfwidth_L, cfg).value


def _norm(amp, mode, cfg):
    if NormalizationMode(mode) is NormalizationMode.PAPER:
        return 1.0
    return _integrate(amp, amp.density, cfg)


def entropy_density(rho):
    """``-rho ln rho`` with the ``rho -> 0`` limit taken below 1e-300."""
    rho = np.asarray(rho, dtype=float)
    safe = np.where(rho > RHO_FLOOR, rho, 1.0)
    return np.where(rho > RHO_FLOOR, -safe * np.log(safe), 0.0)


def fisher_density(value, deriv):
    """``rho (d ln rho)^2 = (rho')^2 / rho`` for ``rho = |f|^2``."""
    if not (np.iscomplexobj(value) or np.iscomplexobj(deriv)):
        return 4.0 * deriv * deriv
    rho = (value * np.conj(value)).real
    drho = 2.0 * (np.conj(value) * deriv).real
    safe = np.where(rho > RHO_FLOOR, rho, 1.0)
    return np.where(rho > RHO_FLOOR, drho * drho / safe, 0.0)


def shannon(amp, mode=NormalizationMode.PAPER, cfg=DEFAULT_CONFIG):
    n = _norm(amp, mode, cfg)
    return _integrate(amp, lambda x: entropy_density(amp.density(x) / n), cfg)


def fisher(amp, mode=NormalizationMode.PAPER, cfg=DEFAULT_CONFIG):
    # converges on the line even for the 1/|x| density of the quartic PDM state
    n = _norm(amp, mode, cfg)
    return integrate_line(lambda x: fisher_density(*amp.value_and_deriv(x)), cfg).value / n


def variance(amp, mode=NormalizationMode.PAPER, cfg=DEFAULT_CONFIG):
    n = _norm(amp, mode, cfg)
    m1 = _integrate(amp, lambda x: x * amp.density(x), cfg) / n
    m2 = _integrate(amp, lambda x: x * x * amp.density(x), cfg) / n
    return m2 - m1 * m1


# per-space names: same maths, one per space
shannon_position = shannon_momentum = shannon
fisher_position = fisher_momentum = fisher
variance_position = variance_momentum = variance


@dataclass(frozen=True)
class MeasureReport:
    S_x: float
    S_k: float
    bbm_sum: float
    bbm_bound: float
    bbm_margin: float
    F_x: float
    F_k: float
    fisher_product: float
    fisher_bound: float
    var_x: float
    var_k: float
    fisher_var_ratio_x: float
    fisher_var_ratio_k: float
    mode: str
    divergence_flags: tuple = field(default_factory=tuple)
    box_L: float = 10.0
    norm_x: float = 1.0
    norm_k: float = 1.0
    momentum_provenance: str = Provenance.PAPER_ANALYTIC.value
    hbar: float = HBAR
    dimension: int = DIMENSION

    def to_dict(self):
        d = asdict(self)
        d["divergence_flags"] = list(self.divergence_flags)
        return d


def momentum_for(model, psi, cfg=DEFAULT_CONFIG, source=None):
    """Pick the momentum amplitude that goes with ``psi``.

    ``source=None`` chooses the printed form in paper mode and the numeric
    transform of the renormalised state otherwise (printed form for states
    whose transform does not exist on the line).
    """
    if source is None:
        paper = model.mode is NormalizationMode.PAPER
        source = "analytic" if paper or not model.normalizable else "numeric"
    if source == "analytic":
        return analytic_phi(model, cfg)
    if source == "numeric":
        return numeric_momentum_state(psi, cfg)
    raise ValueError(f"unknown momentum source {source!r}")


def full_report(model, cfg=DEFAULT_CONFIG, momentum=None):
    mode = model.mode
    psi = build_state(model, cfg)
    phi = momentum_for(model, psi, cfg, momentum)

    S_x = shannon(psi, mode, cfg)
    S_k = shannon(phi, mode, cfg)
    F_x = fisher(psi, mode, cfg)
    F_k = fisher(phi, mode, cfg)
    var_x = variance(psi, mode, cfg)
    var_k = variance(phi, mode, cfg)
    norm_x = _integrate(psi, psi.density, cfg)
    norm_k = _integrate(phi, phi.density, cfg)

    flags = []
    if not psi.normalizable:
        flags.append(POSITION_ENTROPY_REGULARIZED)
    if mode is NormalizationMode.PAPER and (
        abs(norm_x - 1.0) > NORM_TOLERANCE or abs(norm_k - 1.0) > NORM_TOLERANCE
    ):
        flags.append(NORM_DEVIATES_FROM_UNITY)

    total = S_x + S_k
    product = F_x * F_k
    return MeasureReport(
        S_x=S_x,
        S_k=S_k,
        bbm_sum=total,
        bbm_bound=BBM_BOUND,
        bbm_margin=total - BBM_BOUND,
        F_x=F_x,
        F_k=F_k,
        fisher_product=product,
        fisher_bound=FISHER_BOUND,
        var_x=var_x,
        var_k=var_k,
        fisher_var_ratio_x=F_x / (4.0 * var_k) if var_k else math.inf,
        fisher_var_ratio_k=F_k / (4.0 * var_x) if var_x else math.inf,
        mode=mode.value,
        divergence_flags=tuple(flags),
        box_L=cfg.box_halfwidth_L,
        norm_x=norm_x,
        norm_k=norm_k,
        momentum_provenance=phi.provenance.value,
    )
