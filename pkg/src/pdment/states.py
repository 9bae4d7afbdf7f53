"""Mass profiles, potentials and the four ground-state wavefunction models.

Units: hbar = 1 throughout, m0 = 1 unless a profile says otherwise.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .errors import DerivativeUnavailable, InvalidParams, UnsupportedElement, UnsupportedOrder
from .quad import DEFAULT_CONFIG, integrate_interval, integrate_line

HERMITE_MAX_ORDER = 30
# |lambda x| below this uses the Taylor series of the symmetric well
_SERIES_SWITCH = 0.05
_FD_STEP = 1e-6

SYMWELL_NORM = (1.0 / math.pi) * math.sqrt(2.0 / 45.0)
PRINTED_MIXING = 0.087


class StateId(str, Enum):
    QUARTIC_CONST = "quartic-const"
    QUARTIC_PDM = "quartic-pdm"
    SYMWELL_CONST = "symwell-const"
    SYMWELL_PDM = "symwell-pdm"


class NormalizationMode(str, Enum):
    PAPER = "paper"
    RENORMALIZED = "renormalized"


class DecayClass(str, Enum):
    NORMALIZABLE = "normalizable"
    NON_NORMALIZABLE = "non-normalizable"


class MassKind(str, Enum):
    CONSTANT = "constant"
    SOLITONIC = "solitonic"


# ------------------------------------------------------------------ mass ---

@dataclass(frozen=True)
class MassProfile:
    kind: MassKind = MassKind.SOLITONIC
    m0: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", MassKind(self.kind))
        if not self.m0 > 0:
            raise InvalidParams("m0 must be > 0")

    def evaluate(self, x):
        """Return ``(m, m', m'')`` at ``x``."""
        x = np.asarray(x, dtype=float)
        if self.kind is MassKind.CONSTANT:
            m = np.full_like(x, self.m0)
            return m, np.zeros_like(x), np.zeros_like(x)
        s = 1.0 + x * x
        m = self.m0 / s
        dm = -2.0 * self.m0 * x / s**2
        d2m = self.m0 * (6.0 * x * x - 2.0) / s**3
        return m, dm, d2m

    def __call__(self, x):
        return self.evaluate(x)[0]


def mass_eval(profile, x):
    return profile.evaluate(x)


# ------------------------------------------------------------- potentials ---

@dataclass(frozen=True)
class Harmonic:
    """``V(x) = a x^2``."""

    a: float = 1.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.a * x * x


@dataclass(frozen=True)
class Quartic:
    """``V(x) = a x^2 + b x^4`` with ``b > 0``."""

    a: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        if not self.b > 0:
            raise InvalidParams("b must be > 0 for the quartic potential")

    def __call__(self, x):
        x2 = np.asarray(x, dtype=float) ** 2
        return self.a * x2 + self.b * x2 * x2


@dataclass(frozen=True)
class SymmetricWell:
    """``V(x) = V0 (1 - lx cot(lx)) / (lx)^2``; singular where ``|lx| = pi``."""

    V0: float = 1.0
    lam: float = 0.2

    def __post_init__(self):
        if not self.lam > 0:
            raise InvalidParams("lambda must be > 0")

    def __call__(self, x):
        y = self.lam * np.asarray(x, dtype=float)
        y2 = y * y
        out = np.empty_like(y)
        small = np.abs(y) < _SERIES_SWITCH
        c = _DEFAULT_SERIES
        ys = y2[small]
        out[small] = c[0] + ys * (c[1] + ys * (c[2] + ys * c[3]))
        yb = y[~small]
        out[~small] = (1.0 - yb * np.cos(yb) / np.sin(yb)) / (yb * yb)
        return self.V0 * out


@dataclass(frozen=True)
class SymmetricWellSeries:
    """The symmetric well truncated at ``(lx)^order``."""

    V0: float = 1.0
    lam: float = 0.2
    order: int = 6

    def __post_init__(self):
        if not self.lam > 0:
            raise InvalidParams("lambda must be > 0")
        if self.order not in (2, 4, 6):
            raise UnsupportedOrder(f"series order must be 2, 4 or 6, got {self.order}")

    def __call__(self, x):
        y2 = (self.lam * np.asarray(x, dtype=float)) ** 2
        coeffs = potential_series(self.V0, self.lam, self.order)
        out = np.zeros_like(y2)
        for c in reversed(coeffs):
            out = out * y2 + c
        return out


_SERIES_FRACTIONS = (Fraction(1, 3), Fraction(1, 45), Fraction(2, 945), Fraction(1, 4725))
_DEFAULT_SERIES = tuple(float(c) for c in _SERIES_FRACTIONS)


def potential_series(V0, lam, order):
    """Coefficients of ``(lam x)^0, (lam x)^2, ...`` up to ``order``, times ``V0``.

    ``lam`` only labels the expansion variable; the coefficients multiply
    powers of ``lam x``, not of ``x``.
    """
    if order not in (2, 4, 6):
        raise UnsupportedOrder(f"series order must be 2, 4 or 6, got {order}")
    return [V0 * c for c in _DEFAULT_SERIES[: order // 2 + 1]]


def bernoulli_numbers(n_max):
    """Exact Bernoulli numbers B_0..B_n_max (B_1 = -1/2 convention)."""
    B = [Fraction(0)] * (n_max + 1)
    B[0] = Fraction(1)
    for m in range(1, n_max + 1):
        B[m] = -sum(math.comb(m + 1, j) * B[j] for j in range(m)) / (m + 1)
    return B


def bernoulli_series_coefficients(order):
    """Symmetric-well coefficients rebuilt from the Bernoulli-number sum.

    ``V/V0 = -4 sum_{n>=1} (-1)^n (2y)^(2n-2) B_2n / (2n)!`` with ``y = lam x``;
    returns the coefficients of ``y^0, y^2, ..., y^order`` as fractions.
    """
    n_terms = order // 2 + 1
    B = bernoulli_numbers(2 * n_terms)
    out = []
    for n in range(1, n_terms + 1):
        c = Fraction(-4 * (-1) ** n * 2 ** (2 * n - 2)) * B[2 * n] / math.factorial(2 * n)
        out.append(c)
    return out


# --------------------------------------------------------------- hermite ---

def hermite(n, u):
    """Physicists' Hermite polynomial H_n(u) by three-term recurrence."""
    if int(n) != n or n < 0 or n > HERMITE_MAX_ORDER:
        raise UnsupportedOrder(f"hermite order must be in 0..{HERMITE_MAX_ORDER}, got {n}")
    scalar = np.ndim(u) == 0
    out = _kernels.hermite_kernel(int(n), np.atleast_1d(np.asarray(u, dtype=float)))
    return float(out[0]) if scalar else out


# ------------------------------------------------------ ladder operators ---

def ladder_coefficient(n, p):
    """Integer ``c`` with ``<n|(a + a^dagger)^p|0> = c * sqrt(n!)``."""
    if n < 0 or p < 0:
        raise UnsupportedElement(f"matrix element <{n}|x^{p}|0> is undefined")
    coeffs = {0: 1}
    for _ in range(p):
        nxt = {}
        for level, c in coeffs.items():
            nxt[level + 1] = nxt.get(level + 1, 0) + c
            if level > 0:
                nxt[level - 1] = nxt.get(level - 1, 0) + level * c
        coeffs = nxt
    return coeffs.get(n, 0)


def matrix_element(n, p, length=1.0):
    """``<n|x^p|0>`` for an oscillator with length ``length`` (x = l (a+a^dagger)/sqrt2)."""
    c = ladder_coefficient(n, p)
    return c * math.sqrt(math.factorial(n)) * (length / math.sqrt(2.0)) ** p


_PERTURBATION_TERMS = {4: _SERIES_FRACTIONS[2], 6: _SERIES_FRACTIONS[3]}


def oscillator_frequency(lam, V0=1.0, convention="potential"):
    """Frequency of the harmonic part ``(V0/45)(lam x)^2`` of the symmetric well.

    ``"potential"`` reads it as ``omega^2/2 = V0 lam^2/45``; ``"u-scaling"``
    takes the oscillator variable ``u = sqrt(lam) x`` literally (omega = lam).
    """
    if convention == "potential":
        return lam * math.sqrt(2.0 * V0 / 45.0)
    if convention == "u-scaling":
        return lam
    raise ValueError(f"unknown convention {convention!r}")


def perturbation_coefficient(basis_state_n, perturbation_power, lam=1.0, V0=1.0,
                             convention="potential"):
    """First-order mixing of ``|n>`` into the oscillator ground state.

    The perturbation is the ``(lam x)^p`` term of the symmetric-well series;
    returns ``<n|H1|0> / (E0 - En)``.
    """
    if basis_state_n not in (2, 4, 6) or perturbation_power not in (4, 6):
        raise UnsupportedElement(
            f"unsupported element n={basis_state_n}, power={perturbation_power}"
        )
    omega = oscillator_frequency(lam, V0, convention)
    length = 1.0 / math.sqrt(omega)
    coeff = float(_PERTURBATION_TERMS[perturbation_power]) * V0 * lam**perturbation_power
    element = coeff * matrix_element(basis_state_n, perturbation_power, length)
    return element / (-basis_state_n * omega)


def hermite_bracket_coefficient(lam, V0=1.0, convention="potential"):
    """Coefficient ``beta`` in ``psi0 * [1 + beta (4u^2 - 2)]`` from |2> mixing.

    The printed constant-mass symmetric-well state has ``beta = -0.087``.
    """
    mix = sum(perturbation_coefficient(2, p, lam, V0, convention) for p in (4, 6))
    # |2> = psi0 * H2(u) / sqrt(2^2 2!)
    return mix / math.sqrt(8.0)


# --------------------------------------------------------- ansatz fitting ---

@dataclass(frozen=True)
class AnsatzFit:
    r: float
    s: float
    q: float
    residual: float
    unmatched: str


def gaussian_ansatz_fit(A, B, C, cfg=DEFAULT_CONFIG):
    """Fit ``N exp(r x^2 + s x + q)`` to ``psi'' + (A - B x^2 - C x^4) psi = 0``.

    Matching the constant term fixes ``r = -A/2`` with ``s = 0``; ``q`` folds
    into the normalisation. The x^2 and x^4 terms are left unmatched unless
    ``B = A^2`` and ``C = 0``; ``residual`` is the L2 norm of the ODE residual
    for the unit-normalised ansatz.
    """
    if not A > 0:
        raise InvalidParams("A must be > 0")
    r, s, q = -A / 2.0, 0.0, 0.0
    norm = (-2.0 * r / math.pi) ** 0.25

    def resid_sq(x):
        psi = norm * np.exp(r * x * x + s * x + q)
        d2 = ((2.0 * r * x + s) ** 2 + 2.0 * r) * psi
        res = d2 + (A - B * x * x - C * x**4) * psi
        return res * res

    residual = math.sqrt(max(integrate_line(resid_sq, cfg).value, 0.0))
    unmatched = []
    if not math.isclose(4.0 * r * r, B, rel_tol=1e-12, abs_tol=1e-14):
        unmatched.append(f"x^2: 4r^2 = {4 * r * r:.6g} vs B = {B:.6g}")
    if C != 0:
        unmatched.append(f"x^4: 0 vs C = {C:.6g}")
    return AnsatzFit(r, s, q, residual, "; ".join(unmatched) or "none")


# -------------------------------------------------------------- amplitudes ---

def _fd(f, x, h=_FD_STEP):
    d = (f(x + h) - f(x - h)) / (2.0 * h)
    if not np.all(np.isfinite(d)):
        raise DerivativeUnavailable("finite-difference derivative is not finite")
    return d


@dataclass(frozen=True)
class Amplitude:
    """An evaluable amplitude (wavefunction) on the real line.

    ``deriv``/``deriv2`` are analytic derivatives when known; otherwise a
    central difference with step 1e-6 is used. ``joint`` optionally returns
    ``(value, deriv)`` in one pass.
    """

    func: Callable
    deriv: Optional[Callable] = None
    deriv2: Optional[Callable] = None
    normalizable: bool = True
    label: str = ""
    joint: Optional[Callable] = field(default=None, repr=False)

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        if self.joint is not None:
            return self.joint(x)[1]
        if self.deriv is not None:
            return self.deriv(x)
        return _fd(self.func, x)

    def second_derivative(self, x):
        x = np.asarray(x, dtype=float)
        if self.deriv2 is not None:
            return self.deriv2(x)
        return _fd(self.derivative, x)

    def value_and_deriv(self, x):
        x = np.asarray(x, dtype=float)
        if self.joint is not None:
            return self.joint(x)
        return self.func(x), self.derivative(x)

    def density(self, x):
        v = self(x)
        return (v * np.conj(v)).real if np.iscomplexobj(v) else v * v

    @property
    def decay_class(self):
        return DecayClass.NORMALIZABLE if self.normalizable else DecayClass.NON_NORMALIZABLE

    def scaled(self, c):
        def scale_pair(x):
            v, d = self.value_and_deriv(x)
            return c * v, c * d

        return Amplitude(
            func=lambda x: c * self.func(x),
            deriv=None if self.deriv is None else (lambda x: c * self.deriv(x)),
            deriv2=None if self.deriv2 is None else (lambda x: c * self.deriv2(x)),
            normalizable=self.normalizable,
            label=self.label,
            joint=None if self.joint is None else scale_pair,
        )


# Factor triples (value, first, second derivative) used to assemble states.

def _gauss(x, a):
    g = np.exp(-0.5 * a * x * x)
    return g, -a * x * g, (a * a * x * x - a) * g


def _power_1px2(x, p):
    s = 1.0 + x * x
    v = s**p
    return v, 2.0 * p * x * s ** (p - 1), 2.0 * p * s ** (p - 1) + 4.0 * p * (p - 1) * x * x * s ** (p - 2)


def _exp_rational(x):
    # exp(-x^2 / (2 (1 + x^2)))
    s = 1.0 + x * x
    q = 0.5 * x * x / s
    q1 = x / s**2
    q2 = (1.0 - 3.0 * x * x) / s**3
    f = np.exp(-q)
    return f, -q1 * f, (q1 * q1 - q2) * f


def _even_poly(x, coeffs):
    """``sum_j c_j x^(2j)`` and its derivatives."""
    x2 = x * x
    v = np.zeros_like(x)
    d1 = np.zeros_like(x)
    d2 = np.zeros_like(x)
    for j, c in enumerate(coeffs):
        if c == 0:
            continue
        v = v + c * x2**j
        if j >= 1:
            d1 = d1 + c * 2 * j * x ** (2 * j - 1)
            d2 = d2 + c * 2 * j * (2 * j - 1) * x ** (2 * j - 2)
    return v, d1, d2


def _stretch(triple_fn, x, scale, *args):
    """Factor evaluated at ``x / scale`` with chain-rule derivatives."""
    v, d1, d2 = triple_fn(x / scale, *args)
    return v, d1 / scale, d2 / (scale * scale)


def _product(*factors):
    v, d1, d2 = factors[0]
    for w, e1, e2 in factors[1:]:
        v, d1, d2 = v * w, d1 * w + v * e1, d2 * w + 2.0 * d1 * e1 + v * e2
    return v, d1, d2


def amplitude_from_triple(triple, scale=1.0, normalizable=True, label=""):
    """Wrap ``triple(x) -> (v, v', v'')`` as an :class:`Amplitude`."""
    return Amplitude(
        func=lambda x: scale * triple(np.asarray(x, dtype=float))[0],
        deriv=lambda x: scale * triple(np.asarray(x, dtype=float))[1],
        deriv2=lambda x: scale * triple(np.asarray(x, dtype=float))[2],
        normalizable=normalizable,
        label=label,
        joint=lambda x: tuple(scale * t for t in triple(np.asarray(x, dtype=float))[:2]),
    )


# ------------------------------------------------------------ state model ---

_PARAM_OF = {
    StateId.QUARTIC_CONST: "A",
    StateId.QUARTIC_PDM: "A",
    StateId.SYMWELL_CONST: "lambda",
    StateId.SYMWELL_PDM: "lambda",
}


@dataclass(frozen=True)
class StateModel:
    id: StateId
    A: Optional[float] = None
    lam: Optional[float] = None
    mode: NormalizationMode = NormalizationMode.PAPER

    def __post_init__(self):
        object.__setattr__(self, "id", StateId(self.id))
        object.__setattr__(self, "mode", NormalizationMode(self.mode))
        name = _PARAM_OF[self.id]
        value = self.A if name == "A" else self.lam
        if value is None or not np.isfinite(value) or not value > 0:
            raise InvalidParams(f"{name} must be > 0 for state {self.id.value}")

    @property
    def parameter_name(self):
        return _PARAM_OF[self.id]

    @property
    def parameter(self):
        return self.A if self.parameter_name == "A" else self.lam

    @property
    def decay_class(self):
        if self.id is StateId.QUARTIC_PDM:
            return DecayClass.NON_NORMALIZABLE
        return DecayClass.NORMALIZABLE

    @property
    def normalizable(self):
        return self.decay_class is DecayClass.NORMALIZABLE

    def with_mode(self, mode):
        return StateModel(self.id, self.A, self.lam, NormalizationMode(mode))


def _sym_pdm_poly(lam, sign):
    l2 = lam * lam
    return (1.0, sign * l2 / 10.0, l2 * l2 / 126.0, sign * l2**3 / 2520.0)


def _position_triple(model):
    if model.id is StateId.QUARTIC_CONST:
        A = model.A
        amp = math.sqrt(A / math.pi)
        return lambda x: tuple(amp * t for t in _gauss(x, A))
    if model.id is StateId.QUARTIC_PDM:
        A = model.A
        return lambda x: tuple(A * t for t in _product(_power_1px2(x, -0.25), _exp_rational(x)))
    if model.id is StateId.SYMWELL_CONST:
        lam = model.lam
        amp = SYMWELL_NORM**0.25
        # 1 - 0.087 (4 lam x^2 - 2)
        bracket = (1.0 + 2.0 * PRINTED_MIXING, -4.0 * PRINTED_MIXING * lam)
        return lambda x: tuple(amp * t for t in _product(_gauss(x, lam), _even_poly(x, bracket)))
    lam = model.lam
    amp = 1.0 / math.sqrt(math.pi)
    poly = _sym_pdm_poly(lam, -1.0)
    return lambda x: tuple(
        amp * t for t in _product(_gauss(x, 1.0), _power_1px2(x, -0.5), _even_poly(x, poly))
    )


def norm_squared(amplitude, cfg=DEFAULT_CONFIG):
    """``int |f|^2`` on the line, or on [-L, L] for non-normalizable amplitudes."""
    if amplitude.normalizable:
        return integrate_line(amplitude.density, cfg).value
    return integrate_interval(amplitude.density, cfg.box_halfwidth_L, cfg).value


def build_state(model, cfg=DEFAULT_CONFIG):
    """Position-space wavefunction of ``model`` (printed form, or unit-normalised)."""
    triple = _position_triple(model)
    psi = amplitude_from_triple(triple, normalizable=model.normalizable,
                                label=f"{model.id.value}:psi")
    if model.mode is NormalizationMode.RENORMALIZED:
        psi = amplitude_from_triple(triple, 1.0 / math.sqrt(norm_squared(psi, cfg)),
                                    normalizable=model.normalizable,
                                    label=f"{model.id.value}:psi")
    return psi

