"""Finite-difference ground states of the Zhu-Kroemer position-dependent-mass equation.

The kinetic operator ``-(hbar^2/2) m^-1/2 d^2/dx^2 m^-1/2`` is rewritten as
``-(hbar^2/2) d/dx (1/m) d/dx + V_eff`` with
``V_eff = hbar^2 m''/(4 m^2) - 3 hbar^2 m'^2/(8 m^3)``, and the divergence form is
discretised with the inverse mass taken at cell midpoints. The result is a
symmetric tridiagonal matrix on the uniform grid; the wavefunction is taken
to vanish one step beyond each end of the grid.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal, eigvalsh_tridiagonal

from . import _kernels
from .errors import GridMismatch, InvalidParams, NoConvergence, SingularMass
from .states import Amplitude, MassProfile, SymmetricWell, build_state

HBAR = 1.0
DENSE_LIMIT = 2048
_MAX_INVERSE_ITERATIONS = 200


@dataclass(frozen=True)
class Grid:
    halfwidth_L: float = 10.0
    n_points: int = 2000

    def __post_init__(self):
        if not self.halfwidth_L > 0:
            raise InvalidParams("grid halfwidth L must be > 0")
        if int(self.n_points) != self.n_points or self.n_points < 64:
            raise InvalidParams("grid needs at least 64 points")

    @property
    def h(self):
        return 2.0 * self.halfwidth_L / (self.n_points - 1)

    @property
    def x(self):
        return np.linspace(-self.halfwidth_L, self.halfwidth_L, self.n_points)


@dataclass(frozen=True)
class DiscreteHamiltonian:
    diag: np.ndarray
    offdiag: np.ndarray
    grid: Grid
    mass: MassProfile
    potential: object
    ordering: str = "ZhuKroemer"

    def matvec(self, psi):
        psi = np.asarray(psi, dtype=float)
        out = self.diag * psi
        out[:-1] += self.offdiag * psi[1:]
        out[1:] += self.offdiag * psi[:-1]
        return out

    def to_dense(self):
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def effective_potential(mass, x, hbar=HBAR):
    """Curvature terms the symmetric ordering adds to ``V``."""
    m, dm, d2m = mass.evaluate(x)
    return hbar**2 * (d2m / (4.0 * m**2) - 3.0 * dm**2 / (8.0 * m**3))


def zhu_kroemer_apply(mass, potential, psi, dpsi, d2psi, x, hbar=HBAR):
    """Continuum Zhu-Kroemer operator applied term by term to sampled derivatives."""
    m, dm, _ = mass.evaluate(x)
    kinetic = -hbar**2 / (2.0 * m) * d2psi + hbar**2 / 2.0 * dm / m**2 * dpsi
    return kinetic + (effective_potential(mass, x, hbar) + potential(x)) * psi


def build_hamiltonian(mass, potential, grid, hbar=HBAR):
    if isinstance(potential, SymmetricWell) and abs(potential.lam) * grid.halfwidth_L >= np.pi:
        # cot(lam x) has poles inside the grid
        raise InvalidParams("symmetric well needs |lambda| L < pi")
    x = grid.x
    h = grid.h
    mid = np.concatenate(([x[0] - 0.5 * h], x + 0.5 * h))
    m_mid = mass(mid)
    m_nodes = mass(x)
    if np.any(~(m_mid > 0)) or np.any(~(m_nodes > 0)):
        raise SingularMass("mass must be positive on the whole grid")
    v = np.asarray(potential(x), dtype=float) + effective_potential(mass, x, hbar)
    if not np.all(np.isfinite(v)):
        raise InvalidParams("potential is not finite on the grid")
    inv_m = 1.0 / m_mid
    c = hbar**2 / (2.0 * h * h)
    diag = c * (inv_m[:-1] + inv_m[1:]) + v
    offdiag = -c * inv_m[1:-1]
    return DiscreteHamiltonian(diag, offdiag, grid, mass, potential)


def _normalise(psi, h):
    psi = psi / np.sqrt(np.sum(psi * psi) * h)
    centre = psi.size // 2
    if psi[centre] < 0 or (psi[centre] == 0 and psi[np.argmax(np.abs(psi))] < 0):
        psi = -psi
    return psi


def _inverse_iteration(H, shift, tol=1e-13):
    n = H.diag.size
    d = H.diag - shift
    off = H.offdiag
    v = np.ones(n) / np.sqrt(n)
    for _ in range(_MAX_INVERSE_ITERATIONS):
        w = _kernels.thomas_solve(off, d, off, v)
        w /= np.linalg.norm(w)
        if w @ v < 0:
            w = -w
        if np.linalg.norm(w - v) < tol:
            return w, True
        v = w
    return v, False


def ground_state(H):
    """Lowest eigenpair ``(E0, psi, converged)``; ``psi`` has ``sum psi^2 h = 1``."""
    n = H.diag.size
    h = H.grid.h
    if n <= DENSE_LIMIT:
        w, v = eigh_tridiagonal(H.diag, H.offdiag, select="i", select_range=(0, 0))
        return float(w[0]), _normalise(v[:, 0], h), True
    e0 = float(eigvalsh_tridiagonal(H.diag, H.offdiag, select="i", select_range=(0, 0))[0])
    # shift just below E0 keeps H - shift positive definite for the Thomas sweep
    shift = e0 - 1e-9 * max(1.0, abs(e0))
    vec, ok = _inverse_iteration(H, shift)
    if not ok:
        raise NoConvergence("inverse iteration did not converge")
    psi = _normalise(vec, h)
    energy = float(psi @ H.matvec(psi) * h)
    return energy, psi, True


def rayleigh_quotient(H, psi):
    psi = np.asarray(psi, dtype=float)
    return float(psi @ H.matvec(psi) / (psi @ psi))


def sample(psi, grid, normalise=True):
    values = np.asarray(psi(grid.x) if callable(psi) else psi, dtype=float)
    if values.shape != (grid.n_points,):
        raise GridMismatch(f"expected {grid.n_points} samples, got {values.shape}")
    if normalise:
        values = values / np.sqrt(np.sum(values * values) * grid.h)
    return values


def overlap(psi_a, psi_b, grid):
    """``sum psi_a psi_b h``; evaluables are sampled and normalised on ``grid``."""
    a = sample(psi_a, grid, normalise=callable(psi_a))
    b = sample(psi_b, grid, normalise=callable(psi_b))
    return float(np.sum(a * b) * grid.h)


def ode_residual(model, mass, potential, grid, hbar=HBAR):
    """How far a printed state is from solving the Zhu-Kroemer equation.

    The state is sampled with its analytic derivatives, normalised on the
    grid, and the continuum operator is applied term by term. Returns the grid
    L2 norm of ``H psi - E* psi`` with ``E*`` the Rayleigh quotient.
    """
    psi = model if isinstance(model, Amplitude) else build_state(model)
    x = grid.x
    h = grid.h
    v = psi(x)
    scale = 1.0 / np.sqrt(np.sum(v * v) * h)
    v = scale * v
    d1 = scale * psi.derivative(x)
    d2 = scale * psi.second_derivative(x)
    hv = zhu_kroemer_apply(mass, potential, v, d1, d2, x, hbar)
    energy = np.sum(v * hv) * h
    r = hv - energy * v
    return float(np.sqrt(np.sum(r * r) * h))
