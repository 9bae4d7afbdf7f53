"""Shannon entropy, Fisher information and uncertainty relations for ground states
of the quartic and symmetric-well potentials, with constant and position-dependent mass."""

from ._kernels import BACKEND
from .errors import (
    GridMismatch,
    InvalidParams,
    NoConvergence,
    NonFiniteIntegrand,
    NotConvergedWarning,
    PdmentError,
    SingularMass,
)
from .fourier import analytic_phi, numeric_ft, numeric_momentum_state, transform_residual
from .measures import MeasureReport, fisher, full_report, shannon, variance
from .quad import QuadratureConfig, QuadratureResult, integrate_box, integrate_line
from .states import (
    MassKind,
    MassProfile,
    NormalizationMode,
    StateId,
    StateModel,
    build_state,
)
from .zk import Grid, build_hamiltonian, ground_state, overlap

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "GridMismatch", "InvalidParams", "NoConvergence", "NonFiniteIntegrand",
    "NotConvergedWarning", "PdmentError", "SingularMass", "analytic_phi", "numeric_ft",
    "numeric_momentum_state", "transform_residual", "MeasureReport", "fisher", "full_report",
    "shannon", "variance", "QuadratureConfig", "QuadratureResult", "integrate_box",
    "integrate_line", "MassKind", "MassProfile", "NormalizationMode", "StateId", "StateModel",
    "build_state", "Grid", "build_hamiltonian", "ground_state", "overlap",
]
