"""Quantum Fisher information of split-step quantum walks."""

from .errors import (
    BoundaryRegionError,
    CoinSingularError,
    ConvergenceError,
    DegenerateError,
    NearSingularError,
    NotUnitaryError,
    NumericalError,
    SingularClosedFormError,
    SingularFisherError,
    SSQWError,
)
from .kspace import Region, classify_region, poles
from .qfim import (
    QfimResult,
    asymptotic_qfim,
    bounds,
    closed_form_qfim,
    finite_time_qfim,
    incompatibility,
)
from .walk import WalkSpec, evolve, oracle_qfim

__version__ = "0.1.0"

__all__ = [
    "BoundaryRegionError",
    "CoinSingularError",
    "ConvergenceError",
    "DegenerateError",
    "NearSingularError",
    "NotUnitaryError",
    "NumericalError",
    "SingularClosedFormError",
    "SingularFisherError",
    "SSQWError",
    "Region",
    "classify_region",
    "poles",
    "QfimResult",
    "asymptotic_qfim",
    "bounds",
    "closed_form_qfim",
    "finite_time_qfim",
    "incompatibility",
    "WalkSpec",
    "evolve",
    "oracle_qfim",
]
