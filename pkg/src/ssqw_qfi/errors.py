"""Exception types raised by the numerical routines."""


class SSQWError(Exception):
    """Base class for all package errors."""


class NotUnitaryError(SSQWError, ValueError):
    """A matrix expected to be unitary fails the unitarity check."""


class NumericalError(SSQWError, ArithmeticError):
    """A quantity is undefined or ill-conditioned at the requested point."""


class DegenerateError(NumericalError):
    """An eigenvector normalization factor vanishes."""


class NearSingularError(NumericalError):
    """The unit-eigenvalue projector denominator sin^2(omega) vanishes."""


class CoinSingularError(NumericalError):
    """cos(theta1/2) * cos(theta2/2) vanishes, so the poles are undefined."""


class BoundaryRegionError(NumericalError):
    """The parameters sit on a topological phase boundary."""


class SingularFisherError(NumericalError):
    """The Fisher matrix is not invertible."""


class SingularClosedFormError(NumericalError):
    """A closed-form denominator vanishes away from any known limit."""


class ConvergenceError(NumericalError):
    """Adaptive quadrature failed to reach the requested tolerance."""
