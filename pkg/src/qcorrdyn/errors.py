"""Exception types raised by qcorrdyn."""


class QCorrError(Exception):
    """Base class for all package errors."""


class InvalidStateError(QCorrError, ValueError):
    """A matrix failed one of the density-matrix invariants."""

    invariant = "valid state"

    def __init__(self, magnitude: float, detail: str = ""):
        self.magnitude = float(magnitude)
        msg = f"{self.invariant} violated (magnitude {self.magnitude:.3e})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NotHermitian(InvalidStateError):
    invariant = "Hermiticity"


class TraceNotOne(InvalidStateError):
    invariant = "unit trace"


class NotPositive(InvalidStateError):
    invariant = "positivity"


class NoConvergence(QCorrError, ArithmeticError):
    """The Jacobi eigensolver exhausted its sweep budget."""


class IncompleteProjectorSet(QCorrError, ValueError):
    """A projector pair is not complete or not orthogonal."""


class DegenerateInput(QCorrError, ValueError):
    """Every measurement outcome has vanishing probability."""


class ParamOutOfRange(QCorrError, ValueError):
    """A dynamical parameter lies outside its allowed range."""


class StateInvariantViolated(QCorrError, RuntimeError):
    """The integrator produced a state that is no longer a density matrix."""


class NonPositiveData(QCorrError, ValueError):
    """A log-linear fit was asked to take the log of non-positive values."""
