"""Exception hierarchy shared by all modules."""


class RelZetaError(Exception):
    """Base class for library errors."""


class PoleError(RelZetaError, ValueError):
    """Function evaluated at (or numerically on top of) a pole."""


class EigenvaluePoleError(PoleError):
    """The relative resolvent trace has a pole here: an eigenvalue of the perturbed operator."""


class DomainError(RelZetaError, ValueError):
    """Argument outside the mathematical domain of the operation."""


class BoundStateError(DomainError):
    """Parameters lie in the region where the perturbed operator has a negative eigenvalue."""

    def __init__(self, message, energy=None):
        super().__init__(message)
        self.energy = energy


class ConvergenceError(RelZetaError, ArithmeticError):
    """Numerical procedure did not reach its tolerance.

    ``estimate`` and ``error`` carry the best value obtained.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class DivergenceError(ConvergenceError):
    """A semi-infinite integral does not decay fast enough to converge."""

    def __init__(self, message, exponent=None, estimate=None, error=None):
        super().__init__(message, estimate, error)
        self.exponent = exponent


class BranchError(RelZetaError, ArithmeticError):
    """Inconsistent values across a branch cut (usually a branch-handling bug)."""


class BracketError(ConvergenceError):
    """Root bracketing failed."""


class IllConditionedError(RelZetaError, ArithmeticError):
    """Least-squares system too ill conditioned to trust."""
