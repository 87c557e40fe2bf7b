"""Exception hierarchy shared by the algebra, geometry and solver modules."""

from typing import Any, Optional


class G2EinError(Exception):
    """Base class for all library errors."""


class ModelMismatchError(G2EinError, ValueError):
    """Operands use different scalar models (exact rational vs float)."""


class BasisMismatchError(G2EinError, ValueError):
    """Operands are expressed in different bases."""


class UnsupportedBasisError(G2EinError, ValueError):
    """No conversion is defined between the requested bases."""


class ZeroVectorError(G2EinError, ValueError):
    """Operation needs a nonzero vector."""


class InvalidTripleError(G2EinError, ValueError):
    """Triple violates the Stiefel constraints beyond tolerance."""


class NonNullError(G2EinError, ValueError):
    """Vector was expected to be null (q = 0)."""


class DegenerateInputError(G2EinError, ValueError):
    """Input does not have the nondegeneracy the operation needs."""


class DomainError(G2EinError, ValueError):
    """Argument lies outside the domain of the map (y <= 0, r <= 0, t <= 0, ...)."""


class LinearSolverError(G2EinError):
    """Sparse Jacobian solve broke down (singular or non-finite)."""


class ConvergenceError(G2EinError):
    """Newton iteration failed; the attached report carries the history."""

    def __init__(self, message: str, report: Optional[Any] = None):
        super().__init__(message)
        self.report = report


class ConfigError(G2EinError, ValueError):
    """Run configuration could not be loaded or validated."""
