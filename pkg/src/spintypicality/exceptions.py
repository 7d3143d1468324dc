"""Exception hierarchy shared by all modules.

Every error derives from ``ValueError`` (bad input) or ``ArithmeticError``
(numerical breakdown) so callers can catch broadly, and from
``SpinTypicalityError`` so the CLI can map them to exit status 1.
"""


class SpinTypicalityError(Exception):
    """Base class for all package errors."""


class DomainError(SpinTypicalityError, ValueError):
    """An argument lies outside the domain of the function."""


class CapacityError(SpinTypicalityError, ValueError):
    """The request would materialize more basis states than allowed."""


class ValidityError(SpinTypicalityError, ValueError):
    """An approximate formula is evaluated outside its range of validity."""


class EmptyActiveSpaceError(SpinTypicalityError, ValueError):
    """The energy cutoff lies below the ground state."""


class DimensionError(SpinTypicalityError, ValueError):
    """A population vector does not match the basis it is paired with."""


class SingularityError(SpinTypicalityError, ArithmeticError):
    """The quantity diverges at the requested point.

    ``partial`` optionally carries whatever finite part of the result is
    still meaningful at the singular point.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class EvaluationError(SpinTypicalityError, ArithmeticError):
    """A user-supplied function returned a non-finite value."""


class NumericalError(SpinTypicalityError, ArithmeticError):
    """A numerical routine (quadrature, cross-check) failed."""
