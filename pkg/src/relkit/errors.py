"""Exception hierarchy shared by every relkit module."""


class RelkitError(Exception):
    """Base class for all relkit errors."""


class InvalidInput(RelkitError, ValueError):
    """Non-finite entries, bad shapes or out-of-range parameters."""


class DimensionMismatch(RelkitError, ValueError):
    """Operands live in spaces of incompatible dimension."""


class NotSingleValued(RelkitError):
    """A relation was used as an operator but has a nonzero multivalued part."""


class HypothesisViolated(RelkitError):
    """A check was asked to run outside the regime where its statement applies.

    The ``flags`` attribute names the hypotheses that failed.
    """

    def __init__(self, message, flags=()):
        super().__init__(message)
        self.flags = tuple(flags)


class NotInResolventSet(RelkitError):
    """The requested point lies in the spectrum."""


class NotInGammaSet(RelkitError):
    """The shift operator does not make both inverses bounded everywhere-defined operators."""
