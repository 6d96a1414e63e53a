"""Exception hierarchy.  Everything a user can trigger with bad input is a
:class:`DomainError`; the CLI maps those to exit status 1."""


class DomainError(ValueError):
    pass


class GroupError(DomainError):
    pass


class EnumerationCapExceeded(DomainError):
    pass


class UnsupportedError(DomainError):
    pass


class GroupoidError(DomainError):
    pass


class CocycleError(DomainError):
    """A cochain fails a cocycle or compatibility condition.

    ``witness`` is the first violating simplex (object, morphism, or pair of
    morphisms), when one exists.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IntegralityError(DomainError):
    pass


class InternalError(RuntimeError):
    """A postcondition the code guarantees did not hold."""
