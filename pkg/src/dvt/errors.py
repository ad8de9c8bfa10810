"""Exception hierarchy shared by every module of the package."""


class DVTError(Exception):
    pass


class DuplicateCell(DVTError, ValueError):
    pass


class UnknownCell(DVTError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class CyclicOrder(DVTError, ValueError):
    pass


class BadParameter(DVTError, ValueError):
    pass


class NotASubset(DVTError, ValueError):
    pass


class NotInDomain(DVTError, ValueError):
    pass


class EmptyC(DVTError, ValueError):
    pass


class DomainMismatch(DVTError, ValueError):
    pass


class PartialMap(DVTError, ValueError):
    pass


class EmptyImage(DVTError, ValueError):
    pass


class InternalInvariant(DVTError, AssertionError):
    """Raised when a computed object contradicts a proven set-theoretic fact."""


class PreconditionViolated(DVTError, ValueError):
    def __init__(self, clause, message):
        super().__init__(f"precondition ({clause}) violated: {message}")
        self.clause = clause


class GateFailure(DVTError):
    """An open component whose boundary splits across both absorbing sets.

    This is an answer, not a crash: the space lacks the boundary
    connectedness property and ``witness`` shows where.
    """

    def __init__(self, witness, boundary):
        super().__init__(
            f"component {sorted(witness.ids())} has disconnected boundary "
            f"{sorted(boundary.ids())}")
        self.witness = witness
        self.boundary = boundary


class NotARetraction(DVTError, ValueError):
    pass


class FPPUndecidable(DVTError):
    pass


class TooLarge(DVTError):
    pass


class CertificateInvalid(DVTError, ValueError):
    pass


class ParseError(DVTError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnknownExample(DVTError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class NonClosedC(UserWarning):
    """C is not closed; the topological statements will not apply."""
