"""Exception hierarchy shared by every module of the package."""


class A2Error(Exception):
    """Base class for all errors raised by a2ktheory."""


class NotPrimePower(A2Error, ValueError):
    pass


class UnsupportedOrder(A2Error, ValueError):
    """Prime power without a tabulated irreducible polynomial."""


class NotAProjectivePlane(A2Error, ValueError):
    def __init__(self, axiom, witness=()):
        self.axiom = axiom
        self.witness = tuple(witness)
        msg = axiom if not self.witness else f"{axiom} (witness {self.witness})"
        super().__init__(msg)


class EqualPoints(A2Error, ValueError):
    pass


class EqualLines(A2Error, ValueError):
    pass


class ParseError(A2Error, ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ValidationError(A2Error, ValueError):
    """Raised when a triangle presentation violates one of its axioms."""

    def __init__(self, report):
        self.report = report
        super().__init__(report.summary())


class Interrupted(A2Error):
    """Search was cancelled from outside; results already yielded stay valid."""


class TransitionInvariantError(A2Error, AssertionError):
    pass


class InternalRankMismatch(A2Error, AssertionError):
    pass


class DimensionMismatch(A2Error, ValueError):
    pass


class NoTorsionFreeGroup(A2Error, ValueError):
    pass


class NotTorsionFree(A2Error, ValueError):
    pass
