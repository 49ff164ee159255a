"""Exception hierarchy.

Everything raised on purpose derives from :class:`ThermoflowError`.  The CLI
maps :class:`ParseError` to exit status 2 and every other subclass to 1.
"""


class ThermoflowError(Exception):
    """Base class for all domain errors."""


class ValidationError(ThermoflowError):
    """An input object violates a structural invariant."""


class RejectAlphabetTooSmall(ValidationError):
    pass


class RejectDeadSymbol(ValidationError):
    pass


class RejectNotPrimitive(ValidationError):
    pass


class NotPositive(ValidationError):
    """A roof (or a would-be roof) is not strictly positive."""


class WordTooShort(ThermoflowError):
    pass


class MismatchedSft(ThermoflowError):
    pass


class NoConvergence(ThermoflowError):
    pass


class TooLarge(ThermoflowError):
    pass


class BracketFailure(ThermoflowError):
    pass


class NotInL(ThermoflowError):
    pass


class NotZeroPressure(ThermoflowError):
    pass


class DegenerateDelta(ThermoflowError):
    pass


class VerificationError(ThermoflowError):
    """A construction failed one of its own post-condition checks."""


class CannotSeparate(ThermoflowError):
    def __init__(self, message: str, achieved: int):
        super().__init__(message)
        self.achieved = achieved


class ParseError(ThermoflowError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason
