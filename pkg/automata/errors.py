"""
Error types for HOObs
"""

from typing import Optional


class HoobsError(Exception):
    """Base class for all HOObs errors"""


class ValidationError(HoobsError, ValueError):
    """Input does not satisfy the preconditions of an operation"""


class ParseError(ValidationError):
    """Predicate text could not be parsed"""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class SchemaError(ValidationError):
    """Scenario document violates the JSON schema"""

    def __init__(self, message: str, pointer: str = ""):
        self.pointer = pointer or "/"
        super().__init__(f"{self.pointer}: {message}")


class DanglingReferenceError(ValidationError):
    """A scenario name does not resolve"""


class DuplicateIdError(ValidationError):
    """A scenario declares the same identifier twice"""


class StructuralError(HoobsError):
    """A construction met an input shape it cannot handle"""


class NotGeneratedError(HoobsError, LookupError):
    """The label sequence is not generated by the system"""


class ResourceError(HoobsError):
    """A size guard was exceeded"""


class StateCapExceeded(ResourceError):
    """A construction produced more states than the configured cap"""

    def __init__(self, what: str, cap: int):
        self.cap = cap
        super().__init__(f"{what} exceeded the state cap of {cap}")
