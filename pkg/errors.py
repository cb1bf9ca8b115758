"""
Error Hierarchy
===============

Exceptions raised by the chip-firing library. Each carries the exit code the
command-line runner reports when it surfaces the error.
"""


class ChipFiringError(ValueError):
    """Base class for every library error"""
    exit_code = 1


# Domain negative / invalid input (exit 1)

class SingularMatrix(ChipFiringError):
    pass


class SingularL(SingularMatrix):
    pass


class NotAnMMatrix(ChipFiringError):
    pass


class InvalidConfiguration(ChipFiringError):
    pass


class CannotFire(ChipFiringError):
    """Raised when a site is not ready; `coordinate` is the violated entry of x - M e_i"""

    def __init__(self, message: str, coordinate: int = None):
        super().__init__(message)
        self.coordinate = coordinate


class NegativeScript(ChipFiringError):
    pass


class IndexOutOfRange(ChipFiringError):
    pass


class DisconnectedFromSink(ChipFiringError):
    pass


# Parse / schema errors (exit 2)

class ParseError(ChipFiringError):
    exit_code = 2


class DimensionMismatch(ParseError):
    pass


class NonSquare(ParseError):
    pass


class NotASpanningTree(ParseError):
    pass


class EmptyComplex(ParseError):
    pass


# Caps exceeded (exit 3)

class CapExceeded(ChipFiringError):
    exit_code = 3


class BoxTooLarge(CapExceeded):
    pass


class BallTooLarge(CapExceeded):
    pass


class DeterminantExceedsCap(CapExceeded):
    pass


class IterationCapExceeded(CapExceeded):
    pass
