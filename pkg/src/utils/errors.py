"""
Exception hierarchy for loopforge.

Mathematical failures are never raised: they are reported as suite items with
witnesses. The classes below cover bad input, refused constructions and size
gates, and the CLI maps all of them to exit status 2.
"""

from typing import Optional


class LoopforgeError(Exception):
    """Base class for every error raised by loopforge."""


class UsageError(LoopforgeError, ValueError):
    """An operation was called with arguments it cannot accept."""


class UnknownNameError(LoopforgeError, KeyError):
    """A preset, suite, theorem or map name is not known."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ''


class SpecParseError(LoopforgeError, ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class RingValidationError(LoopforgeError, ValueError):
    pass


class LoopFormatError(LoopforgeError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None,
                 row: Optional[int] = None, column: Optional[int] = None):
        prefix = f"line {line}: " if line is not None else ''
        super().__init__(f"{prefix}{message}")
        self.line = line
        self.row = row
        self.column = column


class ElementError(LoopforgeError, IndexError):
    """An element index outside [0, n)."""


class InverseError(LoopforgeError, ArithmeticError):
    pass


class SizeGateError(LoopforgeError):
    """An analysis was refused because the input exceeds a configured cap."""


class ConstructionRefused(LoopforgeError):
    pass


class NotDivisibleError(ConstructionRefused):
    pass


class NotNormalError(LoopforgeError):
    """A quotient was requested by a subloop that is not normal."""
