"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`AxleboxError`, so callers (and the CLI) can catch one base class.
Subclasses also inherit from the closest builtin so ``except ValueError``
keeps working for plain argument problems.
"""


class AxleboxError(Exception):
    """Base class for all package errors."""


class ParseError(AxleboxError, ValueError):
    """Malformed input file. ``line`` is 1-based, or None if not line-specific."""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


# regression
class EmptyTable(AxleboxError, ValueError):
    pass


class InsufficientRows(AxleboxError, ValueError):
    pass


class SingularDesign(AxleboxError, ArithmeticError):
    pass


class ZeroDistance(AxleboxError, ZeroDivisionError):
    pass


# kinematics
class NonDifferentiableShape(AxleboxError, ValueError):
    pass


class ZeroSectionLength(AxleboxError, ValueError):
    pass


# frequency domain / resonance
class ResonantSingularity(AxleboxError, ArithmeticError):
    """det(S) vanished: the undamped system is driven exactly at a natural frequency."""


class DegenerateParams(AxleboxError, ArithmeticError):
    pass


class InvalidRange(AxleboxError, ValueError):
    pass


# time domain
class StepTooLarge(AxleboxError, ValueError):
    pass


class NonFinite(AxleboxError, ArithmeticError):
    pass


class TooShort(AxleboxError, ValueError):
    pass


class DegenerateProbe(AxleboxError, ValueError):
    pass
