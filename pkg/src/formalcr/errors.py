"""Exception hierarchy.  CLI exit codes are keyed off these classes."""


class FormalCRError(Exception):
    """Base class for every error raised by the package."""


class StructureError(FormalCRError):
    """Operands live in different variable spaces or at different caps."""


class PreconditionError(FormalCRError):
    """An operation was called outside its domain of definition."""


class NotAUnitError(PreconditionError):
    """Series inversion requested for a series with zero constant term."""


class InsufficientCapError(FormalCRError):
    """The truncation degree is too small to certify the requested result."""


class InputError(FormalCRError):
    """Malformed or inconsistent user input (files, polynomial strings)."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class ParseError(InputError):
    """A polynomial string could not be parsed."""


class BasePointError(InputError):
    """A defining function does not vanish at the origin."""


class NotGenericError(InputError):
    """The defining differentials are dependent at the origin."""


class RealityError(InputError):
    """The supplied defining system is not real valued."""


class DegenerateChartError(FormalCRError):
    """No coordinate split makes the transversal block of the Jacobian invertible."""


class DegenerateMapError(FormalCRError):
    """The determinant D of a formal map vanishes identically on the complexification."""


class ConsistencyError(FormalCRError):
    """Two computations that must agree did not."""
