"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Operand shapes are incompatible with the operation."""


class DomainError(ValueError):
    """A parameter lies outside the range where the operation is defined."""


class CapabilityError(RuntimeError):
    """The instance exceeds the size an exhaustive routine accepts."""


class LopsidedError(ValueError):
    """A list of lengths cannot close into a polygon.

    ``index`` is the position of the entry that dominates the rest; for
    matrix routines ``column`` names the offending column.
    """

    def __init__(self, message, index=None, column=None):
        super().__init__(message)
        self.index = index
        self.column = column


class BoundInapplicable(ValueError):
    """A row block required by the patching bound has maximal phaseless rank."""

    def __init__(self, message, block=None):
        super().__init__(message)
        self.block = block


class WitnessInvalidError(ValueError):
    """A supplied witness does not match the matrix it is meant to certify."""


class ParseError(ValueError):
    """Malformed matrix, polytope or template text."""


class InvalidPolytopeError(ValueError):
    """Some vertex violates some facet inequality, or the dimensions disagree."""
