"""Exception types shared across the package."""

from __future__ import annotations


class ReebflowError(Exception):
    """Base class for all errors raised by this package."""


class GraphInvalid(ReebflowError):
    """A graph failed validation; carries the list of violations."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        lines = ", ".join(str(v) for v in self.violations)
        super().__init__(f"invalid Reeb graph: {lines}")


class InvalidParams(ReebflowError):
    """A parameter is outside its documented range."""


class NegativeEpsilon(InvalidParams):
    pass


class NegativeTau(InvalidParams):
    pass


class TauExceedsEpsilon(InvalidParams):
    pass


class BandOutOfRange(InvalidParams):
    pass


class ParamsOutOfRange(InvalidParams):
    """Flow-map parameters violate the existence constraints for that map kind."""


class SlopePairOutOfRange(InvalidParams):
    """Slope pair outside the range admitted by interleaving transfer."""


class MorphismError(ReebflowError):
    """A map between Reeb graphs failed verification; carries the violations."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        lines = ", ".join(str(v) for v in self.violations)
        super().__init__(f"invalid morphism: {lines}")


class DomainMismatch(ReebflowError):
    """Two maps were combined whose graphs do not fit together."""


class NotInTruncation(ReebflowError):
    """A point of the original graph does not survive the requested truncation."""


class EmptyTruncatedDomain(ReebflowError):
    """Restricting a map to an empty truncation is not defined."""


class DocumentError(ReebflowError):
    """A graph document failed to parse."""
