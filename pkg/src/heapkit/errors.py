"""Exception hierarchy for heapkit."""


class HeapkitError(Exception):
    """Base class; carries an optional witness for reports."""

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


class DisconnectedDiagram(HeapkitError):
    pass


class DimensionMismatch(HeapkitError):
    pass


class InvalidCartanMatrix(HeapkitError):
    pass


class NotFiniteType(HeapkitError):
    pass


class NotAffineType(HeapkitError):
    pass


class NotAnAutomorphism(HeapkitError):
    pass


class OrderNotTwo(HeapkitError):
    pass


class AdjacentOrbitViolation(HeapkitError):
    pass


class NotARoot(HeapkitError):
    pass


class DiagramMismatch(HeapkitError):
    pass


class MissingCoverData(HeapkitError):
    pass


class RankOutOfBounds(HeapkitError):
    pass


class FoldPreconditionViolated(HeapkitError):
    pass


class SearchBudgetExceeded(HeapkitError):
    def __init__(self, message="", witness=None, partial=None):
        super().__init__(message, witness)
        self.partial = partial or []


class NoFullHeap(HeapkitError):
    """Raised when asked for a full heap over a diagram that admits none."""


class InvalidCut(HeapkitError):
    pass


class NotConvex(HeapkitError):
    pass


class NotAPositiveRoot(HeapkitError):
    pass


class AmbiguousMatch(HeapkitError):
    pass


class NoConsistentEpsilon(HeapkitError):
    pass


class UnsupportedFormat(HeapkitError):
    pass


class NotAHeap(HeapkitError):
    pass
