from __future__ import annotations


class TcovError(RuntimeError):
    """Base class for every error raised by the cover toolkit."""

    exit_code: int = 1


# --------------------------------------------------------------------- #
# Graph structure
# --------------------------------------------------------------------- #
class InvalidInvolutionError(TcovError):
    """Raised when the involution table does not square to the identity."""


class InvalidRootError(TcovError):
    """Raised when the root table is not an idempotent map commuting with the involution."""


class FixedPointMismatchError(TcovError):
    """Raised when the fixed points of the involution differ from the vertex set."""


class NegativeGenusError(TcovError):
    """Raised when a vertex is assigned a negative genus."""


class DisconnectedGraphError(TcovError):
    """Raised when an operation needs a connected graph."""


class UnknownEdgeError(TcovError):
    """Raised when an edge index is not part of the graph."""


class UnknownVertexError(TcovError):
    """Raised when a vertex cell is not part of the graph."""


# --------------------------------------------------------------------- #
# Covers
# --------------------------------------------------------------------- #
class DilatedVertexSwitchError(TcovError):
    """Raised when switching is requested at a dilated vertex."""


class PrimeMismatchError(TcovError):
    """Raised when two covers over different primes are compared."""


class WalkThroughDilatedCellError(TcovError):
    """Raised when an ascent is requested for a walk touching dilated cells."""


class OpenWalkError(TcovError):
    """Raised when consecutive half-edges of a walk do not meet."""


class DilatedCoverError(TcovError):
    """Raised when an operation is only defined for free covers."""


class InvalidCoverError(TcovError):
    """Raised when cover data violates the cover conditions and a valid cover is required."""

    def __init__(self, violations: list[str]) -> None:
        super().__init__("invalid cover: " + "; ".join(violations))
        self.violations = violations


# --------------------------------------------------------------------- #
# Complex and loci
# --------------------------------------------------------------------- #
class NotInjectiveError(TcovError):
    """Raised when a face map is given a non-injective label map."""


class MissingFaceError(TcovError):
    """Raised when a face of a census cell is absent from the census."""


class UnknownCellError(TcovError):
    """Raised when a cell id does not belong to the complex."""


class AssumptionViolatedError(TcovError):
    """Raised when the lower bridge assumption fails for an articulation count."""


# --------------------------------------------------------------------- #
# Numbers
# --------------------------------------------------------------------- #
class NotPrimeError(TcovError):
    """Raised when an order that must be prime is not."""

    def __init__(self, value: int) -> None:
        super().__init__(f"{value} is not a prime number")
        self.value = value


class PrimeTooSmallError(TcovError):
    """Raised when a count is only defined for primes p >= 5."""


class NotDistinctError(TcovError):
    """Raised when residues that must be pairwise distinct are not."""


class ResourceBudgetExceededError(TcovError):
    """Raised when enumeration exceeds the configured cell or time cap."""

    exit_code = 2

    def __init__(self, resource: str, limit: float) -> None:
        super().__init__(f"{resource} budget of {limit} exceeded")
        self.resource = resource
        self.limit = limit


class InconsistentEulerError(TcovError):
    """Raised when the chain-level and homology-level Euler characteristics differ."""

    exit_code = 3


class UnclassifiableCellError(TcovError):
    """Raised when a maximal genus-2 cell fits none of the known families."""

    exit_code = 3


class AscentLawError(TcovError):
    """Raised when two spiral articulation points of one cover admit no common ascent."""

    exit_code = 3
