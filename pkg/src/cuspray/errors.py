"""Typed error hierarchy shared by all modules."""


class CuspRayError(Exception):
    """Base class for all library errors."""


class AmbiguousClassification(CuspRayError):
    """|trace| - 2 lies inside the tracked error band; cannot classify."""


class InvalidDomain(CuspRayError):
    """A fundamental-domain record is structurally inconsistent."""


class ParseError(CuspRayError):
    """A config or word string could not be parsed."""


class CuspidalBoundary(CuspRayError):
    """A boundary point sits on an arc endpoint (an ideal vertex)."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class InadmissibleWord(CuspRayError):
    """A letter sequence violates the no-backtracking condition."""


class PoleProximity(CuspRayError):
    """An arc touches the pole of the circle-to-line transport."""


class DoesNotMeetDomain(CuspRayError):
    """A geodesic misses the fundamental polygon."""


class EventuallyCuspidal(CuspRayError):
    """A cuspidal run exceeded the configured cap."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class UnboundedDisc(CuspRayError):
    """A polygon side is a diameter, so its supporting disc is unbounded."""


class PreconditionFailed(CuspRayError):
    """A documented operation precondition does not hold."""

    def __init__(self, which: str, message: str = ""):
        super().__init__(message or which)
        self.which = which


class HoleBudgetExhausted(CuspRayError):
    """The hole stream ended before the solver reached its tolerance."""


class TargetOutOfRange(CuspRayError):
    """The requested value lies outside the attainable range."""


class StableGapNotSatisfied(CuspRayError):
    """The Cantor set fails the stable gap condition at the requested depth."""


class BelowThreshold(CuspRayError):
    """The requested value lies below the computed ray threshold."""


class BlockTooLong(CuspRayError):
    """A cuspidal block exceeds the allowed length bound."""

    def __init__(self, message: str, block_index: int | None = None):
        super().__init__(message)
        self.block_index = block_index


class BoundViolated(CuspRayError):
    """A sampled quantity exceeded its certified bound (bad certificate or bug)."""


class CertificateTooWeak(CuspRayError):
    """A Lipschitz certificate does not meet the perturbation threshold."""


class LipConditionFailed(CuspRayError):
    """The Lipschitz/gap compatibility inequality fails."""


class BelowMargulis(CuspRayError):
    """A height estimate sits below the Margulis height; formula not asserted."""
