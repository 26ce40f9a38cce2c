"""Exception hierarchy shared across the package."""


class RankOneError(Exception):
    """Base class for every error raised by :mod:`rankone`."""


class ZeroWeight(RankOneError):
    """A Larson-Wogen weight a_k vanished for some k >= 1."""


class TruncationTooShallow(RankOneError):
    """The truncation depth is too small for the requested check."""


class DisconnectedSourceSink(RankOneError):
    """No finite path joins the source and the sink."""


class FrontierEmpty(RankOneError):
    """A layer produced no forward edges before the requested depth."""

    def __init__(self, message, depth=None):
        super().__init__(message)
        self.depth = depth


class FrontierReached(RankOneError):
    """Layering ran into a non-preserving (truncation frontier) vertex."""

    def __init__(self, message, depth=None):
        super().__init__(message)
        self.depth = depth


class RelaxationStuck(RankOneError):
    """No augmenting path left for an active vertex.

    Cannot happen when the preconditions of the layered construction hold,
    so seeing it means the input flow was not what the caller claimed.
    """


class WitnessExhausted(RankOneError):
    """The truncation is too shallow to certify a finite-length ray."""

    def __init__(self, message, depth=0):
        super().__init__(message)
        self.depth = depth


class InconsistentOperator(RankOneError):
    """The operator has entries outside the support allowed by the graph."""


class NonAdjacentRay(RankOneError):
    """Two consecutive ray vertices are not joined by an edge."""


class UnsupportedTail(RankOneError):
    """Ray tails cannot be reduced to the analytic catalog."""


class CertificateFailure(RankOneError):
    """An end-to-end certificate step exceeded its tolerance."""


class SpecParseError(RankOneError):
    """A JSON spec file could not be interpreted."""


class UnsupportedFamily(RankOneError):
    """The spec names a system family this package does not know."""


class InstanceTooLarge(RankOneError):
    """The brute-force oracle refuses instances beyond its size limit."""
