"""Exception types shared across the package."""


class DismantleError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(DismantleError):
    """Malformed input: schema violation or a broken precondition."""


class UnknownVertexError(InvalidInput):
    """A vertex id that is not part of the graph under consideration."""


class CapExceededError(DismantleError):
    """A configured size or enumeration cap was exceeded."""


class NotAnAutomorphismError(InvalidInput):
    """A permutation that fails to preserve adjacency."""


class DisconnectedGraphError(InvalidInput):
    """Operation requires a connected graph; input has several components."""


class NotATreeError(InvalidInput):
    """Operation requires a tree."""


class NotDominatedError(InvalidInput):
    """The designated vertex is not dominated."""


class InvalidTraceError(InvalidInput):
    """A dismantling trace whose order is not a permutation of the vertex set."""


class NotDismantlableError(DismantleError):
    """Precondition failure: the graph admits no dismantling order."""


class ConvexityError(DismantleError):
    """A vertex set that is not convex for the given projection."""


class ExposureError(DismantleError):
    """No exposed vertex exists in some set: the exposure axiom is violated.

    Carries the offending set in ``stuck_at``.
    """

    def __init__(self, message, stuck_at=frozenset()):
        super().__init__(message)
        self.stuck_at = frozenset(stuck_at)


class HypothesisError(DismantleError):
    """An explicit hypothesis check of a pipeline failed; the witness is in the message."""


class ClaimCheckError(DismantleError):
    """Domination claim preconditions violated, or the claim itself failed."""


class VerificationBugError(DismantleError):
    """An internal re-verification failed.

    This is never expected on valid inputs; an instance of this error is a
    counterexample candidate and should be investigated, not swallowed.
    """
