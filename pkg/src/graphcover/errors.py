"""Exception types shared across the package."""


class GraphCoverError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(GraphCoverError):
    """A file or JSON object does not match the expected schema."""


class InvalidGraphError(GraphCoverError):
    """An operation received a graph (or map) violating its invariants.

    Carries the violation list produced by the validators.
    """

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])


class NoCommonCoverError(GraphCoverError):
    """A construction was requested for a pair with no common covering."""


class CoveringError(GraphCoverError):
    """A map presented as a covering fails a covering property."""


class GroupCapError(GraphCoverError):
    """A permutation group would exceed the configured element cap."""
