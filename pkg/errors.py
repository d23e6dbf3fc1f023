# errors.py
"""
Exception hierarchy for soficlab.

All library errors derive from SoficLabError so the CLI can map them onto
its exit-code contract:
    1  MalformedPresentation / usage problems
    2  ResourceCapExceeded
    3  TheoremInconsistency
"""

from typing import Any, Optional


class SoficLabError(Exception):
    """Base class for every error raised by soficlab."""


class MalformedPresentation(SoficLabError, ValueError):
    """
    An input document could not be turned into a valid object.

    `location` is a human-readable position: "line 3, column 7" for JSON
    syntax errors, or a JSON path such as "edges[4].label" for schema errors.
    """

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        if location:
            message = f"{message} (at {location})"
        super().__init__(message)


class EmptyShift(SoficLabError):
    """Essential trimming removed every state: the presentation presents the empty shift."""


class ResourceCapExceeded(SoficLabError):
    """A configured resource cap would be exceeded."""

    def __init__(self, cap: str, limit: int, requested: Optional[int] = None):
        self.cap = cap
        self.limit = limit
        self.requested = requested
        detail = f"{cap} cap of {limit} exceeded"
        if requested is not None:
            detail += f" (needed {requested})"
        super().__init__(detail)


class NotInLanguage(SoficLabError, ValueError):
    """A word that must belong to B(X) does not."""


class NotATmc(SoficLabError):
    """An operation that needs a topological Markov chain got something else."""


class NotNonWanderingTmc(SoficLabError):
    """A TMC has edges between strongly connected components."""


class PreconditionViolated(SoficLabError, ValueError):
    """Arguments do not satisfy an operation's documented precondition."""


class InvalidWeights(SoficLabError, ValueError):
    """Chain weights are negative, zero on an allowed block, or sit on a forbidden block."""


class ReducibleChain(SoficLabError):
    """The stationary vector is not unique; component weights are required."""


class NullConditioning(SoficLabError, ZeroDivisionError):
    """A conditional probability was requested given an event of probability zero."""


class TheoremInconsistency(SoficLabError):
    """
    Independently computed verdicts disagree where a theorem says they must agree.

    This always indicates an implementation fault. `witnesses` carries every
    intermediate result needed to reproduce the disagreement.
    """

    def __init__(self, message: str, witnesses: Optional[dict[str, Any]] = None):
        self.witnesses = witnesses or {}
        super().__init__(message)
