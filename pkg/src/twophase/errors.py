"""Exception hierarchy shared by every module."""


class TwoPhaseError(Exception):
    """Base class for all errors raised by the package."""


class RefinementNeeded(TwoPhaseError):
    """Spectral tail above threshold: the data is under-resolved."""

    def __init__(self, message, tail_ratio=None):
        super().__init__(message)
        self.tail_ratio = tail_ratio


class SelfIntersectionError(TwoPhaseError):
    """A curve touches itself (chord-arc constant collapsed to zero)."""


class TubularMapError(TwoPhaseError):
    """The normal-coordinate map folds or overlaps itself.

    ``collisions`` holds ``((s, r), (s2, r2))`` pairs of colliding parameters.
    """

    def __init__(self, message, collisions=(), min_jacobian=None):
        super().__init__(message)
        self.collisions = list(collisions)
        self.min_jacobian = min_jacobian


class DomainError(TwoPhaseError):
    """Evaluation point or interface outside the admissible fluid layer."""


class ConvergenceError(TwoPhaseError):
    """An iterative solve failed to reach its tolerance."""

    def __init__(self, message, history=()):
        super().__init__(message)
        self.history = list(history)


class ResolutionError(TwoPhaseError):
    """Time stepping halted: spectral tail blew up or depth margin lost.

    ``state`` carries the last valid state so callers can keep partial output.
    """

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class UnsupportedError(TwoPhaseError):
    """Operation requested for a configuration it is not defined on."""


class CriterionInapplicable(TwoPhaseError):
    """A stability criterion was evaluated outside its hypotheses."""


class ConfigError(TwoPhaseError):
    """Scenario file could not be parsed or failed validation."""
