"""Exception types shared across the package.

Each error corresponds to a violated precondition or a failed operation
contract; they all derive from :class:`MaxcutBenchError` so callers can
catch package errors in one clause.
"""


class MaxcutBenchError(Exception):
    """Base class for all package-specific errors."""


class OddNodeCount(MaxcutBenchError):
    """3-regular graphs need an even node count (handshake lemma)."""


class GenerationExhausted(MaxcutBenchError):
    """Rejection sampling exceeded the attempt cap."""


class LengthMismatch(MaxcutBenchError):
    """A vector argument has the wrong length for the target object."""


class IndexOutOfRange(MaxcutBenchError):
    """A variable or qubit index is outside the valid range."""


class ConvergenceFailure(MaxcutBenchError):
    """An iterative solver failed to reach its tolerance within the cap."""


class SizeLimitExceeded(MaxcutBenchError):
    """Exhaustive enumeration requested above the configured size limit."""


class ParamLengthMismatch(LengthMismatch):
    """Parameter vector length does not match the circuit layout."""


class BadRadii(MaxcutBenchError):
    """Trust-region radii must satisfy rho_begin > rho_end > 0."""


class SessionConverged(MaxcutBenchError):
    """ask() was called on an optimizer session that already converged."""


class MismatchedTell(MaxcutBenchError):
    """tell() received a point that is not the most recent ask."""


class SessionProtocolError(MaxcutBenchError):
    """ask/tell alternation was violated."""


class EmptySample(MaxcutBenchError):
    """An aggregate was requested over an empty sample."""


class BadGamma(MaxcutBenchError):
    """CVaR fraction must lie in (0, 1]."""


class ZeroReference(MaxcutBenchError):
    """Approximation ratios need a strictly positive reference value."""


class TooFewValues(MaxcutBenchError):
    """SEM needs at least two values."""


class BadCounts(MaxcutBenchError):
    """Binomial counts must satisfy 0 <= successes <= trials, trials >= 1."""


class NoExactReference(MaxcutBenchError):
    """Success probability needs an exact optimum as reference."""


class EmptySummary(MaxcutBenchError):
    """max_advantage needs a non-empty summary curve."""


class EmptyRange(MaxcutBenchError):
    """Binning range must have positive width."""


class ConfigError(MaxcutBenchError):
    """Malformed experiment configuration."""


class IncompleteExperiment(MaxcutBenchError):
    """Analysis requested on an experiment directory with missing pieces."""
