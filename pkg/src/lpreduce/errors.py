"""Exception types raised across the package."""


class LpReduceError(Exception):
    """Base class for all package errors."""


class InvalidParameter(LpReduceError, ValueError):
    pass


class DimensionMismatch(LpReduceError, ValueError):
    pass


class NonProbabilityWeights(LpReduceError, ValueError):
    pass


class NonFiniteValue(LpReduceError, ValueError):
    pass


class IndexOutOfRange(LpReduceError, IndexError):
    pass


class AllZeroPoints(LpReduceError, ValueError):
    """Every point is the zero function, so no change of measure exists."""


class WrongExponent(InvalidParameter):
    pass


class NonUniformWeights(InvalidParameter):
    pass


class ExponentTwo(InvalidParameter):
    """The linear lower bound is vacuous at p = 2."""


class BadN(InvalidParameter):
    pass


class RetriesExhausted(LpReduceError, RuntimeError):
    """Random sampling never reached the requested error.

    ``best`` holds the best :class:`~lpreduce.sampler.SampleResult` seen;
    ``embedding`` is filled in by :func:`lpreduce.embed.reduce`.
    """

    def __init__(self, message, best=None, embedding=None):
        super().__init__(message)
        self.best = best
        self.embedding = embedding


class GuaranteeViolated(LpReduceError, RuntimeError):
    """Greedy sampling at the worst-case dimension missed the target error."""

    def __init__(self, message, embedding=None):
        super().__init__(message)
        self.embedding = embedding


class ModuliViolated(LpReduceError, ValueError):
    """A linear map does not satisfy the moduli on some pair of points."""

    def __init__(self, message, pair=None, value=None):
        super().__init__(message)
        self.pair = pair
        self.value = value
