"""Exception types shared across the package."""


class CuLabError(Exception):
    """Base class for all library errors."""


class UnboundedRank(CuLabError):
    """A rank function attains ``INF`` where a bounded one is required."""


class NotCompactlyContained(CuLabError):
    pass


class NoGap(CuLabError):
    """Raised when a strict gap is requested below a compact element."""


class NotIncreasing(CuLabError):
    pass


class NotAtomic(CuLabError):
    pass


class TooManyAtoms(CuLabError):
    pass


class NotFaithful(CuLabError):
    """A vertex measure is not faithful where faithfulness is required."""


class NoIndex(CuLabError):
    """A finite chain prefix was exhausted before dominating the target."""


class NoConvergence(CuLabError):
    pass


class RescaleNeeded(CuLabError):
    """Spectrum falls outside [0, 1]."""


class DimensionMismatch(CuLabError):
    pass
