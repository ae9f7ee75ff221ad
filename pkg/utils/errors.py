"""
Exception types raised by the hypocalc analysis modules.
"""


class HypocalcError(Exception):
    """Base class for every error raised by hypocalc."""


class SpecError(HypocalcError, ValueError):
    """Malformed system, field or configuration input."""


class IndexOutOfRange(HypocalcError, IndexError):
    """A coordinate index outside 1..n was requested."""


class NotClosed(HypocalcError):
    """The coefficient form has a nonzero commutator bracket."""


class WindowTooSmall(HypocalcError):
    """A frequency does not fit the requested window."""


class WindowOverflow(HypocalcError):
    """An operator would expand the t-window past the configured maximum."""


class Resonance(HypocalcError):
    """The small divisor vanishes exactly for this x-frequency."""

    def __init__(self, xi, message=None):
        self.xi = xi
        super().__init__(message or f"resonant x-frequency xi={xi}")


class DivisorTooSmall(HypocalcError):
    """The small divisor is nonzero but below the configured floor."""

    def __init__(self, xi, divisor, floor):
        self.xi = xi
        self.divisor = divisor
        self.floor = floor
        super().__init__(f"divisor {divisor:.3e} below floor {floor:.1e} at xi={xi}")


class WitnessInvalid(HypocalcError):
    """A witness entry fails its approximation inequality."""


class DepthTooSmall(HypocalcError):
    """Fewer than three witness entries could be certified."""


class InsufficientBands(HypocalcError):
    """A decay fit needs at least three populated dyadic bands."""


class HypothesisFailed(HypocalcError):
    """A hypothesis of the propagation check is not met.

    ``hypothesis`` is one of 'consistency', 'rhs' or 'base_point'.
    """

    def __init__(self, hypothesis, message):
        self.hypothesis = hypothesis
        super().__init__(f"{hypothesis}: {message}")


class InconsistentVerdict(HypocalcError):
    """Verdicts or numerical confirmations contradict each other."""


class NoConeFound(HypocalcError):
    """No cone |xi| <= c|tau| with rapid decay was found."""


class OutOfClass(HypocalcError):
    """A tabulated symbol violates its symbol-class seminorm bounds."""


class InclusionFailure(HypocalcError, AssertionError):
    """A microlocal exponent assertion failed."""

    def __init__(self, message, band=None):
        self.band = band
        super().__init__(message if band is None else f"{message} (band {band})")
