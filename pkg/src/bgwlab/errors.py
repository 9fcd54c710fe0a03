"""Exception types shared across the package."""


class BGWError(Exception):
    """Base class for all library errors."""


class InvalidPath(BGWError, ValueError):
    """Step sequence is not a valid Lukasiewicz path."""


class ShapeMismatch(BGWError, ValueError):
    """Decomposition parts have inconsistent lengths or totals."""


class NoInternalNode(BGWError, ValueError):
    pass


class BoundExceeded(BGWError, ValueError):
    """Enumeration size above the configured bound."""


class InfeasibleProfile(BGWError, ValueError):
    pass


class NonDivisible(BGWError, ValueError):
    pass


class EmptyConditioning(BGWError, ValueError):
    """The conditioning event has zero probability."""


class InadmissibleK(BGWError, ValueError):
    pass


class DegenerateSupport(BGWError, ValueError):
    pass


class SpecParseError(BGWError, ValueError):
    def __init__(self, text, position, reason):
        self.text = text
        self.position = position
        self.reason = reason
        super().__init__(f"cannot parse {text!r} at position {position}: {reason}")


class GaveUp(BGWError, RuntimeError):
    """Rejection sampler exhausted its attempt budget."""

    def __init__(self, tries):
        self.tries = tries
        super().__init__(f"no acceptance after {tries} attempts")
