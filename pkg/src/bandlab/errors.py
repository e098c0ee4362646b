"""Exception hierarchy.

Parameter and configuration problems derive from :class:`ValueError`;
failures of a running integration derive from :class:`NumericalFailure`
so callers (the CLI in particular) can map them to distinct exit codes.
"""


class BandlabError(Exception):
    """Base class for all errors raised by bandlab."""


class NonPositiveParameter(BandlabError, ValueError):
    def __init__(self, name, value):
        self.name = name
        self.value = value
        super().__init__(f"parameter {name!r} must be strictly positive and finite, got {value!r}")


class ConstraintViolation(BandlabError, ValueError):
    """A model-specific constraint (e.g. d > 1 for unlimited substrate) fails."""


class DegenerateCrowd(BandlabError, ValueError):
    """alpha = gamma*tau - beta vanishes; the crowd-free system applies instead."""


class UnsupportedKind(BandlabError, ValueError):
    """The requested operation has no meaning for this model kind."""


class GridTooCoarse(BandlabError, ValueError):
    pass


class ResolutionError(BandlabError, ValueError):
    """Jump kernel narrower than the grid can resolve."""


class GridMismatch(BandlabError, ValueError):
    pass


class NoCrossing(BandlabError, ValueError):
    pass


class DegenerateInput(BandlabError, ValueError):
    pass


class NumericalFailure(BandlabError, RuntimeError):
    """Raised when a time integration breaks down.

    ``t`` holds the simulation time of the last good state when known.
    """

    def __init__(self, message, t=None):
        self.t = t
        if t is not None:
            message = f"{message} (at t={t:.17g} h)"
        super().__init__(message)


class StabilityViolation(NumericalFailure):
    pass


class NegativityBreach(NumericalFailure):
    pass
