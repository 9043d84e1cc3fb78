class MonomixError(Exception):
    """Base class for every error raised by the library."""


class DimensionMismatchError(MonomixError):
    pass


class RepresentationError(MonomixError):
    """The operation needs a different set or measure representation."""


class CapExceededError(MonomixError):
    """An exact computation would exceed a configured size cap."""


class ContractViolationError(MonomixError):
    """A precondition on the inputs does not hold (e.g. x0 outside A)."""


class SpecParseError(MonomixError):
    pass


class SamplingExhaustedError(MonomixError):
    def __init__(self, message: str, tries: int):
        super().__init__(message)
        self.tries = tries


class CertificateViolationError(MonomixError):
    """A verified bound was found to fail."""
