"""Exception types shared across the package."""


class CarKmsError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(CarKmsError):
    pass


class NotHermitian(CarKmsError):
    pass


class NotUnitary(CarKmsError):
    pass


class NoConvergence(CarKmsError):
    pass


class DegenerateSpectrum(CarKmsError):
    """Raised when an inverse of (1 - e^{+-beta*lambda}) would blow up."""


class NotDominated(CarKmsError):
    pass


class NotGammaInvariant(CarKmsError):
    pass


class NotInTwistedCenter(CarKmsError):
    pass


class NotFaithful(CarKmsError):
    pass


class GradingNotInvariant(CarKmsError):
    pass


class CapExceeded(CarKmsError):
    pass


class IndexOutOfRange(CarKmsError):
    pass
