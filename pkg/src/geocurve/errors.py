"""Exception hierarchy shared by all geocurve modules."""


class GeocurveError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(GeocurveError, ValueError):
    pass


class DomainError(GeocurveError, ValueError):
    """An inverse trigonometric/hyperbolic argument fell outside its domain."""


class DistanceZeroError(DomainError):
    pass


class AntipodalError(DomainError):
    pass


class InsufficientDataError(GeocurveError, ValueError):
    pass


class RegularityError(GeocurveError, ValueError):
    pass


class EmptyIntersectionError(GeocurveError, ValueError):
    pass


class NumericalInstabilityError(GeocurveError):
    pass


class _IndexedError(GeocurveError):
    def __init__(self, message: str, index: int):
        super().__init__(f"{message} (sample {index})")
        self.index = index


class UndefinedNormalError(_IndexedError):
    """Curvature fell below the threshold, so the principal normal is undefined."""


class VanishingTorsionError(_IndexedError):
    pass


class DegenerateDerivativeError(_IndexedError):
    """Derivative vectors became linearly dependent during Gram-Schmidt."""
