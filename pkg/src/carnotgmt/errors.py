"""Exception hierarchy shared across the package."""


class CarnotGMTError(Exception):
    """Base class for all errors raised by this package."""


class StructureError(CarnotGMTError):
    """Shape/dimension mismatch in algebra, point, or basis data."""


class UnsupportedStepError(CarnotGMTError):
    """Group operation requested for step > 3.

    The closed-form BCH product implemented here is exact only up to step 3;
    supporting higher step means adding the degree-4+ BCH terms in
    ``StratifiedAlgebra.product``.
    """


class DomainError(CarnotGMTError):
    """Argument outside the documented domain (e.g. lambda <= 0, empty set)."""


class CalibrationError(CarnotGMTError):
    """Norm calibration failed to reach a violation-free pass."""

    def __init__(self, msg, worst=None):
        super().__init__(msg)
        self.worst = worst


class SplittingError(CarnotGMTError):
    """Singular layer system while solving splitting projections."""


class SamplingError(CarnotGMTError):
    """A sampling-based estimate received no usable samples."""


class PreconditionError(CarnotGMTError):
    """A stated precondition of an operation does not hold."""


class InjectivityError(CarnotGMTError):
    """Graph extraction found two colliding base points.

    Under a correct cone certificate with alpha <= eps1 the base projection is
    injective, so a collision signals a bad c_split estimate.
    """


class EmptyTranslationError(CarnotGMTError):
    """Every sample was dropped while translating an intrinsic graph."""


class ResolutionError(CarnotGMTError):
    """Lattice mesh too coarse (or too fine to materialize)."""


class FKToleranceError(CarnotGMTError):
    """LP solver failed to certify the requested tolerance."""

    def __init__(self, msg, best_primal=None, best_dual=None):
        super().__init__(msg)
        self.best_primal = best_primal
        self.best_dual = best_dual


class NetDensityError(CarnotGMTError):
    """Tubular cover left a point outside every tube."""


class AlgorithmInvariantError(CarnotGMTError):
    """A verified-by-construction property failed its exhaustive check."""


class ConfigError(CarnotGMTError):
    """Invalid scenario specification or unknown check name."""
