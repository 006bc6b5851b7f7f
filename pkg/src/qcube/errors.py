"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the documented domain of an operation."""


class DegenerateDecompositionError(DomainError):
    """Subcube decomposition requested with floor(alpha * n) = 0."""


class DenseSizeError(DomainError):
    """Dense spectral computation refused: 2**n exceeds the dense cap."""


class InvalidCertificateError(DomainError):
    """Vertex family violates the pairwise distance-> 2 requirement."""


class ThresholdUndefinedError(DomainError):
    """A partition threshold involves log log of a quantity <= e."""

    def __init__(self, quantity: str, message: str | None = None):
        self.quantity = quantity
        super().__init__(message or f"threshold undefined: log log of {quantity!r} is not usable")


class NotApplicableError(DomainError):
    """Operation only defined for a parameter regime the input is not in."""


class AmbiguousFamilyError(DomainError):
    """Regime classification needs a declared probability family, not a bare literal."""


class ConfigError(ValueError):
    """Experiment configuration file is missing or malformed."""
