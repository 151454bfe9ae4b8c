"""Exception types shared across the package."""


class CataloccError(Exception):
    """Base class for all catalocc errors."""


class NotNormalized(CataloccError):
    """Coefficient vector does not sum to 1 within the normalization slack."""


class NegativeEntry(CataloccError):
    """Coefficient below the negative clamping slack."""


class TargetTooSmall(CataloccError):
    """Requested padded length is shorter than the vector."""


class DomainError(CataloccError):
    """Inputs are outside the domain an operation is defined on."""


class DegenerateTarget(CataloccError):
    """Target state has a zero second coefficient, so the minimal-residual
    formulas for two-level catalysts are undefined."""


class NotACatalyst(CataloccError):
    """The (chi, chi') pair does not make the assisted transformation feasible."""


class GenerationExhausted(CataloccError):
    """Rejection sampling hit its budget before producing enough pairs."""
