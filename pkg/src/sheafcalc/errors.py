"""Exception hierarchy shared by all modules.

ValidationError maps to CLI exit code 2 (bad input / violated precondition),
DomainError to exit code 3 (well-formed input on which the requested value is
not defined, e.g. a filtration level too close to a spectral value).
"""


class CalcError(Exception):
    pass


class ValidationError(CalcError):
    """Input violates a documented invariant or precondition."""


class ConventionError(ValidationError):
    """Barcode is not in the interval-flavor family the operation needs."""


class TamarkinClassError(ValidationError):
    """Operation requires bars of type [a,b) or [a,oo)."""


class ConvolutionTypeError(ValidationError):
    """Interval-type combination outside the supported convolution table."""


class PlanError(ValidationError):
    """A matched bar pair admits no nonzero interval-module morphism."""


class DomainError(CalcError):
    pass


class PiComparisonError(DomainError):
    """Sign of q*pi + s undecided within the certified pi enclosure."""


class SpectralProximityError(DomainError):
    """Filtration value lies inside the exclusion band around a spectral value."""


class OracleSizeError(DomainError):
    """Brute-force oracle instance exceeds its documented scale."""
