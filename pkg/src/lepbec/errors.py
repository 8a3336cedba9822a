"""Exception hierarchy shared by all modules."""


class LepError(Exception):
    """Base class for every error raised by the library."""


class DimensionMismatch(LepError, ValueError):
    pass


class DenominatorNonPositive(LepError, ArithmeticError):
    """The occupation denominator ``factor - q`` is not strictly positive."""


class SuperCritical(LepError, ValueError):
    """Chemical potential at or above the critical value."""


class SuperCriticalFiniteVolume(SuperCritical):
    pass


class QSignInvalid(LepError, ValueError):
    pass


class UnboundedAtZero(LepError, ArithmeticError):
    """``beta(x)`` diverges as ``x`` decreases to zero."""


class DomainViolation(LepError, ValueError):
    """A test function left the class on which a pairing is defined."""


class UnsupportedDimension(LepError, ValueError):
    pass


class PreconditionUnverified(LepError, ValueError):
    pass


class CutoffOverflow(LepError, ValueError):
    pass


class ConfigError(LepError, ValueError):
    pass


class NonIntegrable(LepError, ArithmeticError):
    """A density is not locally integrable where it is being paired."""
