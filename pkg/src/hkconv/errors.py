"""Exception hierarchy shared by every module of the toolkit."""


class HKError(Exception):
    """Base class for toolkit errors."""


class OutOfDomain(HKError, ValueError):
    pass


class SingularPoint(HKError, ValueError):
    pass


class UnboundedWithoutLimit(HKError):
    """An infinite endpoint was requested but no limit or compactification exists."""


class NonpositiveEpsilon(HKError, ValueError):
    pass


class DomainMismatch(HKError, ValueError):
    pass


class UnsupportedBase(HKError, ValueError):
    pass


class InvalidExponents(HKError, ValueError):
    pass


class ArithmeticModeError(HKError, TypeError):
    """Rational and float operands were combined in one computation."""


class EmptyFamily(HKError, ValueError):
    pass


class MissingCertificate(HKError):
    """Theorem 5 style check requested without convergence-mode evidence."""


class SpecError(HKError, ValueError):
    """Malformed function description or experiment configuration."""
