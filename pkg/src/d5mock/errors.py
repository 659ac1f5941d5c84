"""Exception types raised across the package."""


class D5MockError(Exception):
    """Base class for all errors raised by d5mock."""


class DomainError(D5MockError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class NonConvergence(D5MockError, RuntimeError):
    """A series, product or quadrature failed to meet its tolerance within the work cap."""


class PoleError(D5MockError, ZeroDivisionError):
    """A denominator vanishes (or is numerically indistinguishable from zero)."""


class OrderMismatch(D5MockError, ValueError):
    """Two truncated series with different truncation orders were combined."""


class NonUnit(D5MockError, ValueError):
    """Division by a power series whose constant term is not +1 or -1."""
