"""Exception types shared across the package."""


class BrieskornError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(BrieskornError, ValueError):
    """Operands do not fit together (variable count, bounds, shapes, indices)."""


class DomainError(BrieskornError, ArithmeticError):
    """A mathematical precondition fails (non-unit pivot, bad h, ...)."""


class InsufficientPrecision(BrieskornError, ArithmeticError):
    """A query needs weights beyond what an element is known through."""


class SeriesParseError(StructuralError):
    """Malformed series literal."""
