"""Exception hierarchy for the enumeration engine."""


class K33EnumError(Exception):
    """Base class for all errors raised by k33_enum."""


class ConfigError(K33EnumError):
    """Invalid run configuration."""


# Series algebra


class SeriesError(K33EnumError):
    """Failure inside exact truncated-series algebra."""


class DivisionByNonUnit(SeriesError):
    """Division by a series (or coefficient) whose constant term is not invertible."""


class BadConstantTerm(SeriesError):
    """exp/log called on a series with the wrong constant term."""


class NonNilpotentComposition(SeriesError):
    """Composition with an inner series whose constant term is nonzero."""


class SingularJacobian(SeriesError):
    """Newton iteration started at a root where dP/dS is not invertible."""


class NoRoot(SeriesError):
    """The start value is not a root of the relation at x = 0."""


class NoContraction(SeriesError):
    """Fixed-point iterates stopped gaining agreement before the target order."""

    def __init__(self, agreement: int, order: int):
        self.agreement = agreement
        self.order = order
        super().__init__(f"Iteration stalled at agreement {agreement} (target order {order})")


class NonIntegerCount(SeriesError):
    """An extracted count n! [x^n] s is not an integer."""

    def __init__(self, n: int, value: str):
        self.n = n
        self.value = value
        super().__init__(f"Coefficient at n={n} gives non-integer count {value}")


class NegativeCount(SeriesError):
    """An extracted count is negative."""

    def __init__(self, n: int, value: int):
        self.n = n
        self.value = value
        super().__init__(f"Coefficient at n={n} gives negative count {value}")


# Numerics


class NumericError(K33EnumError):
    """High-precision evaluation or root finding failed."""


class NoConvergence(NumericError):
    """A root finder did not reach the requested residual."""


class NoRootInBracket(NumericError):
    """No sign change found in the scanned bracket."""


class AmbiguousRoot(NumericError):
    """More than one sign change found in the scanned bracket."""


class ExpansionError(NumericError):
    """A local singular expansion cannot be formed at the given point."""


# Oracle


class OracleError(K33EnumError):
    """Brute-force oracle misuse."""


class TooLarge(OracleError):
    """Graph or enumeration size beyond the supported range."""


class PreconditionViolation(OracleError):
    """Operation called on a graph that does not satisfy its precondition."""
