"""Shared exception taxonomy.

Every operational failure raises a subclass of :class:`EflError`; numerical
results never smuggle NaN/inf out of a public operation (see
:class:`NonFiniteResult`).  Divergence of a formally-divergent sum is *not* an
error: it is reported in-band via flags on the returned record.
"""

from __future__ import annotations


class EflError(Exception):
    """Base class for all package errors."""


class PoleAtOne(EflError):
    """Evaluation requested at (or within tolerance of) the pole s = 1."""


class ConfigTooWeak(EflError):
    """The pinned evaluation parameters cannot reach the requested accuracy."""


class NearZeroOfZeta(EflError):
    """A logarithmic derivative was requested too close to a zero of zeta."""


class ContourHitsSingularity(EflError):
    """The expansion contour encloses or touches an unexpected pole/zero."""


class QuadratureNotConverged(EflError):
    """Contour quadrature error estimate exceeds the configured target."""


class NonFiniteResult(EflError):
    """An operation produced NaN or infinity."""


class LimitTooLarge(EflError):
    """Sieve limit exceeds the configured memory budget."""


class TableTooSmall(EflError):
    """A sum was requested beyond the sieve table's limit."""


class ParseError(EflError):
    """Malformed zero-table file; carries the offending 1-based line number."""

    def __init__(self, message: str, line_number: int | None = None):
        super().__init__(message)
        self.line_number = line_number


class MonotonicityViolation(ParseError):
    """Ordinates not strictly increasing."""


class CountMismatch(EflError):
    """Zero count disagrees with the counting estimate beyond tolerance."""

    def __init__(self, message: str, height: float, expected: float, actual: int):
        super().__init__(message)
        self.height = height
        self.expected = expected
        self.actual = actual


class NetworkError(EflError):
    """Download failed or network use is disabled."""


class DigestMismatch(EflError):
    """Cached file content does not match its recorded digest."""


class MissedZero(EflError):
    """Sign-change scan count is inconsistent with the counting estimate."""


class OrderTooLarge(EflError):
    """Polynomial/Laguerre order beyond the supported range."""


class TimeDomainUndefined(EflError):
    """Involution needs g(t) at negative t, which this g does not define."""


class PoleInput(EflError):
    """Transform evaluated at (or within tolerance of) one of its poles."""


class TransformPole(PoleInput):
    """An explicit-formula term hit a pole of the test-function transform."""


class AtJumpPoint(EflError):
    """psi evaluation requested at (or within tolerance of) a prime power."""


class EmptyZeroSet(EflError):
    """An operation that sums over zeros received no zeros."""


class UnsupportedFamily(EflError):
    """Test function outside the family supported by this operation."""


class CoefficientsTooShort(EflError):
    """LaurentCoefficients does not cover the requested order."""
