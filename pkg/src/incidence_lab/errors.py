"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class IncidenceLabError(ValueError):
    """Base class for every error raised by this package."""


class NotPrime(IncidenceLabError):
    pass


class DegreeZero(IncidenceLabError):
    pass


class SizeCapExceeded(IncidenceLabError):
    pass


class SpecMismatch(IncidenceLabError):
    pass


class InverseOfZero(IncidenceLabError, ZeroDivisionError):
    pass


class OrderMismatch(IncidenceLabError):
    pass


class NonRationalNormSq(IncidenceLabError):
    pass


class DimensionMismatch(IncidenceLabError):
    pass


class DuplicatePoints(IncidenceLabError):
    pass


class DuplicatePolynomials(IncidenceLabError):
    pass


class BadLength(IncidenceLabError):
    pass


class BadGrid(IncidenceLabError):
    pass


class EmptyList(IncidenceLabError):
    pass


class LengthMismatch(IncidenceLabError):
    pass


class NonpositiveEpsilon(IncidenceLabError):
    pass


class TheoremViolation(IncidenceLabError, AssertionError):
    """An exact check of a proved inequality failed; always a build bug."""


class DuplicateCodewords(IncidenceLabError):
    pass
