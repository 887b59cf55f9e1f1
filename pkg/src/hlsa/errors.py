"""Exception hierarchy shared by every module of the kernel."""

from __future__ import annotations


class HlsaError(Exception):
    """Base class for all errors raised by this package."""


# field
class FieldError(HlsaError, ValueError):
    pass


class NonPrime(FieldError):
    pass


class BadCharacteristic(FieldError):
    pass


class ReducibleModulus(FieldError):
    pass


class NoBuiltinModulus(FieldError):
    pass


class UnsupportedDegree(FieldError):
    pass


class FieldMismatch(FieldError):
    pass


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


class ElementSyntaxError(FieldError):
    pass


# linalg
class DimensionMismatch(HlsaError, ValueError):
    pass


class NotSquare(DimensionMismatch):
    pass


# algebra / restriction
class NotInL0(HlsaError, ValueError):
    """An element was required to lie in the fixed even subspace."""


class NotMultiplicative(HlsaError, ValueError):
    pass


class NotGraded(HlsaError, ValueError):
    """A subspace has no basis of homogeneous vectors."""


class CodomainNotCentral(HlsaError, ValueError):
    pass


class NotCentral(HlsaError, ValueError):
    pass


class BasisMismatch(HlsaError, ValueError):
    pass


class NotASubalgebra(HlsaError, ValueError):
    pass


class NotIdeals(HlsaError, ValueError):
    pass


class NotDirectSum(HlsaError, ValueError):
    pass


class TheoremViolation(HlsaError, AssertionError):
    """A construction that should succeed produced a structure failing verification.

    Carries the failing report so callers can print the witness.
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


# constructions
class EmptyList(HlsaError, ValueError):
    pass


class NotEndomorphism(HlsaError, ValueError):
    pass


class PMapEscapesFixedSpace(HlsaError, ValueError):
    pass


class NotHomAssociative(HlsaError, ValueError):
    pass


class NotUntwisted(HlsaError, ValueError):
    """The Yau twist expects an input with alpha = id."""


class TwistNotRestricted(TheoremViolation):
    """The twisted p-map fails the ad-power axiom (see README, "Yau twist")."""


# morphisms
class PMapMismatch(HlsaError, ValueError):
    pass


class NotInjective(HlsaError, ValueError):
    pass


class TargetOutsideImage(HlsaError, ValueError):
    pass


class PreconditionFailed(HlsaError, ValueError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


# catalog
class UnknownName(HlsaError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class UnsupportedField(HlsaError, ValueError):
    pass


# file format
class HlsaSyntaxError(HlsaError, ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InvariantViolation(HlsaError, ValueError):
    pass


class UnsupportedVersion(HlsaError, ValueError):
    pass
