"""Exception types shared across the package."""

from __future__ import annotations


class FlatcodeError(Exception):
    """Base class for every error raised by flatcode."""


# field arithmetic
class NonPrimeCharacteristic(FlatcodeError, ValueError):
    pass


class ReducibleModulus(FlatcodeError, ValueError):
    pass


class UnsupportedField(FlatcodeError, ValueError):
    pass


class FieldMismatch(FlatcodeError, ValueError):
    pass


class DivisionByZero(FlatcodeError, ZeroDivisionError):
    pass


class WrongLength(FlatcodeError, ValueError):
    pass


# linear algebra
class DimensionMismatch(FlatcodeError, ValueError):
    pass


class ColumnMismatch(DimensionMismatch):
    pass


# matroids and flats
class InvalidElement(FlatcodeError, ValueError):
    pass


class KindMismatch(FlatcodeError, ValueError):
    pass


class RankOutOfRange(FlatcodeError, ValueError):
    pass


class EmptyFlat(FlatcodeError, ValueError):
    pass


class DuplicateRows(FlatcodeError, ValueError):
    pass


class TooLarge(FlatcodeError, ValueError):
    pass


class ParameterOutOfRange(FlatcodeError, ValueError):
    pass


# decoding
class DecodeFailure(FlatcodeError):
    """The decoder found no codeword within its correction radius."""


class RankDeficient(DecodeFailure):
    """Fewer independent packets than the flat rank were received."""
