"""Exception hierarchy for the engine.

Everything raised on purpose derives from StegoError so callers can catch
one base type at a pipeline boundary and still branch on the specific
failure when they need to.
"""

from __future__ import annotations


class StegoError(Exception):
    """Base class for all engine errors."""


class ParseError(StegoError):
    """Detection interchange data is syntactically malformed."""


class ValidationError(StegoError):
    """A value violates a structural invariant (range, shape, type)."""


class EmptyDictionaryError(StegoError):
    """No record in the corpus produced a usable object."""


class NotInDictionaryError(StegoError):
    """Label lookup against a mapping that does not contain it."""


class KeyLengthError(StegoError):
    """Sequence key length below the minimum of 2 bits."""


class EmptyIndexError(StegoError):
    """Index construction found zero usable images."""


class UnknownFactorError(StegoError):
    """Image selection for a factor the index does not hold."""


class EmptyMessageError(StegoError):
    """Attempt to hide a zero-length message."""


class UnmatchableBitError(StegoError):
    """A message bit value appears nowhere in any scrambled sequence."""


class ProtocolError(StegoError):
    """Extraction inputs are mutually inconsistent (lengths, ranges)."""


class FramingError(StegoError):
    """Bitstream length is not a whole number of bytes."""


class FormatError(StegoError):
    """A serialized file has a bad magic, version, or structure."""


class AuthenticationError(StegoError):
    """Sealed data failed integrity verification."""
