class UbseqError(Exception):
    """Base class for errors raised by this package."""


class CapacityError(UbseqError):
    """Requested table does not fit the configured memory budget."""


class ChecksumError(UbseqError):
    """A cache file failed its integrity check."""


class KindMismatchError(UbseqError, TypeError):
    """Observable, point or flow of incompatible kinds were combined."""


class SequenceError(UbseqError, ValueError):
    """A sequence or indicator cannot satisfy the request (too short, empty, bad spec)."""
