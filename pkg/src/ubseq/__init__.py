"""Arithmetic sequences, distribution tests and model dynamics for
time averages along uniformly behaved sequences."""

from .errors import (
    UbseqError,
    CapacityError,
    ChecksumError,
    KindMismatchError,
    SequenceError,
)

__version__ = "0.1.0"

__all__ = [
    "UbseqError",
    "CapacityError",
    "ChecksumError",
    "KindMismatchError",
    "SequenceError",
    "__version__",
]
