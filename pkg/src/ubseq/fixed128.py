"""128-bit unsigned fractions of one.

A fraction ``x`` in [0, 1) is the integer ``X = floor(x * 2**128)``.  Scalars
are plain Python ints (exact); batches are pairs of ``uint64`` arrays
``(hi, lo)`` so that ``X = hi * 2**64 + lo``.  All batch arithmetic wraps mod
2**128, i.e. it is arithmetic mod 1 on the circle.
"""

from math import isqrt

import numpy as np

ONE = 1 << 128
MASK128 = ONE - 1
MASK64 = (1 << 64) - 1

_M32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_S11 = np.uint64(11)


def golden():
    """floor(((sqrt 5 - 1) / 2) * 2**128)."""
    return (isqrt(5 << 256) - ONE) >> 1


def sqrt2m1():
    """floor((sqrt 2 - 1) * 2**128)."""
    return isqrt(2 << 256) - ONE


def from_ratio(p, q):
    """Truncated fixed-point value of p/q (exact when q is a power of two)."""
    return ((p % q) << 128) // q


def to_float(x):
    return (x >> 75) * 2.0**-53


def split(x):
    x &= MASK128
    return np.uint64(x >> 64), np.uint64(x & MASK64)


def mulhi64(a, b):
    """High 64 bits of the full 128-bit product of uint64 operands."""
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    a_lo, a_hi = a & _M32, a >> _S32
    b_lo, b_hi = b & _M32, b >> _S32
    p0 = a_lo * b_lo
    p1 = a_lo * b_hi
    p2 = a_hi * b_lo
    p3 = a_hi * b_hi
    mid = (p0 >> _S32) + (p1 & _M32) + (p2 & _M32)
    return p3 + (p1 >> _S32) + (p2 >> _S32) + (mid >> _S32)


def mul(n, f):
    """(n * f) mod 2**128 for a uint64 array ``n`` and a scalar fraction ``f``."""
    n = np.asarray(n, dtype=np.uint64)
    f_hi, f_lo = split(f)
    lo = n * f_lo
    hi = n * f_hi + mulhi64(n, f_lo)
    return hi, lo


def add(a_hi, a_lo, b_hi, b_lo):
    lo = a_lo + b_lo
    carry = (lo < a_lo).astype(np.uint64)
    return a_hi + b_hi + carry, lo


def add_scalar(hi, lo, x):
    x_hi, x_lo = split(x)
    return add(hi, lo, x_hi, x_lo)


def neg(hi, lo):
    """(-X) mod 2**128."""
    lo_n = (~lo) + np.uint64(1)
    carry = (lo == np.uint64(0)).astype(np.uint64)
    return (~hi) + carry, lo_n


def sub(a_hi, a_lo, b_hi, b_lo):
    n_hi, n_lo = neg(b_hi, b_lo)
    return add(a_hi, a_lo, n_hi, n_lo)


def less(a_hi, a_lo, b_hi, b_lo):
    return (a_hi < b_hi) | ((a_hi == b_hi) & (a_lo < b_lo))


def high_word_times(hi, lo, h):
    """High word of (h * X) mod 2**128 for a non-negative integer ``h``."""
    h = np.uint64(h)
    return hi * h + mulhi64(lo, h)


def unit(hi):
    """Map high words to floats in [0, 1), keeping 53 bits (never rounds up to 1)."""
    return (np.asarray(hi, dtype=np.uint64) >> _S11).astype(np.float64) * 2.0**-53


def unit128(hi, lo):
    """Float value of the full fraction, rounded to nearest but clamped below 1."""
    v = np.asarray(hi, dtype=np.uint64).astype(np.float64) * 2.0**-64
    v += np.asarray(lo, dtype=np.uint64).astype(np.float64) * 2.0**-128
    return np.minimum(v, np.nextafter(1.0, 0.0))


def circle_distance(a_hi, a_lo, b_hi, b_lo):
    """Arc-length distance on R/Z between two batches, as floats in [0, 1/2]."""
    d_hi, d_lo = sub(a_hi, a_lo, b_hi, b_lo)
    n_hi, n_lo = neg(d_hi, d_lo)
    use_neg = less(n_hi, n_lo, d_hi, d_lo)
    hi = np.where(use_neg, n_hi, d_hi)
    lo = np.where(use_neg, n_lo, d_lo)
    return hi.astype(np.float64) * 2.0**-64 + lo.astype(np.float64) * 2.0**-128


def circle_distance_scalar(x, y):
    d = (x - y) & MASK128
    return min(d, ONE - d) / ONE
