"""Binary sieve cache.

Layout (little-endian)::

    magic      8 bytes  b"UBSEQ\\0v1"
    max_n      u64
    big_omega  max_n bytes      (n = 1..max_n)
    small_omega max_n bytes
    mobius     max_n signed bytes
    squarefree ceil(max_n / 8) bytes, bit (n-1) % 8 of byte (n-1) // 8
    checksum   u64, FNV-1a 64 of every preceding byte
"""

import logging
import struct
from pathlib import Path

import numpy as np

from ._kernels import fnv1a64
from .arithseq import ArithmeticFunctionTable, build_sieve_tables
from .errors import ChecksumError

MAGIC = b"UBSEQ\0v1"
_HEADER = struct.Struct("<8sQ")

log = logging.getLogger(__name__)


def encode(table):
    n = table.max_n
    parts = [
        _HEADER.pack(MAGIC, n),
        table.big_omega[1 : n + 1].astype(np.uint8).tobytes(),
        table.small_omega[1 : n + 1].astype(np.uint8).tobytes(),
        table.mobius[1 : n + 1].astype(np.int8).tobytes(),
        np.packbits(table.squarefree[1 : n + 1], bitorder="little").tobytes(),
    ]
    payload = b"".join(parts)
    checksum = int(fnv1a64(np.frombuffer(payload, dtype=np.uint8)))
    return payload + struct.pack("<Q", checksum)


def decode(data, max_n=None):
    if len(data) < _HEADER.size + 8:
        raise ChecksumError("cache file is truncated")
    payload, (stored,) = data[:-8], struct.unpack("<Q", data[-8:])
    if int(fnv1a64(np.frombuffer(payload, dtype=np.uint8))) != stored:
        raise ChecksumError("cache checksum mismatch")
    magic, n = _HEADER.unpack_from(payload)
    if magic != MAGIC:
        raise ChecksumError("not a sieve cache file")
    if len(payload) != _HEADER.size + 3 * n + (n + 7) // 8:
        raise ChecksumError("cache length does not match its header")
    if max_n is not None and max_n > n:
        raise ValueError(f"cache covers 1..{n}, need {max_n}")
    m = n if max_n is None else max_n
    off = _HEADER.size

    def column(dtype, start):
        out = np.zeros(m + 1, dtype=dtype)
        out[1:] = np.frombuffer(payload, dtype=dtype, count=m, offset=start)
        return out

    big = column(np.uint8, off)
    small = column(np.uint8, off + n)
    mu = column(np.int8, off + 2 * n)
    bits = np.frombuffer(payload, dtype=np.uint8, offset=off + 3 * n)
    sf = np.zeros(m + 1, dtype=bool)
    sf[1:] = np.unpackbits(bits, bitorder="little")[:m].astype(bool)
    return ArithmeticFunctionTable(m, big, small, mu, sf)


def write_cache(path, table):
    Path(path).write_bytes(encode(table))


def read_cache(path, max_n=None):
    return decode(Path(path).read_bytes(), max_n)


def cache_roundtrip(path, table):
    write_cache(path, table)
    return read_cache(path)


def cached_max_n(path):
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
    if len(head) < _HEADER.size:
        return 0
    magic, n = _HEADER.unpack(head)
    return n if magic == MAGIC else 0


def load_or_build(path, max_n):
    """Serve ``max_n`` from the cache at ``path`` when it covers the range;
    otherwise (missing, too small or corrupt) sieve and rewrite it."""
    if path is None:
        return build_sieve_tables(max_n)
    p = Path(path)
    if p.exists():
        try:
            if cached_max_n(p) >= max_n:
                return read_cache(p, max_n)
        except ChecksumError as exc:
            log.warning("%s: %s; rebuilding", p, exc)
    table = build_sieve_tables(max_n)
    write_cache(p, table)
    return table
