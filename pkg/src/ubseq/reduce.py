"""Deterministic summation of long term sequences at checkpoints.

Terms are produced in chunks of ``CHUNK`` consecutive indices.  Each chunk is
Kahan-summed on its own; a prefix up to a checkpoint is then the fixed
pairwise tree over whole-chunk sums plus the Kahan sum of the trailing partial
chunk.  The tree shape depends only on the checkpoint, never on how many
worker threads produced the chunks, so results are identical to the last bit
for any thread count.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ._kernels import kahan_sum

CHUNK = 1 << 16


def default_threads():
    return os.cpu_count() or 1


def tree_sum(values):
    """Pairwise sum in a fixed left/right split order."""
    n = len(values)
    if n == 0:
        return 0.0
    if n == 1:
        return values[0]
    mid = n // 2
    return tree_sum(values[:mid]) + tree_sum(values[mid:])


def _ksum(x):
    if np.iscomplexobj(x):
        return complex(kahan_sum(np.ascontiguousarray(x.real)),
                       kahan_sum(np.ascontiguousarray(x.imag)))
    return kahan_sum(np.ascontiguousarray(x, dtype=np.float64))


def checkpoint_sums(terms, checkpoints, threads=1, chunk=CHUNK):
    """Sums of terms[0:N] for each N in ``checkpoints``.

    ``terms(start, stop)`` must return the array of terms with 0-based
    positions start..stop-1 (real or complex).
    """
    cps = [int(n) for n in checkpoints]
    if not cps:
        return []
    if any(b <= a for a, b in zip(cps, cps[1:])) or cps[0] < 1:
        raise ValueError("checkpoints must be positive and strictly increasing")
    last = cps[-1]
    n_chunks = -(-last // chunk)
    inner = {}
    for n in cps:
        if n % chunk:
            inner.setdefault(n // chunk, []).append(n)

    def work(c):
        start = c * chunk
        stop = min(start + chunk, last)
        t = terms(start, stop)
        partial = {n: _ksum(t[: n - start]) for n in inner.get(c, ())}
        return _ksum(t), partial

    if threads > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, range(n_chunks)))
    else:
        results = [work(c) for c in range(n_chunks)]

    whole = [r[0] for r in results]
    out = []
    for n in cps:
        k, rem = divmod(n, chunk)
        parts = list(whole[:k])
        if rem:
            parts.append(results[k][1][n])
        out.append(tree_sum(parts))
    return out


def geometric_checkpoints(n_max, start=1000, ratio=math.sqrt(10.0), count=None):
    """round(start * ratio**j), clipped to n_max; n_max itself is always last
    when ``count`` is not given."""
    out = []
    j = 0
    while True:
        if count is not None and j >= count:
            break
        n = int(round(start * ratio**j))
        if n > n_max:
            break
        if not out or n > out[-1]:
            out.append(n)
        j += 1
    if count is None and (not out or out[-1] != n_max):
        out.append(n_max)
    return out


def parse_checkpoints(text, n_max):
    """``geo:start:ratio:count`` or an explicit comma list; None → default schedule."""
    if text is None or text == "":
        return geometric_checkpoints(n_max)
    if text.startswith("geo:"):
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError(f"bad checkpoint schedule {text!r}")
        start = parse_count(parts[1])
        ratio = float(parts[2])
        count = int(parts[3])
        if ratio <= 1.0 or count < 1 or start < 1:
            raise ValueError(f"bad checkpoint schedule {text!r}")
        cps = geometric_checkpoints(10**30, start, ratio, count)
    else:
        cps = [parse_count(t) for t in text.split(",") if t.strip()]
    if not cps or any(b <= a for a, b in zip(cps, cps[1:])) or cps[0] < 1:
        raise ValueError("checkpoints must be positive and strictly increasing")
    return cps


def parse_count(text):
    """Positive integer, accepting scientific shorthand such as ``1e7``."""
    from decimal import Decimal, InvalidOperation

    try:
        d = Decimal(str(text).strip())
    except InvalidOperation:
        raise ValueError(f"not a number: {text!r}") from None
    if d != d.to_integral_value():
        raise ValueError(f"not an integer: {text!r}")
    return int(d)
