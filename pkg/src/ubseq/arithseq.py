"""Sieved arithmetic functions, automatic sequences and the subsequences of
the natural numbers built from them."""

import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ._kernels import linear_sieve
from .errors import CapacityError, SequenceError
from .rng import SplitMix64

MAX_SIEVE = 1 << 32
# bytes per sieved integer: spf (4) + Omega, omega, mu (3) + squarefree (1)
_BYTES_PER_N = 8
DEFAULT_MEMORY_BUDGET = 4 << 30

INDICATOR_NAMES = ("tm", "rs", "ef", "of", "sf", "efsf", "ofsf")
# asymptotic densities, used only to size sieves for listings
LISTING_DENSITY = {
    "tm": 0.5, "rs": 0.5, "ef": 0.5, "of": 0.5,
    "sf": 6 / math.pi**2, "efsf": 3 / math.pi**2, "ofsf": 3 / math.pi**2,
}


def memory_budget():
    env = os.environ.get("UBSEQ_MEMORY_BUDGET")
    return int(float(env)) if env else DEFAULT_MEMORY_BUDGET


@dataclass(frozen=True, eq=False)
class ArithmeticFunctionTable:
    """Omega, omega, mu and the square-free indicator for 1..max_n.

    Arrays have length max_n + 1; index 0 is padding and holds zeros.
    """

    max_n: int
    big_omega: np.ndarray
    small_omega: np.ndarray
    mobius: np.ndarray
    squarefree: np.ndarray

    @property
    def liouville(self):
        lam = 1 - 2 * (self.big_omega & 1).astype(np.int8)
        lam[0] = 0
        return lam

    def prefix(self, n):
        if n > self.max_n:
            raise SequenceError(f"table covers 1..{self.max_n}, asked for {n}")
        return ArithmeticFunctionTable(
            n,
            self.big_omega[: n + 1],
            self.small_omega[: n + 1],
            self.mobius[: n + 1],
            self.squarefree[: n + 1],
        )

    def equals(self, other):
        return (
            self.max_n == other.max_n
            and np.array_equal(self.big_omega, other.big_omega)
            and np.array_equal(self.small_omega, other.small_omega)
            and np.array_equal(self.mobius, other.mobius)
            and np.array_equal(self.squarefree, other.squarefree)
        )


def build_sieve_tables(max_n, budget=None):
    """Linear smallest-prime-factor sieve up to ``max_n``."""
    max_n = int(max_n)
    if max_n < 2 or max_n > MAX_SIEVE:
        raise ValueError(f"max_n must be in [2, 2**32], got {max_n}")
    budget = memory_budget() if budget is None else budget
    if max_n * _BYTES_PER_N > budget:
        raise CapacityError(
            f"sieve to {max_n} needs ~{max_n * _BYTES_PER_N} bytes, budget {budget}"
        )
    slots = max(16, int(1.26 * max_n / math.log(max_n)) + 16)
    big, small, mu, _ = linear_sieve(max_n, slots)
    sf = mu != 0
    sf[0] = False
    return ArithmeticFunctionTable(max_n, big, small, mu, sf)


def automatic_bit(kind, n):
    """Thue-Morse (``tm``) or Rudin-Shapiro (``rs``) bit at n >= 0."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if kind == "tm":
        return bin(n).count("1") & 1
    if kind == "rs":
        return 1 - (bin(n & (n >> 1)).count("1") & 1)
    raise SequenceError(f"unknown automatic sequence {kind!r}")


def _popcount_parity(x):
    x = x.astype(np.uint64, copy=True)
    parity = np.zeros(x.shape, dtype=np.uint8)
    while np.any(x):
        parity ^= (x & np.uint64(1)).astype(np.uint8)
        x >>= np.uint64(1)
    return parity


def automatic_bits(kind, stop):
    """Vectorised automatic bits for n = 0..stop-1."""
    n = np.arange(stop, dtype=np.uint64)
    if kind == "tm":
        return _popcount_parity(n)
    if kind == "rs":
        return 1 - _popcount_parity(n & (n >> np.uint64(1)))
    raise SequenceError(f"unknown automatic sequence {kind!r}")


@dataclass(eq=False)
class IndicatorSequence:
    """Membership of 1..max_n in a set; ``bits[0]`` is always False."""

    max_n: int
    bits: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=bool)
        if self.bits.shape != (self.max_n + 1,):
            raise ValueError("bits must have length max_n + 1")
        if self.bits[0]:
            self.bits = self.bits.copy()
            self.bits[0] = False

    @classmethod
    def from_members(cls, members, max_n, name=""):
        bits = np.zeros(max_n + 1, dtype=bool)
        bits[np.asarray(members, dtype=np.int64)] = True
        return cls(max_n, bits, name)

    @classmethod
    def full(cls, max_n, name="all"):
        bits = np.ones(max_n + 1, dtype=bool)
        return cls(max_n, bits, name)

    def count(self, n=None):
        n = self.max_n if n is None else n
        return int(np.count_nonzero(self.bits[1 : n + 1]))

    def counts_at(self, checkpoints):
        cum = np.cumsum(self.bits, dtype=np.int64)
        return [int(cum[n]) for n in checkpoints]

    def members(self):
        return np.flatnonzero(self.bits).astype(np.uint64)


def automatic_indicator(kind, max_n):
    bits = automatic_bits(kind, max_n + 1).astype(bool)
    return IndicatorSequence(max_n, bits, kind.upper())


def indicator_for(name, table):
    """Indicator of TM, RS, EF, OF, SF, EF∩SF or OF∩SF on 1..table.max_n."""
    key = name.lower()
    if key in ("tm", "rs"):
        return automatic_indicator(key, table.max_n)
    even = (table.big_omega & 1) == 0
    even[0] = False
    if key == "ef":
        bits = even
    elif key == "of":
        bits = ~even
    elif key == "sf":
        bits = table.squarefree.copy()
    elif key == "efsf":
        bits = even & table.squarefree
    elif key == "ofsf":
        bits = ~even & table.squarefree
    else:
        raise SequenceError(f"unknown indicator {name!r}")
    return IndicatorSequence(table.max_n, bits, key.upper())


@dataclass(eq=False)
class Subsequence:
    """Strictly increasing a_1 < a_2 < ... (stored 0-based)."""

    values: np.ndarray
    source: Optional[IndicatorSequence] = field(default=None, repr=False)

    def __len__(self):
        return len(self.values)


def subsequence_of(ind):
    values = ind.members()
    if len(values) == 0:
        raise SequenceError(f"indicator {ind.name!r} is empty")
    return Subsequence(values, ind)


@dataclass(frozen=True)
class SequenceSpec:
    """Which sequence a_n to produce.

    kind is one of ``big_omega``, ``small_omega``, ``identity``, ``poly``,
    ``subseq`` or ``file``.
    """

    kind: str
    coefficients: tuple = ()
    indicator: str = ""
    path: str = ""

    def __post_init__(self):
        if self.kind not in ("big_omega", "small_omega", "identity", "poly", "subseq", "file"):
            raise SequenceError(f"unknown sequence kind {self.kind!r}")
        if self.kind == "poly":
            if not self.coefficients or any(c < 0 for c in self.coefficients):
                raise SequenceError("polynomial coefficients must be non-negative")
        if self.kind == "subseq" and self.indicator.lower() not in INDICATOR_NAMES:
            raise SequenceError(f"unknown indicator {self.indicator!r}")

    @property
    def label(self):
        if self.kind == "poly":
            return "poly:" + ",".join(str(c) for c in self.coefficients)
        if self.kind == "subseq":
            return self.indicator.lower()
        if self.kind == "file":
            return "file:" + self.path
        return {"big_omega": "omega", "small_omega": "smallomega", "identity": "n"}[self.kind]

    @property
    def needs_table(self):
        return self.kind in ("big_omega", "small_omega") or (
            self.kind == "subseq" and self.indicator.lower() not in ("tm", "rs")
        )


def parse_sequence_spec(text):
    """CLI form: omega, smallomega, n, poly:c0,c1,..., tm/rs/ef/of/sf/efsf/ofsf, file:path."""
    t = text.strip()
    low = t.lower()
    if low in ("omega", "bigomega"):
        return SequenceSpec("big_omega")
    if low in ("smallomega", "omega_small"):
        return SequenceSpec("small_omega")
    if low in ("n", "identity"):
        return SequenceSpec("identity")
    if low.startswith("poly:"):
        try:
            coeffs = tuple(int(c) for c in t[5:].split(","))
        except ValueError:
            raise SequenceError(f"bad polynomial {text!r}") from None
        return SequenceSpec("poly", coefficients=coeffs)
    if low.startswith("file:"):
        return SequenceSpec("file", path=t[5:])
    if low in INDICATOR_NAMES:
        return SequenceSpec("subseq", indicator=low)
    raise SequenceError(f"unknown sequence {text!r}")


def read_sequence_file(path):
    values = []
    for line in Path(path).read_text().split():
        v = int(line)
        if v <= 0:
            raise SequenceError(f"{path}: values must be positive, got {v}")
        values.append(v)
    return np.array(values, dtype=np.uint64)


def _poly_values(coeffs, n_terms):
    top = 0
    for c in reversed(coeffs):
        top = top * n_terms + c
    if top >= 1 << 64:
        raise OverflowError(f"polynomial exceeds 64 bits at n={n_terms}")
    n = np.arange(1, n_terms + 1, dtype=np.uint64)
    acc = np.zeros(n_terms, dtype=np.uint64)
    # Horner intermediates never exceed P(n) for non-negative coefficients
    for c in reversed(coeffs):
        acc = acc * n + np.uint64(c)
    return acc


def table_size_for(spec, n_terms):
    """Sieve bound sufficient (up to one regrowth) for ``n_terms`` of ``spec``."""
    if spec.kind == "subseq":
        d = LISTING_DENSITY[spec.indicator.lower()]
        return max(64, int(n_terms / d * 1.02) + 1000)
    return max(2, n_terms)


def sequence_values(spec, n_terms, table=None):
    """a_1..a_N as a uint64 array (position k holds a_{k+1})."""
    n_terms = int(n_terms)
    if spec.kind == "identity":
        return np.arange(1, n_terms + 1, dtype=np.uint64)
    if spec.kind == "poly":
        return _poly_values(spec.coefficients, n_terms)
    if spec.kind == "file":
        vals = read_sequence_file(spec.path)
        if len(vals) < n_terms:
            raise SequenceError(f"{spec.path} has {len(vals)} values, need {n_terms}")
        return vals[:n_terms]
    if spec.kind in ("big_omega", "small_omega"):
        if table is None or table.max_n < n_terms:
            raise SequenceError(f"table must cover 1..{n_terms}")
        arr = table.big_omega if spec.kind == "big_omega" else table.small_omega
        return arr[1 : n_terms + 1].astype(np.uint64)
    key = spec.indicator.lower()
    if key in ("tm", "rs"):
        size = table_size_for(spec, n_terms)
        while True:
            members = automatic_indicator(key, size).members()
            if len(members) >= n_terms:
                return members[:n_terms]
            size = int(size * 1.25) + 64
    if table is None:
        raise SequenceError(f"listing {key!r} needs a sieve table")
    members = indicator_for(key, table).members()
    if len(members) < n_terms:
        raise SequenceError(
            f"{key} has only {len(members)} members up to {table.max_n}, need {n_terms}"
        )
    return members[:n_terms]


@dataclass
class LawReport:
    trials: int
    violations: int
    witnesses: list


def _sample_pairs(max_n, trials, seed, coprime):
    rng = SplitMix64(seed)
    pairs = []
    while len(pairs) < trials:
        m = rng.integer(1, max_n)
        n = rng.integer(1, max_n // m)
        if coprime and math.gcd(m, n) != 1:
            continue
        pairs.append((m, n))
    return pairs


def _law_check(values, trials, seed, coprime, law, keep):
    values = np.asarray(values)
    max_n = len(values) - 1
    if max_n < 1:
        raise SequenceError("values must be indexed 1..max_n")
    violations = 0
    witnesses = []
    for m, n in _sample_pairs(max_n, trials, seed, coprime):
        lhs = int(values[m * n])
        if lhs != law(int(values[m]), int(values[n])):
            violations += 1
            if len(witnesses) < keep:
                witnesses.append((m, n))
    return LawReport(trials, violations, witnesses)


def additivity_check(values, trials, seed=0, coprime=False, keep=20):
    """Sample pairs m*n <= max_n and count a_mn != a_m + a_n.

    ``values[k]`` is a_k (index 0 ignored).  ``coprime`` restricts sampling to
    gcd(m, n) = 1.
    """
    return _law_check(values, trials, seed, coprime, lambda x, y: x + y, keep)


def multiplicativity_check(values, trials, seed=0, coprime=False, keep=20):
    """As :func:`additivity_check` with the law a_mn = a_m * a_n."""
    return _law_check(values, trials, seed, coprime, lambda x, y: x * y, keep)
