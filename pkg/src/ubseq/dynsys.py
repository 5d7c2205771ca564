"""Model flows: rigid rotation, cyclic shift, dyadic odometer and a Denjoy
homeomorphism restricted to its minimal Cantor set.

Points are scalars (exact Python ints) and orbits are numpy batches:

=========  ======================  ==================================
flow       point                   batch
=========  ======================  ==================================
rotation   128-bit angle (int)     ``AngleBatch(hi, lo)``
cyclic     residue (int)           int64 array
odometer   D-bit word (int, i_0    uint64 array
           is the lowest bit)
denjoy     ``DenjoyPoint(y, right)``  ``DenjoyBatch(hi, lo, right)``
=========  ======================  ==================================
"""

import math
from bisect import bisect_left
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import fixed128 as fx
from ._kernels import kahan_sum
from .errors import KindMismatchError
from .expsum import theta_parse
from .rng import SplitMix64

TWO_PI = 2.0 * math.pi
QUADRATURE_NODES = 1 << 16


class AngleBatch(NamedTuple):
    hi: np.ndarray
    lo: np.ndarray


class DenjoyPoint(NamedTuple):
    y: int
    right: bool = False


class DenjoyBatch(NamedTuple):
    hi: np.ndarray
    lo: np.ndarray
    right: np.ndarray


def _as_u64(a):
    return np.asarray(a, dtype=np.uint64)


@dataclass(frozen=True)
class Rotation:
    rho: int
    label: str = "rotation"
    kind = "rotation"
    default_point = 0

    def iterate(self, x, n):
        return (x + n * self.rho) & fx.MASK128

    def orbit(self, x, a):
        hi, lo = fx.mul(_as_u64(a), self.rho)
        return AngleBatch(*fx.add_scalar(hi, lo, x))

    def metric(self, x, y):
        return fx.circle_distance_scalar(x, y)

    def metric_batch(self, xs, ys):
        return fx.circle_distance(xs.hi, xs.lo, ys.hi, ys.lo)

    def random_point(self, rng):
        return rng.u128()

    def perturb(self, x, delta, rng):
        span = int(min(delta, 0.5) * fx.ONE)
        eta = rng.below(2 * span - 1) - (span - 1) if span > 1 else 0
        return (x + eta) & fx.MASK128


@dataclass(frozen=True)
class Cyclic:
    q: int
    label: str = "cyclic"
    kind = "cyclic"
    default_point = 0

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("cyclic system needs q >= 2")

    def iterate(self, x, n):
        return (x + n) % self.q

    def orbit(self, x, a):
        q = np.uint64(self.q)
        return ((_as_u64(a) % q + np.uint64(x % self.q)) % q).astype(np.int64)

    def metric(self, x, y):
        return 0.0 if x == y else 1.0

    def metric_batch(self, xs, ys):
        return (np.asarray(xs) != np.asarray(ys)).astype(np.float64)

    def random_point(self, rng):
        return rng.below(self.q)

    def perturb(self, x, delta, rng):
        # every other state sits at distance 1
        return rng.below(self.q) if delta > 1.0 else x


@dataclass(frozen=True)
class Odometer:
    depth: int = 48
    label: str = "odometer"
    kind = "odometer"
    default_point = 0

    def __post_init__(self):
        if not 1 <= self.depth <= 64:
            raise ValueError("odometer depth must be in 1..64")

    @property
    def mask(self):
        return (1 << self.depth) - 1

    def iterate(self, x, n):
        return (x + n) & self.mask

    def orbit(self, x, a):
        return (_as_u64(a) + np.uint64(x & self.mask)) & np.uint64(self.mask)

    def metric(self, x, y):
        z = (x ^ y) & self.mask
        return math.fsum(2.0 ** -(j + 1) for j in range(self.depth) if (z >> j) & 1)

    def metric_batch(self, xs, ys):
        z = np.bitwise_xor(_as_u64(xs), _as_u64(ys))
        d = np.zeros(z.shape, dtype=np.float64)
        # highest weights last so the small terms accumulate first
        for j in reversed(range(self.depth)):
            d += ((z >> np.uint64(j)) & np.uint64(1)).astype(np.float64) * 2.0 ** -(j + 1)
        return d

    def random_point(self, rng):
        return rng.next_u64() & self.mask

    def perturb(self, x, delta, rng):
        # flipping only bits at positions >= k keeps d < 2**-k <= delta
        k = 0 if delta >= 1.0 else math.ceil(-math.log2(delta))
        if k >= self.depth:
            return x
        return (x ^ ((rng.next_u64() << k) & self.mask)) & self.mask


class Denjoy:
    """Rotation by rho on the base circle, embedded into the circle by
    blowing up each orbit point frac(k rho), |k| <= K, into a gap of length
    G 2^-|k| / 3.  A point of the Cantor set is a base angle y plus the side
    of the gap when y is a gap position."""

    kind = "denjoy"
    default_point = DenjoyPoint(0, False)

    def __init__(self, rho, gap_ratio=0.5, truncation=64, label="denjoy"):
        if not 0.0 < gap_ratio < 1.0:
            raise ValueError("gap ratio must lie in (0, 1)")
        self.rho = rho & fx.MASK128
        self.gap_ratio = float(gap_ratio)
        self.truncation = int(truncation)
        self.label = label
        K = self.truncation
        ks = list(range(-K, K + 1))
        pos = [(k * self.rho) & fx.MASK128 for k in ks]
        lengths = [self.gap_length(k) for k in ks]
        order = sorted(range(len(ks)), key=lambda i: pos[i])
        self.gap_index = [ks[i] for i in order]
        self.gap_pos = [pos[i] for i in order]
        self.gap_len = np.array([lengths[i] for i in order], dtype=np.float64)
        self._pos_hi = np.array([p >> 64 for p in self.gap_pos], dtype=np.uint64)
        self._pos_lo = np.array([p & fx.MASK64 for p in self.gap_pos], dtype=np.uint64)
        if len(np.unique(self._pos_hi)) != len(self._pos_hi):
            raise ValueError("gap positions collide in their high words; choose another rho")
        # cum[i] = total length of the i leftmost gaps
        self._cum = np.concatenate(([0.0], np.cumsum(self.gap_len)))
        self._cum_exact = None

    def gap_length(self, k):
        if abs(k) > self.truncation:
            return 0.0
        return self.gap_ratio * 2.0 ** -abs(k) / 3.0

    def gap_position(self, k):
        return (k * self.rho) & fx.MASK128

    def iterate(self, x, n):
        return DenjoyPoint((x.y + n * self.rho) & fx.MASK128, x.right)

    def orbit(self, x, a):
        hi, lo = fx.mul(_as_u64(a), self.rho)
        hi, lo = fx.add_scalar(hi, lo, x.y)
        return DenjoyBatch(hi, lo, np.full(hi.shape, bool(x.right)))

    def embed_exact(self, x):
        """Phi(x) as an exact rational (the float paths lose gaps below 2^-53)."""
        if self._cum_exact is None:
            g = Fraction(self.gap_ratio)
            lens = [g * Fraction(1, 3 << abs(k)) for k in self.gap_index]
            self._len_exact = lens
            self._cum_exact = [Fraction(0)]
            for v in lens:
                self._cum_exact.append(self._cum_exact[-1] + v)
        i = bisect_left(self.gap_pos, x.y)
        phi = (1 - Fraction(self.gap_ratio)) * Fraction(x.y, fx.ONE) + self._cum_exact[i]
        if x.right and i < len(self.gap_pos) and self.gap_pos[i] == x.y:
            phi += self._len_exact[i]
        return phi % 1

    def embed(self, x):
        return float(self.embed_exact(x))

    def embed_batch(self, xs):
        hi, lo = _as_u64(xs.hi), _as_u64(xs.lo)
        idx = np.searchsorted(self._pos_hi, hi, side="left")
        safe = np.minimum(idx, len(self._pos_hi) - 1)
        same_hi = (idx < len(self._pos_hi)) & (self._pos_hi[safe] == hi)
        below = idx + (same_hi & (self._pos_lo[safe] < lo))
        on_gap = same_hi & (self._pos_lo[safe] == lo)
        phi = (1.0 - self.gap_ratio) * fx.unit128(hi, lo) + self._cum[below]
        phi += np.where(on_gap & np.asarray(xs.right), self.gap_len[safe], 0.0)
        return phi % 1.0

    def metric(self, x, y):
        d = abs(self.embed_exact(x) - self.embed_exact(y))
        return float(min(d, 1 - d))

    def metric_batch(self, xs, ys):
        d = np.abs(self.embed_batch(xs) - self.embed_batch(ys))
        return np.minimum(d, 1.0 - d)

    def random_point(self, rng):
        return DenjoyPoint(rng.u128(), bool(rng.next_u64() & 1))

    def perturb(self, x, delta, rng):
        span = int(min(delta, 0.5) * fx.ONE)
        eta = rng.below(2 * span - 1) - (span - 1) if span > 1 else 0
        while True:
            y = DenjoyPoint((x.y + eta) & fx.MASK128, x.right)
            if self.metric(x, y) < delta or eta == 0:
                return y
            eta = -((-eta) >> 1) if eta < 0 else eta >> 1


FLOW_TYPES = (Rotation, Cyclic, Odometer, Denjoy)


def _fixed_angle(text):
    th = theta_parse(text)
    if th.is_rational:
        raise ValueError(f"rotation number must be a fixed-point angle, got {text!r}")
    return th.frac


def parse_flow(text):
    """``rotation:<angle>``, ``cyclic:q``, ``odometer:D``, ``denjoy:<angle>:G:K``."""
    kind, _, rest = text.strip().partition(":")
    try:
        if kind == "rotation":
            return Rotation(_fixed_angle(rest or "golden"), label=text)
        if kind == "cyclic":
            return Cyclic(int(rest), label=text)
        if kind == "odometer":
            return Odometer(int(rest) if rest else 48, label=text)
        if kind == "denjoy":
            parts = rest.split(":") if rest else []
            angle = parts[0] if parts and parts[0] else "golden"
            if angle in ("rat", "fix"):
                angle = ":".join(parts[:2])
                parts = [angle] + parts[2:]
            g = float(parts[1]) if len(parts) > 1 else 0.5
            k = int(parts[2]) if len(parts) > 2 else 64
            return Denjoy(_fixed_angle(angle), g, k, label=text)
    except (ValueError, IndexError) as exc:
        raise ValueError(f"bad flow {text!r}: {exc}") from None
    raise ValueError(f"unknown flow {text!r}")


def parse_point(flow, text):
    """Start point text: angle for rotation, residue for cyclic, bit word i_0 i_1 ...
    for odometer, ``<angle>[:left|right]`` or ``0`` for Denjoy."""
    if text is None or text == "":
        return flow.default_point
    t = text.strip()
    if isinstance(flow, Rotation):
        return 0 if t == "0" else theta_parse(t).fixed_value
    if isinstance(flow, Cyclic):
        return int(t) % flow.q
    if isinstance(flow, Odometer):
        if t.strip("01"):
            raise ValueError(f"odometer word must be binary: {text!r}")
        return sum(1 << j for j, b in enumerate(t[: flow.depth]) if b == "1")
    side = False
    if t.endswith(":left") or t.endswith(":right"):
        t, _, s = t.rpartition(":")
        side = s == "right"
    y = 0 if t == "0" else theta_parse(t).fixed_value
    return DenjoyPoint(y, side)


# --- observables ----------------------------------------------------------------

def _harmonic_from_unit(ang, h, part):
    if part == "re":
        return np.cos(TWO_PI * ang)
    s = np.sin(TWO_PI * ang)
    return -s if h < 0 else s


@dataclass(frozen=True)
class Harmonic:
    """cos or sin of 2 pi h * angle on the rotation circle."""

    h: int
    part: str = "re"
    flow_type = Rotation

    def __post_init__(self):
        if self.h == 0 or self.part not in ("re", "im"):
            raise ValueError("harmonic needs h != 0 and part 're' or 'im'")

    @property
    def label(self):
        return f"harm:{self.h}:{self.part}"

    def value(self, flow, x):
        ang = fx.to_float((abs(self.h) * x) & fx.MASK128)
        return float(_harmonic_from_unit(ang, self.h, self.part))

    def evaluate(self, flow, xs):
        ang = fx.unit(fx.high_word_times(xs.hi, xs.lo, abs(self.h)))
        return _harmonic_from_unit(ang, self.h, self.part)

    def space_average(self, flow):
        return 0.0


@dataclass(frozen=True)
class Cylinder:
    """Indicator of the odometer cylinder [w]; the word lists i_0 first."""

    word: str
    flow_type = Odometer

    def __post_init__(self):
        if self.word.strip("01"):
            raise ValueError(f"cylinder word must be binary: {self.word!r}")

    @property
    def depth(self):
        return len(self.word)

    @property
    def code(self):
        return sum(1 << j for j, b in enumerate(self.word) if b == "1")

    @property
    def label(self):
        return f"cyl:{self.word}"

    def value(self, flow, x):
        return 1.0 if (x & ((1 << self.depth) - 1)) == self.code else 0.0

    def evaluate(self, flow, xs):
        m = np.uint64((1 << self.depth) - 1)
        return ((_as_u64(xs) & m) == np.uint64(self.code)).astype(np.float64)

    def space_average(self, flow):
        return 2.0 ** -self.depth


@dataclass(frozen=True)
class StateIndicator:
    r: int
    flow_type = Cyclic

    @property
    def label(self):
        return f"state:{self.r}"

    def value(self, flow, x):
        return 1.0 if x == self.r else 0.0

    def evaluate(self, flow, xs):
        return (np.asarray(xs) == self.r).astype(np.float64)

    def space_average(self, flow):
        return 1.0 / flow.q


@dataclass(frozen=True)
class DenjoyHarmonic:
    """Harmonic of the embedded circle coordinate of a Denjoy point."""

    h: int
    part: str = "re"
    flow_type = Denjoy

    def __post_init__(self):
        if self.h == 0 or self.part not in ("re", "im"):
            raise ValueError("harmonic needs h != 0 and part 're' or 'im'")

    @property
    def label(self):
        return f"denharm:{self.h}:{self.part}"

    def _f(self, phi):
        ang = self.h * np.asarray(phi)
        return np.cos(TWO_PI * ang) if self.part == "re" else np.sin(TWO_PI * ang)

    def value(self, flow, x):
        return float(self._f(flow.embed(x)))

    def evaluate(self, flow, xs):
        return self._f(flow.embed_batch(xs))

    def space_average(self, flow, nodes=QUADRATURE_NODES):
        # Lebesgue on the base circle pushed forward by the embedding
        # midpoints (2j + 1) / (2 nodes) as 128-bit fractions; nodes is a power of two <= 2**63
        shift = 127 - int(math.log2(nodes))
        if nodes & (nodes - 1) or shift < 64:
            raise ValueError("nodes must be a power of two below 2**64")
        hi = (2 * np.arange(nodes, dtype=np.uint64) + np.uint64(1)) << np.uint64(shift - 64)
        xs = DenjoyBatch(hi, np.zeros(nodes, dtype=np.uint64), np.zeros(nodes, dtype=bool))
        return kahan_sum(self.evaluate(flow, xs)) / nodes


def parse_observable(text):
    t = text.strip()
    kind, _, rest = t.partition(":")
    try:
        if kind == "harm":
            h, _, part = rest.partition(":")
            return Harmonic(int(h), part or "re")
        if kind == "denharm":
            h, _, part = rest.partition(":")
            return DenjoyHarmonic(int(h), part or "re")
        if kind == "cyl":
            return Cylinder(rest)
        if kind == "state":
            return StateIndicator(int(rest))
    except ValueError as exc:
        raise ValueError(f"bad observable {text!r}: {exc}") from None
    raise ValueError(f"unknown observable {text!r}")


def check_compatible(flow, obs):
    if not isinstance(flow, obs.flow_type):
        raise KindMismatchError(f"{obs.label} does not apply to {flow.kind}")


# --- flow-agnostic operations -------------------------------------------------------

def _check_point(flow, x):
    ok = isinstance(x, DenjoyPoint) if isinstance(flow, Denjoy) else isinstance(x, (int, np.integer))
    if not ok:
        raise KindMismatchError(f"point {x!r} does not belong to a {flow.kind} flow")


def iterate(flow, x, n):
    if n < 0:
        raise ValueError("n must be non-negative")
    _check_point(flow, x)
    return flow.iterate(x, n)


def observe(obs, flow, x):
    check_compatible(flow, obs)
    _check_point(flow, x)
    return obs.value(flow, x)


def space_average(flow, obs):
    check_compatible(flow, obs)
    return obs.space_average(flow)


def denjoy_embed(flow, x):
    if not isinstance(flow, Denjoy):
        raise KindMismatchError("denjoy_embed needs a Denjoy flow")
    return flow.embed(x)


def metric(flow, x, y):
    _check_point(flow, x)
    _check_point(flow, y)
    return flow.metric(x, y)


@dataclass
class ProbeReport:
    delta: float
    epsilon: float
    pairs_tested: int
    worst_exceptional_density: float
    worst_mean_distance: float


def _orbit_distances(flow, x, y, a):
    return flow.metric_batch(flow.orbit(x, a), flow.orbit(y, a))


def _probe(flow, a_values, delta, epsilon, pairs, n, seed, threads):
    a = _as_u64(a_values[:n])
    if len(a) < n:
        raise ValueError(f"{len(a)} sequence terms available, need {n}")
    if pairs < 1:
        raise ValueError("need at least one pair")

    def one(i):
        rng = SplitMix64.for_task(seed, i)
        x = flow.random_point(rng)
        y = flow.perturb(x, delta, rng)
        d = _orbit_distances(flow, x, y, a)
        bad = int(np.count_nonzero(d >= epsilon)) if epsilon is not None else 0
        return bad / n, kahan_sum(d) / n

    if threads > 1 and pairs > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            res = list(pool.map(one, range(pairs)))
    else:
        res = [one(i) for i in range(pairs)]
    return ProbeReport(
        delta,
        float("nan") if epsilon is None else epsilon,
        pairs,
        max(r[0] for r in res),
        max(r[1] for r in res),
    )


def mls_probe(flow, a_values, delta, epsilon, pairs, n, seed=0, threads=1):
    """Worst fraction of n <= N with d(f^{a_n} x, f^{a_n} y) >= epsilon over
    random pairs with d(x, y) < delta (one exceptional set per pair)."""
    return _probe(flow, a_values, delta, epsilon, pairs, n, seed, threads)


def meq_probe(flow, a_values, delta, pairs, n, seed=0, threads=1):
    """Worst Cesàro mean of d(f^{a_n} x, f^{a_n} y) over random close pairs."""
    return _probe(flow, a_values, delta, None, pairs, n, seed, threads)


def mean_attraction(flow, x, z, a_values, n):
    """(1/N) sum_{n<=N} d(f^{a_n} x, f^{a_n} z)."""
    _check_point(flow, x)
    _check_point(flow, z)
    a = _as_u64(a_values[:n])
    return kahan_sum(_orbit_distances(flow, x, z, a)) / n
