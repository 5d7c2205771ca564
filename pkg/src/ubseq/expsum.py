"""Exponential sums, distribution tests and densities."""

import math
import re
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import fixed128 as fx
from .arithseq import IndicatorSequence, Subsequence
from .errors import SequenceError
from .reduce import checkpoint_sums, geometric_checkpoints

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Theta:
    """An angle in [0, 1): exact rational p/q, or a 128-bit fraction."""

    p: int = 0
    q: int = 0
    frac: int = 0
    name: str = ""

    @classmethod
    def rational(cls, p, q, name=""):
        if q <= 0:
            raise ValueError("q must be positive")
        p %= q
        g = math.gcd(p, q)
        return cls(p // g, q // g, 0, name)

    @classmethod
    def fixed(cls, frac, name=""):
        return cls(0, 0, frac & fx.MASK128, name)

    @property
    def is_rational(self):
        return self.q > 0

    @property
    def fixed_value(self):
        """128-bit fraction (truncated unless q is a power of two)."""
        return fx.from_ratio(self.p, self.q) if self.is_rational else self.frac

    @property
    def value(self):
        return self.p / self.q if self.is_rational else fx.to_float(self.frac)

    @property
    def is_zero(self):
        return self.p == 0 if self.is_rational else self.frac == 0

    def times(self, h):
        """h * theta mod 1, in the same representation."""
        if self.is_rational:
            return Theta.rational(h * self.p, self.q)
        return Theta.fixed(h * self.frac)

    def __str__(self):
        if self.name:
            return self.name
        if self.is_rational:
            return f"rat:{self.p}/{self.q}"
        return f"fix:{self.frac:032x}"


NAMED_THETAS = {"golden": fx.golden, "sqrt2m1": fx.sqrt2m1}


def theta_parse(text):
    """``rat:p/q``, ``fix:<32 hex digits>``, ``golden`` or ``sqrt2m1``."""
    t = text.strip()
    if t in NAMED_THETAS:
        return Theta.fixed(NAMED_THETAS[t](), t)
    m = re.fullmatch(r"rat:(\d+)/(\d+)", t)
    if m:
        p, q = int(m.group(1)), int(m.group(2))
        if q == 0 or not 0 < p < q:
            raise ValueError(f"rational angle must lie in (0, 1): {text!r}")
        return Theta.rational(p, q)
    m = re.fullmatch(r"fix:([0-9a-fA-F]{32})", t)
    if m:
        frac = int(m.group(1), 16)
        if frac == 0:
            raise ValueError("fixed-point angle must lie in (0, 1)")
        return Theta.fixed(frac)
    raise ValueError(f"malformed angle {text!r}")


@lru_cache(maxsize=64)
def _roots(q):
    k = np.arange(q, dtype=np.float64)
    roots = np.exp(1j * TWO_PI * k / q)
    # exact values at quarter turns so that e.g. theta = 1/2 cancels exactly
    quarter = (4 * np.arange(q)) % q == 0
    roots[quarter] = np.array([1, 1j, -1, -1j])[(4 * np.arange(q)[quarter]) // q]
    return roots


def phases(values, theta):
    """e(a * theta) for every a in ``values`` (uint64)."""
    a = np.asarray(values, dtype=np.uint64)
    if theta.is_rational:
        q = np.uint64(theta.q)
        idx = ((a % q) * np.uint64(theta.p)) % q
        return _roots(theta.q)[idx.astype(np.intp)]
    hi, _ = fx.mul(a, theta.frac)
    ang = fx.unit(hi)
    return np.cos(TWO_PI * ang) + 1j * np.sin(TWO_PI * ang)


def unit_points(values, theta):
    """frac(a * theta) in [0, 1)."""
    a = np.asarray(values, dtype=np.uint64)
    if theta.is_rational:
        q = np.uint64(theta.q)
        return ((a % q) * np.uint64(theta.p) % q).astype(np.float64) / theta.q
    hi, _ = fx.mul(a, theta.frac)
    return fx.unit(hi)


@dataclass
class WeylSeries:
    checkpoints: list
    values: np.ndarray
    theta: Theta
    sequence_label: str = ""

    @property
    def final(self):
        return complex(self.values[-1])


def _check_length(values, checkpoints):
    if not checkpoints:
        raise ValueError("need at least one checkpoint")
    if checkpoints[-1] > len(values):
        raise SequenceError(f"{len(values)} terms available, checkpoint {checkpoints[-1]}")


def weyl_series(values, theta, checkpoints, label="", threads=1):
    """(1/N) sum_{n<=N} e(a_n theta) at each checkpoint N."""
    _check_length(values, checkpoints)
    sums = checkpoint_sums(lambda s, e: phases(values[s:e], theta), checkpoints, threads)
    vals = np.array([s / n for s, n in zip(sums, checkpoints)], dtype=np.complex128)
    return WeylSeries(list(checkpoints), vals, theta, label)


def restricted_weyl_series(values, mask, theta, checkpoints, label="", threads=1):
    """(1/N) sum_{n<=N, mask[n]} e(a_n theta); normalised by N, not by the mask count."""
    _check_length(values, checkpoints)
    if mask.max_n < checkpoints[-1]:
        raise SequenceError("mask does not cover the checkpoint range")

    def terms(s, e):
        return phases(values[s:e], theta) * mask.bits[s + 1 : e + 1]

    sums = checkpoint_sums(terms, checkpoints, threads)
    vals = np.array([s / n for s, n in zip(sums, checkpoints)], dtype=np.complex128)
    return WeylSeries(list(checkpoints), vals, theta, label)


# --- sup of weighted exponential sums -------------------------------------

def farey(order):
    """All p/q in [0, 1) with q <= order, in lowest terms."""
    out = []
    for q in range(1, order + 1):
        for p in range(q):
            if math.gcd(p, q) == 1:
                out.append(Theta.rational(p, q))
    return out


def default_grid(farey_order=32, offsets=256):
    """Farey fractions plus equally spaced fixed-point angles shifted by golden/2."""
    shift = fx.golden() >> 1
    grid = farey(farey_order)
    for j in range(offsets):
        grid.append(Theta.fixed(fx.from_ratio(j, offsets) + shift))
    return grid


def _weights_array(weights):
    w = np.asarray(weights)
    if not np.all((w == 1) | (w == -1)):
        raise ValueError("weights must be +1 or -1")
    return w.astype(np.int64)


def sup_profile_series(weights, grid, ns, block=1024):
    """For each N in ``ns``: (N, max over grid of |sum_{n<=N} c_n e(n theta)|, argmax)."""
    c = _weights_array(weights)
    ns = [int(n) for n in ns]
    if not grid:
        raise ValueError("theta grid is empty")
    if ns[-1] > len(c):
        raise SequenceError("not enough weights")
    by_q = {}
    fixed = []
    for th in grid:
        if th.is_rational:
            by_q.setdefault(th.q, []).append(th)
        else:
            fixed.append(th)
    best = [(-1.0, None) for _ in ns]

    def consider(i, vals, thetas):
        k = int(np.argmax(vals))
        if vals[k] > best[i][0]:
            best[i] = (float(vals[k]), thetas[k])

    # rational angles: exact residue-class sums of weights
    for q, thetas in sorted(by_q.items()):
        ps = np.array([t.p for t in thetas], dtype=np.int64)
        r = np.arange(q, dtype=np.int64)
        rot = np.exp(1j * TWO_PI * ((np.outer(ps, r) % q) / q))
        acc = np.zeros(q, dtype=np.int64)
        prev = 0
        for i, n in enumerate(ns):
            idx = np.arange(prev + 1, n + 1, dtype=np.int64) % q
            acc += np.bincount(idx, weights=c[prev:n], minlength=q).astype(np.int64)
            prev = n
            consider(i, np.abs(rot @ acc.astype(np.float64)), thetas)

    # irrational surrogates: block sums e((n0+1)theta) * sum_k c_{n0+k+1} e(k theta)
    if fixed:
        fr = [t.frac for t in fixed]
        f_hi = np.array([f >> 64 for f in fr], dtype=np.uint64)
        f_lo = np.array([f & fx.MASK64 for f in fr], dtype=np.uint64)
        k = np.arange(block, dtype=np.uint64)
        local = np.empty((block, len(fixed)), dtype=np.complex128)
        for j, f in enumerate(fr):
            local[:, j] = phases(k, Theta.fixed(f))
        total = np.zeros(len(fixed), dtype=np.complex128)
        pos = 0
        for i, n in enumerate(ns):
            while pos < n:
                stop = min(pos + block, n)
                m = np.uint64(pos + 1)
                ang = fx.unit(m * f_hi + fx.mulhi64(m, f_lo))
                lead = np.cos(TWO_PI * ang) + 1j * np.sin(TWO_PI * ang)
                w = c[pos:stop].astype(np.float64)
                total += lead * (w[:, None] * local[: stop - pos]).sum(axis=0)
                pos = stop
            consider(i, np.abs(total), fixed)
    return [(n, b[0], b[1]) for n, b in zip(ns, best)]


def sup_profile(weights, grid, n):
    """(max over grid of |sum_{k<=n} c_k e(k theta)|, argmax theta)."""
    _, value, arg = sup_profile_series(weights, grid, [n])[0]
    return value, arg


@dataclass
class RateFit:
    slope: float
    intercept: float
    r_squared: float


def rate_fit(points):
    """Least squares of log(value) against log(N)."""
    pts = list(points)
    if len(pts) < 4:
        raise ValueError("rate_fit needs at least 4 points")
    x = np.array([p[0] for p in pts], dtype=np.float64)
    y = np.array([p[1] for p in pts], dtype=np.float64)
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("rate_fit needs positive values")
    lx, ly = np.log(x), np.log(y)
    mx, my = lx.mean(), ly.mean()
    sxx = np.sum((lx - mx) ** 2)
    slope = float(np.sum((lx - mx) * (ly - my)) / sxx)
    intercept = float(my - slope * mx)
    resid = ly - (intercept + slope * lx)
    sst = float(np.sum((ly - my) ** 2))
    r2 = 1.0 if sst == 0 else max(0.0, min(1.0, 1.0 - float(np.sum(resid**2)) / sst))
    return RateFit(slope, intercept, r2)


# --- uniform distribution mod 1 ----------------------------------------------

def discrepancy_star(points):
    """Star discrepancy of points in [0, 1)."""
    x = np.sort(np.asarray(points, dtype=np.float64))
    n = len(x)
    if n == 0:
        raise ValueError("no points")
    i = np.arange(1, n + 1, dtype=np.float64)
    return float(max(np.max(i / n - x), np.max(x - (i - 1) / n)))


@dataclass
class RdReport:
    theta: Theta
    averages: list  # |(1/N) sum e(h a_n theta)| for h = 1..h_max
    discrepancy: float
    passed: bool


def rd_test(values, thetas, n, tolerance=0.05, h_max=3, threads=1):
    """Weyl averages for h = 1..h_max and the star discrepancy of frac(a_n theta)."""
    if any(t.is_rational for t in thetas):
        raise ValueError("rd_test needs irrational (fixed-point) angles")
    a = np.asarray(values[:n], dtype=np.uint64)
    if len(a) < n:
        raise SequenceError(f"{len(a)} terms available, need {n}")
    out = []
    for th in thetas:
        avgs = [abs(weyl_series(a, th.times(h), [n], threads=threads).final)
                for h in range(1, h_max + 1)]
        disc = discrepancy_star(unit_points(a, th))
        out.append(RdReport(th, avgs, disc, max(avgs) < tolerance and disc < tolerance))
    return out


# --- densities ---------------------------------------------------------------

@dataclass
class DensityReport:
    modulus: int
    densities: np.ndarray
    n: int


def residue_densities(values, m, checkpoints):
    """Fraction of n <= N with a_n = r (mod m), for each checkpoint N."""
    if m < 2:
        raise ValueError("modulus must be at least 2")
    _check_length(values, checkpoints)
    counts = np.zeros(m, dtype=np.int64)
    prev = 0
    out = []
    mm = np.uint64(m)
    for n in checkpoints:
        seg = np.asarray(values[prev:n], dtype=np.uint64) % mm
        counts += np.bincount(seg.astype(np.intp), minlength=m)
        prev = n
        out.append(DensityReport(m, counts / n, n))
    return out


@dataclass
class DensityEstimate:
    upper: float
    lower: float
    series: list = field(default_factory=list)  # (N, count/N)


def _tail_estimate(series):
    tail = [v for _, v in series[len(series) // 2:]]
    return DensityEstimate(max(tail), min(tail), series)


def densities(ind, checkpoints):
    """count(E ∩ [1, N]) / N; upper/lower are max/min over the tail half."""
    if checkpoints[-1] > ind.max_n:
        raise SequenceError("indicator does not cover the checkpoint range")
    counts = ind.counts_at(checkpoints)
    return _tail_estimate([(n, c / n) for n, c in zip(checkpoints, counts)])


def a_density(a_values, ind, checkpoints):
    """#{n <= N : a_n in E} / N, counting with multiplicity."""
    _check_length(a_values, checkpoints)
    a = np.asarray(a_values[: checkpoints[-1]], dtype=np.uint64)
    if len(a) and int(a.max()) > ind.max_n:
        raise SequenceError(
            f"a_n reaches {int(a.max())} beyond indicator range {ind.max_n} (counted-range truncation)"
        )
    hit = ind.bits[a.astype(np.intp)]
    cum = np.cumsum(hit, dtype=np.int64)
    return [(n, int(cum[n - 1]) / n) for n in checkpoints]


@dataclass
class DadReport:
    lhs: float
    rhs: float
    upper_density_e: float
    lower_density_a: float
    holds: bool


def prop_dad_check(a, ind, n, slack=0.02):
    """Finite-N check of  a-upper density of E <= upper density of E / lower density of a."""
    vals = a.values if isinstance(a, Subsequence) else np.asarray(a, dtype=np.uint64)
    if len(vals) < n:
        raise SequenceError(f"subsequence has {len(vals)} terms, need {n}")
    vals = vals[:n]
    a_n = int(vals[-1])
    cps = geometric_checkpoints(n)
    lhs = _tail_estimate(a_density(vals, ind, cps)).upper
    range_cps = geometric_checkpoints(a_n)
    upper_e = densities(ind, range_cps).upper
    a_ind = IndicatorSequence.from_members(vals, a_n, "a")
    lower_a = densities(a_ind, range_cps).lower
    if lower_a <= 0:
        raise SequenceError("lower density estimate of a is zero")
    rhs = upper_e / lower_a
    return DadReport(lhs, rhs, upper_e, lower_a, lhs <= rhs + slack)


# --- number theory panel -------------------------------------------------------

@dataclass
class PanelSeries:
    checkpoints: list
    liouville_mean: np.ndarray
    mertens_mean: np.ndarray
    pnt_ratio: np.ndarray


def number_theory_panel(table, checkpoints):
    """(1/N) sum lambda, (1/N) sum mu and pi(N) log N / N at each checkpoint."""
    if checkpoints[-1] > table.max_n:
        raise SequenceError("table does not cover the checkpoint range")
    lam = np.cumsum(table.liouville, dtype=np.int64)
    mu = np.cumsum(table.mobius, dtype=np.int64)
    pi = np.cumsum(table.big_omega == 1, dtype=np.int64)
    ns = np.array(checkpoints, dtype=np.int64)
    nf = ns.astype(np.float64)
    return PanelSeries(
        list(checkpoints),
        lam[ns] / nf,
        mu[ns] / nf,
        pi[ns] * np.log(nf) / nf,
    )


def finite_transfer_identity_check(ind, theta, n, threads=1):
    """|sum_{m<=a_N} t_m e(m theta) - sum_{k<=N} e(a_k theta)|; zero up to rounding."""
    members = ind.members()
    if len(members) < n:
        raise SequenceError(f"{ind.name} has {len(members)} members, need {n}")
    a = members[:n]
    a_n = int(a[-1])

    def masked(s, e):
        m = np.arange(s + 1, e + 1, dtype=np.uint64)
        return phases(m, theta) * ind.bits[s + 1 : e + 1]

    lhs = checkpoint_sums(masked, [a_n], threads)[0]
    rhs = checkpoint_sums(lambda s, e: phases(a[s:e], theta), [n], threads)[0]
    return abs(lhs - rhs)
