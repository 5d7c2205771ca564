import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ubseq import fixed128 as fx
from ubseq._kernels import fnv1a64, kahan_sum
from ubseq.reduce import checkpoint_sums, geometric_checkpoints, parse_checkpoints, parse_count
from ubseq.rng import SplitMix64

u64 = st.integers(0, 2**64 - 1)
u128 = st.integers(0, 2**128 - 1)


def test_splitmix_reference_values():
    # published first outputs for seed 0
    r = SplitMix64(0)
    assert r.next_u64() == 0xE220A8397B1DCDAF
    assert r.next_u64() == 0x6E789E6AA1B965F4


@given(u64, st.integers(1, 2**70))
def test_below_in_range(seed, n):
    assert 0 <= SplitMix64(seed).below(n) < n


def test_task_streams_differ():
    a = [SplitMix64.for_task(7, i).next_u64() for i in range(100)]
    assert len(set(a)) == 100


def test_fnv1a_reference():
    assert int(fnv1a64(np.frombuffer(b"", dtype=np.uint8))) == 0xCBF29CE484222325
    assert int(fnv1a64(np.frombuffer(b"a", dtype=np.uint8))) == 0xAF63DC4C8601EC8C


@given(st.lists(u64, min_size=1, max_size=20), u128)
def test_mul_matches_python(ns, f):
    hi, lo = fx.mul(np.array(ns, dtype=np.uint64), f)
    for n, h, l in zip(ns, hi, lo):
        assert (int(h) << 64) | int(l) == (n * f) & fx.MASK128


@given(u64, u64)
def test_mulhi64(a, b):
    assert int(fx.mulhi64(np.uint64(a), np.uint64(b))) == (a * b) >> 64


@given(u128, u128)
def test_add_sub_neg(x, y):
    xh, xl = (np.array([v], dtype=np.uint64) for v in fx.split(x))
    yh, yl = (np.array([v], dtype=np.uint64) for v in fx.split(y))
    join = lambda hl: (int(hl[0][0]) << 64) | int(hl[1][0])
    assert join(fx.add(xh, xl, yh, yl)) == (x + y) & fx.MASK128
    assert join(fx.sub(xh, xl, yh, yl)) == (x - y) & fx.MASK128
    assert join(fx.neg(xh, xl)) == (-x) & fx.MASK128
    assert bool(fx.less(xh, xl, yh, yl)[0]) == (x < y)
    d = fx.circle_distance(xh, xl, yh, yl)[0]
    assert d == pytest.approx(fx.circle_distance_scalar(x, y), abs=1e-15)
    assert 0.0 <= d <= 0.5


def test_named_angles():
    assert fx.to_float(fx.golden()) == pytest.approx((math.sqrt(5) - 1) / 2, abs=1e-15)
    assert fx.to_float(fx.sqrt2m1()) == pytest.approx(math.sqrt(2) - 1, abs=1e-15)
    assert fx.from_ratio(1, 4) == 1 << 126


def test_unit_stays_below_one():
    top = np.array([2**64 - 1], dtype=np.uint64)
    assert fx.unit(top)[0] < 1.0
    assert fx.unit128(top, top)[0] < 1.0


def test_kahan_beats_naive():
    x = np.array([1.0] + [1e-16] * 10**5, dtype=np.float64)
    assert kahan_sum(x) == pytest.approx(1.0 + 1e-11, rel=1e-15)


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=3000), st.integers(1, 8))
def test_checkpoint_sums_thread_invariant(vals, threads):
    x = np.array(vals)
    cps = sorted({len(x), max(1, len(x) // 3), max(1, len(x) // 2)})
    base = checkpoint_sums(lambda s, e: x[s:e], cps, 1, chunk=64)
    again = checkpoint_sums(lambda s, e: x[s:e], cps, threads, chunk=64)
    assert base == again
    for n, v in zip(cps, base):
        assert v == pytest.approx(math.fsum(x[:n]), abs=1e-6)


def test_checkpoint_parsing():
    assert parse_count("1e7") == 10**7
    with pytest.raises(ValueError):
        parse_count("1.5")
    assert parse_checkpoints("10,20,30", 30) == [10, 20, 30]
    assert parse_checkpoints("geo:1000:10:3", 10**5) == [1000, 10000, 100000]
    assert geometric_checkpoints(10**4) == [1000, 3162, 10000]
    with pytest.raises(ValueError):
        parse_checkpoints("30,20", 30)
