import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ubseq.arithseq import (
    IndicatorSequence,
    additivity_check,
    automatic_bit,
    automatic_bits,
    automatic_indicator,
    build_sieve_tables,
    indicator_for,
    multiplicativity_check,
    parse_sequence_spec,
    sequence_values,
    subsequence_of,
)
from ubseq.errors import CapacityError, SequenceError


def factor(n):
    """Trial division oracle: list of prime factors with multiplicity."""
    out, p = [], 2
    while p * p <= n:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def test_sieve_matches_trial_division(small_table):
    t = small_table
    for n in range(1, 2001):
        f = factor(n)
        sq = len(f) == len(set(f))
        assert t.big_omega[n] == len(f)
        assert t.small_omega[n] == len(set(f))
        assert t.squarefree[n] == sq
        assert t.mobius[n] == ((-1) ** len(f) if sq else 0)


def test_sieve_examples():
    t = build_sieve_tables(30)
    assert (t.big_omega[12], t.small_omega[12], t.mobius[12], t.squarefree[12]) == (3, 2, 0, False)
    assert t.mobius[30] == -1 and t.squarefree[30]
    assert t.mobius[1] == 1 and t.big_omega[1] == 0


def test_sieve_rejects_bad_sizes():
    with pytest.raises(ValueError):
        build_sieve_tables(0)
    with pytest.raises(CapacityError):
        build_sieve_tables(10**8, budget=10**6)


def test_mu_squared_convolution(table):
    # mu^2(n) = sum_{d^2 | n} mu(d), exactly, for every n <= 10^5
    n = table.max_n
    acc = np.zeros(n + 1, dtype=np.int64)
    for d in range(1, math.isqrt(n) + 1):
        acc[d * d :: d * d] += table.mobius[d]
    assert np.array_equal(acc[1:], table.squarefree[1:].astype(np.int64))


def test_prefix_is_consistent(table):
    p = table.prefix(1000)
    assert p.max_n == 1000
    assert np.array_equal(p.big_omega, table.big_omega[:1001])


def test_automatic_examples():
    assert [automatic_bit("tm", n) for n in range(8)] == [0, 1, 1, 0, 1, 0, 0, 1]
    assert automatic_bit("rs", 3) == 0 and automatic_bit("rs", 7) == 1
    assert list(automatic_indicator("tm", 8).members()) == [1, 2, 4, 7, 8]


@given(st.integers(0, 2**40))
def test_tm_recurrences(n):
    assert automatic_bit("tm", 2 * n) == automatic_bit("tm", n)
    assert automatic_bit("tm", 2 * n + 1) == 1 - automatic_bit("tm", n)


@given(st.integers(0, 2**40))
def test_rs_recurrences(n):
    # r(2n) = r(n), r(4n+1) = r(n), r(4n+3) flips r(2n+1)
    f = lambda k: automatic_bit("rs", k)
    assert f(2 * n) == f(n)
    assert f(4 * n + 1) == f(n)
    assert f(4 * n + 3) != f(2 * n + 1)


def test_automatic_bits_vector_matches_scalar():
    for kind in ("tm", "rs"):
        bits = automatic_bits(kind, 5000)
        assert all(bits[n] == automatic_bit(kind, n) for n in range(5000))


def test_indicator_prefixes(table):
    assert list(indicator_for("ef", table).members()[:5]) == [1, 4, 6, 9, 10]
    assert list(indicator_for("efsf", table).members()[:5]) == [1, 6, 10, 14, 15]
    assert list(indicator_for("of", table).members()[:4]) == [2, 3, 5, 7]


@settings(max_examples=50)
@given(st.lists(st.integers(1, 500), max_size=40), st.integers(1, 500))
def test_count_matches_members(members, n):
    ind = IndicatorSequence.from_members(members, 500, "x")
    assert ind.count(n) == len({m for m in members if m <= n})
    assert ind.count() == len(ind.members())


def test_empty_subsequence_raises():
    with pytest.raises(SequenceError):
        subsequence_of(IndicatorSequence.from_members([], 10))


def test_sequence_values(table):
    assert list(sequence_values(parse_sequence_spec("poly:0,0,1"), 3)) == [1, 4, 9]
    assert list(sequence_values(parse_sequence_spec("n"), 3)) == [1, 2, 3]
    om = sequence_values(parse_sequence_spec("omega"), 12, table)
    assert om[11] == 3
    sf = sequence_values(parse_sequence_spec("sf"), 5, table)
    assert list(sf) == [1, 2, 3, 5, 6]
    tm = sequence_values(parse_sequence_spec("tm"), 10**4)
    assert len(tm) == 10**4 and np.all(np.diff(tm.astype(np.int64)) > 0)


def test_sequence_errors(table):
    with pytest.raises(SequenceError):
        parse_sequence_spec("bogus")
    with pytest.raises(SequenceError):
        sequence_values(parse_sequence_spec("sf"), 10**5, table)
    with pytest.raises(OverflowError):
        sequence_values(parse_sequence_spec("poly:0,0,0,0,1"), 10**5)


def test_sequence_file(tmp_path):
    p = tmp_path / "a.txt"
    p.write_text("3\n1\n4\n1\n5\n")
    vals = sequence_values(parse_sequence_spec(f"file:{p}"), 4)
    assert list(vals) == [3, 1, 4, 1]


def test_laws(table):
    assert additivity_check(table.big_omega, 2000).violations == 0
    rep = additivity_check(table.small_omega, 2000)
    assert rep.violations > 0 and len(rep.witnesses) <= 20
    assert additivity_check(table.small_omega, 2000, coprime=True).violations == 0
    assert multiplicativity_check(table.mobius, 2000, coprime=True).violations == 0
    assert multiplicativity_check(table.liouville, 2000).violations == 0
