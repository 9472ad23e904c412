from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st

from pitman_a11.cartan import ALPHA1, DELTA, LAMBDA0, ChamberPoint, Weight, pairing, RHOV
from pitman_a11.crystals import (
    RealStringSeq,
    enumerate_b_lambda,
    enumerate_stratum,
    member_b_infinity,
    member_b_lambda,
    member_gamma,
    omega_weight,
)
from pitman_a11.stochastic.steps import stratum_counts


def distinct_partition_counts(N):
    c = np.zeros(N + 1, dtype=object)
    c[0] = 1
    for k in range(1, N + 1):
        for n in range(N, k - 1, -1):
            c[n] += c[n - k]
    return list(c)


def test_member_b_infinity_examples():
    assert member_b_infinity(())
    assert member_b_infinity((5, 3, 1))
    assert not member_b_infinity((0, 1, 3))


def test_member_b_lambda_examples():
    assert member_b_lambda((1,), LAMBDA0)
    assert not member_b_lambda((1, 1), LAMBDA0)
    assert member_b_lambda((0, 1, 1), LAMBDA0)


def test_enumerate_small():
    assert enumerate_b_lambda(LAMBDA0, 0) == [()]
    assert sorted(enumerate_b_lambda(LAMBDA0, 2)) == sorted([(), (1,), (0, 1, 1)])


def test_counts_are_distinct_partitions():
    N = 30
    got = [0] * (N + 1)
    for a in enumerate_b_lambda(LAMBDA0, N):
        got[sum(a)] += 1
    assert got == distinct_partition_counts(N)
    assert list(stratum_counts(N)) == distinct_partition_counts(N)


def test_strata_agree_with_enumeration():
    full = enumerate_b_lambda(LAMBDA0, 12)
    for n in range(13):
        assert sorted(enumerate_stratum(LAMBDA0, n)) == sorted(a for a in full if sum(a) == n)


def test_enumeration_is_exhaustive_and_members():
    lam = Weight(2, Fraction(1, 2), 0)
    listed = set(enumerate_b_lambda(lam, 6))
    assert all(member_b_lambda(a, lam) for a in listed)

    def seqs(left, prefix):
        if prefix and prefix[-1] > 0:
            yield tuple(prefix)
        if len(prefix) >= 7:
            return
        for v in range(left + 1):
            yield from seqs(left - v, prefix + [v])

    brute = {()} | {a for a in seqs(6, []) if member_b_lambda(a, lam)}
    assert brute == listed


def test_nesting():
    small = set(enumerate_b_lambda(LAMBDA0, 8))
    big = set(enumerate_b_lambda(Weight(2, Fraction(1, 2), 0), 8))
    assert small <= big


@given(st.lists(st.integers(0, 6), max_size=6))
def test_omega_pairs_with_rho_to_total(a):
    assert pairing(omega_weight(a), RHOV) == sum(a)


def test_omega_examples():
    assert omega_weight((1,)) == DELTA - ALPHA1
    assert omega_weight((0, 1)) == ALPHA1


def test_member_gamma():
    assert member_gamma(RealStringSeq.of([]))
    assert member_gamma(RealStringSeq.of([0.3, 0.5, 0.2]))
    assert not member_gamma(RealStringSeq.of([0.0, 0.1, 0.5]))
    assert not member_gamma(RealStringSeq.of([-0.1]))
    lam = ChamberPoint(1.0, 0.5)
    assert member_gamma(RealStringSeq.of([0.2]), lam)


@settings(max_examples=50)
@given(st.lists(st.floats(0, 3), max_size=6))
def test_b_infinity_lattice_points_are_in_gamma(xs):
    a = [int(v) for v in xs]
    if member_b_infinity(a):
        assert member_gamma(RealStringSeq.of(a))
