import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pitman_a11.cartan import LAMBDA0, ZERO, Weight
from pitman_a11.characters import (
    EvalPoint,
    b_infinity_string_sum,
    ch_with_delta,
    demazure_character,
    denominator_product,
    denominator_sum,
    normalized_character,
    verma_character,
    verma_demazure_character,
    weyl_kac_character,
    weyl_kac_evaluation,
)
from pitman_a11.crystals import enumerate_b_lambda, omega_weight
from pitman_a11.stochastic.steps import stratum_counts


def string_sum(lam, h, N):
    return sum(math.exp(h.pair(lam - omega_weight(a))) for a in enumerate_b_lambda(lam, N))


def verma_euler_product(m, n_terms=4000):
    q = math.exp(-1 / m)
    n = np.arange(n_terms)
    return float(np.prod((1 - q ** (1 + 2 * n)) ** -2.0) * np.prod((1 - q ** (2 * (n + 1))) ** -1.0))


def test_trivial_weight_is_one():
    for m in (0.5, 2, 7):
        assert weyl_kac_character(ZERO, EvalPoint.rho_over(m)) == pytest.approx(1, abs=1e-14)
    assert weyl_kac_character(ZERO, EvalPoint(0.3, 0.7)) == pytest.approx(1, abs=1e-13)


def test_lambda0_against_distinct_partitions():
    # sum over B(Lambda_0) of q^{sum a}, with counts from prod (1 + x^k)
    for m in (1, 2, 5):
        q = math.exp(-1 / m)
        c = stratum_counts(400)
        ref = sum(int(c[s]) * q**s for s in range(401))
        assert weyl_kac_character(LAMBDA0, EvalPoint.rho_over(m)) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("lam", [LAMBDA0, Weight(2, Fraction(1, 2), 0)])
def test_duality_with_string_sum(lam):
    h = EvalPoint.rho_over(2)
    assert weyl_kac_character(lam, h) == pytest.approx(string_sum(lam, h, 40), rel=1e-5)


def test_duality_off_rho_direction():
    h = EvalPoint(0.5, 3.0)
    lam = Weight(3, Fraction(1, 2), 0)
    assert weyl_kac_character(lam, h) == pytest.approx(string_sum(lam, h, 40), rel=1e-9)


def test_large_m_paths_agree():
    # triple product along rho/m vs the mpmath theta ratio at a nearby off-direction point
    m = 20
    h = EvalPoint.rho_over(m)
    v = normalized_character(4, 1, h).value
    w = normalized_character(4, 1, EvalPoint(h.a * (1 + 1e-12), h.b)).value
    assert v == pytest.approx(w, rel=1e-9)


def test_highest_weight_lower_bound():
    h = EvalPoint.rho_over(3)
    for n in range(0, 6):
        for mp in range(n + 1):
            assert normalized_character(n, mp, h).value >= 1


def test_delta_shift():
    h = EvalPoint.rho_over(2)
    lam = Weight(2, Fraction(1, 2), 0)
    assert ch_with_delta(lam + Weight(0, 0, -3), h) == pytest.approx(
        math.exp(-3 * h.b) * weyl_kac_character(lam, h), rel=1e-14)
    with pytest.raises(ValueError):
        weyl_kac_character(lam + Weight(0, 0, 1), h)


def test_not_dominant_rejected():
    with pytest.raises(ValueError):
        weyl_kac_evaluation(Weight(1, 1, 0), EvalPoint.rho_over(2))
    with pytest.raises(ValueError):
        EvalPoint(0.1, 0.0)


@pytest.mark.parametrize("m", [1, 2, 5, 10])
def test_denominator_identity(m):
    h = EvalPoint.rho_over(m)
    p = denominator_product(h).value
    s = denominator_sum(h).value
    assert abs(p - float(s)) / abs(p) < 1e-10


@pytest.mark.parametrize("m", [1, 2, 5])
def test_verma_modes_and_euler_form(m):
    h = EvalPoint.rho_over(m)
    vals = [verma_character(h, mode, N=80 * m + 40) for mode in ("product", "string_sum", "inverse_denominator")]
    ref = verma_euler_product(m)
    for v in vals:
        assert float(v) == pytest.approx(ref, rel=1e-8)


def test_verma_product_tends_to_one():
    assert verma_character(EvalPoint.rho_over(0.02)) == pytest.approx(1, abs=1e-20)


def test_verma_string_sum_matches_brute_force():
    # direct enumeration of B(infinity) with sum <= 10
    def seqs(left, prefix):
        yield tuple(prefix)
        for v in range(1, left + 1):
            k = len(prefix)
            if k >= 2 and prefix[-1] * k < v * (k - 1):
                continue
            yield from seqs(left - v, prefix + [v])

    h = EvalPoint(0.37, 0.9)
    N = 10
    tot = 0.0
    for a in seqs(N, []):
        # pad with zeros: only a_0 can be followed by a zero then stop
        tot += math.exp(-h.pair(omega_weight(a)))
    # sequences starting with a_0 = 0 are covered since a_0 is free: add zero-leading ones
    for a in seqs(N, [0]):
        if a != (0,):
            tot += math.exp(-h.pair(omega_weight(a)))
    assert b_infinity_string_sum(h, N) == pytest.approx(tot, rel=1e-12)


def test_verma_demazure_examples():
    for m in (1, 2, 5):
        h = EvalPoint.rho_over(m)
        q = math.exp(-1 / m)
        assert verma_demazure_character(0, h) == pytest.approx(1 / (1 - q), rel=1e-12)
        assert verma_demazure_character(1, h) == pytest.approx(1 / (1 - q) ** 2, rel=1e-12)


def test_verma_demazure_monotone_to_verma():
    h = EvalPoint.rho_over(2)
    full = verma_character(h)
    r = [verma_demazure_character(p, h) / full for p in range(8)]
    assert all(x < y for x, y in zip(r, r[1:]))
    assert r[-1] < 1
    assert verma_demazure_character(60, h, N=200) / full == pytest.approx(1, rel=1e-9)


def test_demazure_examples_and_chain():
    h = EvalPoint.rho_over(2)
    q = math.exp(-0.5)
    assert demazure_character(LAMBDA0, 0, h, 30) == pytest.approx(1 + q, rel=1e-14)
    lam = Weight(2, Fraction(1, 2), 0)
    vals = [demazure_character(lam, p, h, 30) for p in range(6)]
    assert all(x <= y + 1e-12 for x, y in zip(vals, vals[1:]))
    assert vals[-1] <= weyl_kac_character(lam, h) * (1 + 1e-12)
    assert demazure_character(lam, 40, h, 30) == pytest.approx(string_sum(lam, h, 30), rel=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 8), st.integers(0, 8), st.sampled_from([1.0, 2.0, 5.0]))
def test_verma_majorization(n, mp, m):
    if mp > n:
        n, mp = mp, n
    h = EvalPoint.rho_over(m)
    assert normalized_character(n, mp, h).value <= verma_character(h) * (1 + 1e-12)
