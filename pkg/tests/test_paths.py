import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pitman_a11.cartan import ALPHA1, DELTA, LAMBDA0, ZERO, Weight
from pitman_a11.crystals import enumerate_b_lambda
from pitman_a11.errors import InconclusiveHorizonError
from pitman_a11.paths import (
    PLPath,
    canonical_dominant,
    concatenate,
    dumps,
    evaluate,
    inverse_pitman,
    loads,
    pi0,
    pitman_transform,
    reconstruct_from_strings,
    string_coordinates,
)

HALF = Fraction(1, 2)


def test_evaluate():
    assert evaluate(pi0, HALF) == LAMBDA0 * HALF
    assert evaluate(pi0, 0) == ZERO


def test_path_invariants():
    with pytest.raises(ValueError):
        PLPath((0, 1), (LAMBDA0, LAMBDA0))
    with pytest.raises(ValueError):
        PLPath((0, 0), (ZERO, LAMBDA0))


def test_concatenate_end_and_horizon():
    p = concatenate(pi0, pi0)
    assert p.horizon == 2
    assert p.end == LAMBDA0 * 2
    assert evaluate(p, Fraction(3, 2)) == LAMBDA0 * Fraction(3, 2)


def test_pitman_example():
    p = PLPath.line(LAMBDA0 - ALPHA1 * HALF)
    q = pitman_transform(1, p)
    assert q.same_as(PLPath.line(LAMBDA0 + ALPHA1 * HALF))
    # already dominant for alpha_0
    assert pitman_transform(0, p).same_as(p)


def test_canonical_dominant_examples():
    assert canonical_dominant(pi0) == (pi0, ())
    p = PLPath.line(LAMBDA0 - ALPHA1 * HALF)
    d, a = canonical_dominant(p)
    assert d.same_as(PLPath.line(LAMBDA0 + ALPHA1 * HALF))
    assert a == (0, 1)
    d, a = canonical_dominant(inverse_pitman(0, 1, pi0))
    assert d.same_as(pi0) and a == (1,)


def test_reconstruct_examples():
    assert reconstruct_from_strings(pi0, ()).same_as(pi0)
    assert reconstruct_from_strings(pi0, (1,)).same_as(PLPath.line(LAMBDA0 + ALPHA1 - DELTA))


def test_inverse_pitman_infinite_needs_certificate():
    flat = PLPath.line(LAMBDA0, 4)  # <p, alpha_1^vee> stays 0
    with pytest.raises(InconclusiveHorizonError):
        inverse_pitman(1, 1, flat, math.inf)
    drift = PLPath.line(LAMBDA0 + ALPHA1 * HALF, 40)
    q = inverse_pitman(1, 1, drift, math.inf)
    assert q.end == drift.end - ALPHA1
    assert canonical_dominant(q)[0].same_as(drift)


@pytest.mark.parametrize("a", enumerate_b_lambda(LAMBDA0, 6))
def test_round_trip_exact(a):
    p = reconstruct_from_strings(pi0, a)
    d, b = canonical_dominant(p)
    assert b == a
    assert d.same_as(pi0)


def test_dumps_loads_round_trip():
    p = reconstruct_from_strings(pi0, (0, 1, 1))
    assert loads(dumps(p)) == p


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([(1, 0), (1, 1), (1, -1), (0, 1), (0, -1)]), min_size=1, max_size=6))
def test_pitman_output_is_dominant_for_its_root(steps):
    """P_i(p) has nonnegative alpha_i pairing and the same endpoint mod alpha_i."""
    ts, vs = [0], [ZERO]
    for k, (l, x) in enumerate(steps, 1):
        ts.append(k)
        vs.append(vs[-1] + Weight(l, Fraction(x, 2), 0))
    p = PLPath(tuple(ts), tuple(vs))
    for i in (0, 1):
        q = pitman_transform(i, p)
        assert min(q.pairings(i)) >= 0
        assert (q.end - p.end).cL == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 8).flatmap(lambda n: st.sampled_from(enumerate_b_lambda(LAMBDA0, n))))
def test_strings_of_reconstruction(a):
    assert string_coordinates(reconstruct_from_strings(pi0, a)) == a
