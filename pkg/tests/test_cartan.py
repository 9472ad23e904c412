from fractions import Fraction

from hypothesis import given, strategies as st

from pitman_a11.cartan import (
    ALPHA0,
    ALPHA0V,
    ALPHA1,
    ALPHA1V,
    DELTA,
    LAMBDA0,
    RHO,
    ChamberPoint,
    Weight,
    in_caff,
    invariant_form,
    is_dominant,
    pairing,
    project_mod_delta,
    reflect,
    translate,
)

fracs = st.fractions(min_value=-20, max_value=20, max_denominator=6)
weights = st.builds(Weight, fracs, fracs, fracs)


def test_pairing_table():
    assert pairing(ALPHA1, ALPHA1V) == 2
    assert pairing(DELTA, ALPHA0V) == 0
    assert pairing(RHO, ALPHA0V) == 1
    assert pairing(RHO, ALPHA1V) == 1
    assert pairing(ALPHA0, ALPHA0V) == 2
    assert pairing(ALPHA0, ALPHA1V) == -2


def test_reflect_examples():
    assert reflect(1, ALPHA1) == -ALPHA1
    assert reflect(0, LAMBDA0) == LAMBDA0 + ALPHA1 - DELTA


def test_translate_examples():
    w = Weight(3, Fraction(1, 2), 2)
    assert translate(0, w) == w
    assert translate(1, LAMBDA0) == LAMBDA0 + ALPHA1 - DELTA


def test_project_mod_delta():
    assert project_mod_delta(LAMBDA0) == ChamberPoint(1, 0)
    assert project_mod_delta(DELTA) == ChamberPoint(0, 0)
    assert project_mod_delta(LAMBDA0 + ALPHA1 - DELTA) == ChamberPoint(1, 2)


def test_dominance_and_chamber():
    assert is_dominant(LAMBDA0) and is_dominant(RHO)
    assert not is_dominant(ALPHA1)
    assert in_caff(ChamberPoint(1, 0.5))
    assert not in_caff(ChamberPoint(1, 1.5))


@given(weights, st.integers(0, 1))
def test_reflection_is_involution(w, i):
    assert reflect(i, reflect(i, w)) == w


@given(weights, weights, st.integers(0, 1))
def test_reflection_preserves_form(u, v, i):
    assert invariant_form(reflect(i, u), reflect(i, v)) == invariant_form(u, v)


@given(weights, st.integers(-4, 4), st.integers(-4, 4))
def test_translations_compose(w, j, k):
    assert translate(j, translate(k, w)) == translate(j + k, w)


@given(weights, st.integers(-4, 4))
def test_translation_preserves_level_and_form(w, k):
    t = translate(k, w)
    assert t.level == w.level
    assert invariant_form(t, t) == invariant_form(w, w)
