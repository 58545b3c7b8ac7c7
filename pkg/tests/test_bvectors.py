"""Cell-averaging weight triples and their three computation routes."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gasketenergy.bvectors import (
    a_values,
    b_from_kusuoka,
    b_from_mass,
    b_from_word,
    b_step,
    closed_form_b,
    disk_radius_sq,
    enumerate_bvectors,
    kusuoka_ratio,
    scan_bounds,
    weighted_average_gap,
)

words = st.text(alphabet="012", max_size=6)
rationals = st.fractions(min_value=-6, max_value=6, max_denominator=6)

THIRD = Fraction(1, 3)


def test_frozen_weight_triples():
    assert b_from_mass("") == (THIRD, THIRD, THIRD)
    assert b_from_mass("0") == (Fraction(3, 5), Fraction(1, 5), Fraction(1, 5))
    assert b_from_mass("00") == (Fraction(27, 41), Fraction(7, 41), Fraction(7, 41))
    assert b_from_mass("01") == (Fraction(7, 17), Fraction(9, 17), Fraction(1, 17))


@given(words)
def test_three_routes_agree(word):
    b = b_from_mass(word)
    assert b == b_from_word(word)
    assert b == b_from_kusuoka(word)


@given(words)
def test_weights_sum_to_one_inside_strict_bounds(word):
    b = b_from_mass(word)
    assert sum(b) == 1
    for x in b:
        assert 0 < x < Fraction(2, 3)
    assert disk_radius_sq(b) < Fraction(1, 6)


def test_step_has_corner_fixed_point():
    fp = (Fraction(2, 3), Fraction(1, 6), Fraction(1, 6))
    assert b_step(fp, 0) == fp
    assert b_step(fp, 1) != fp


def test_step_rejects_non_unit_sums():
    with pytest.raises(ValueError):
        b_step((THIRD, THIRD, THIRD + 1), 0)


@given(st.integers(min_value=0, max_value=2))
def test_step_from_center_frozen(j):
    out = b_step((THIRD, THIRD, THIRD), j)
    assert out[j] == Fraction(3, 5)
    assert sum(out) == 1


def test_closed_form_along_repeated_zero():
    assert closed_form_b(0) == (THIRD, THIRD, THIRD)
    assert closed_form_b(1) == (Fraction(3, 5), Fraction(1, 5), Fraction(1, 5))
    assert closed_form_b(2) == (Fraction(27, 41), Fraction(7, 41), Fraction(7, 41))
    for m in range(7):
        assert closed_form_b(m) == b_from_mass("0" * m)


def test_sharpness_radius_increases_toward_the_disk_rim():
    prev = None
    for m in range(9):
        r = disk_radius_sq(closed_form_b(m))
        assert r < Fraction(1, 6)
        if prev is not None:
            assert r > prev
        prev = r


def test_a_values_and_kusuoka_ratio_frozen():
    b = (Fraction(3, 5), Fraction(1, 5), Fraction(1, 5))
    a = a_values(b)
    assert a == (Fraction(13, 15), Fraction(1, 15), Fraction(1, 15))
    assert kusuoka_ratio(a[0]) == Fraction(41, 75)
    assert kusuoka_ratio(a[1]) == Fraction(17, 75)
    assert sum(kusuoka_ratio(x) for x in a) == 1


@given(
    st.tuples(rationals, rationals, rationals),
    st.text(alphabet="012", max_size=3),
)
@settings(max_examples=60)
def test_weighted_average_identity(c, word):
    assert weighted_average_gap(c, word) == 0


def test_bound_scan_finds_no_counterexample():
    assert scan_bounds(6) is None


def test_enumeration_is_lexicographic_and_complete():
    pairs = list(enumerate_bvectors(2))
    assert len(pairs) == 9
    assert [w for w, _ in pairs] == sorted(w for w, _ in pairs)
    for w, b in pairs:
        assert b == b_from_word(w)


def test_enumeration_rejects_negative_depth():
    with pytest.raises(ValueError):
        list(enumerate_bvectors(-1))
