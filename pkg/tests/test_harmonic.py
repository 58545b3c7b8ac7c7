"""Harmonic triples: extension, energies, pair measures, symmetry classes."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gasketenergy.core import VertexAddress
from gasketenergy.harmonic import (
    BASIS,
    Harmonic,
    SymmetryKind,
    cell_energy,
    classify_symmetry,
    complement_coeffs,
    energy_inner,
    extend_to_cell,
    format_harmonic,
    graph_energy,
    harmonic_vertex_values,
    level0_energy,
    measure_coeffs,
    oscillation,
    parse_harmonic,
    satisfies_skew_condition,
    total_energy_identity,
    vertex_value,
)
from gasketenergy.measures import cone_value

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
harmonics = st.builds(Harmonic, rationals, rationals, rationals)
words = st.text(alphabet="012", max_size=4)


def test_extension_rule_frozen():
    """One subdivision splits a corner value 2/5-2/5-1/5 with its neighbours."""
    assert extend_to_cell(Harmonic.of(1, 0, 0), "0") == Harmonic.of(1, Fraction(2, 5), Fraction(2, 5))
    assert extend_to_cell(Harmonic.of(0, 1, 0), "0") == Harmonic.of(0, Fraction(2, 5), Fraction(1, 5))
    assert extend_to_cell(Harmonic.of(1, 2, 3), "") == Harmonic.of(1, 2, 3)


@given(harmonics, words)
def test_extension_preserves_mean_bounds(h, word):
    lo, hi = min(h), max(h)
    ext = extend_to_cell(h, word)
    assert lo <= min(ext) and max(ext) <= hi


def test_level0_energy_of_basis():
    for h in BASIS:
        assert level0_energy(h) == 2
    assert level0_energy(Harmonic.of(1, 1, 1)) == 0


@given(harmonics)
@settings(max_examples=40)
def test_renormalized_graph_energy_is_constant(h):
    e0 = level0_energy(h)
    for m in (1, 2, 3):
        assert graph_energy(harmonic_vertex_values(h, m), m) == e0


@given(harmonics, harmonics)
def test_energy_inner_is_symmetric_bilinear(u, v):
    assert energy_inner(u, v) == energy_inner(v, u)
    w = Harmonic(u.v0 + v.v0, u.v1 + v.v1, u.v2 + v.v2)
    assert energy_inner(w, w) == energy_inner(u, u) + 2 * energy_inner(u, v) + energy_inner(v, v)


@given(harmonics, harmonics)
def test_pair_measure_total_is_half_energy(u, v):
    assert 2 * sum(measure_coeffs(u, v)) == energy_inner(u, v)
    assert total_energy_identity(u, v)


def test_basis_pair_coefficients_are_unit_vectors():
    for i, h in enumerate(BASIS):
        coeffs = measure_coeffs(h, h)
        assert coeffs == tuple(Fraction(1 if k == i else 0) for k in range(3))


@given(harmonics, words)
@settings(max_examples=40)
def test_cell_energy_splits_over_children(h, word):
    assert cell_energy(h, word) == sum(cell_energy(h, word + str(j)) for j in range(3))


def test_cell_energy_frozen_values():
    assert cell_energy(BASIS[0], "") == 2
    assert cell_energy(BASIS[0], "0") == Fraction(6, 5)
    assert cell_energy(BASIS[0], "1") == Fraction(2, 5)


@given(harmonics, words, st.integers(min_value=0, max_value=2))
def test_vertex_value_agrees_on_both_junction_spellings(h, word, i):
    j = (i + 1) % 3
    a = VertexAddress(word + str(i), j)
    b = VertexAddress(word + str(j), i)
    assert vertex_value(h, a) == vertex_value(h, b)


def test_oscillation_frozen():
    assert oscillation(Harmonic.of(1, 0, 0), "") == 1
    assert oscillation(Harmonic.of(1, 0, 0), "0") == Fraction(3, 5)
    assert oscillation(Harmonic.of(5, 5, 5), "012") == 0


@given(harmonics)
def test_complement_pairs_to_a_constant_vector(h):
    """The complement triple tops each coefficient up to the same constant
    and lands exactly on the cone boundary."""
    if h.is_constant():
        with pytest.raises(ValueError):
            complement_coeffs(h)
        return
    coeffs = measure_coeffs(h, h)
    comp = complement_coeffs(h)
    totals = {a + b for a, b in zip(coeffs, comp)}
    assert len(totals) == 1
    assert cone_value(comp) == 0


def test_symmetry_classification_frozen():
    assert classify_symmetry(Harmonic.of(3, 3, 3)).kind is SymmetryKind.CONSTANT
    sym = classify_symmetry(Harmonic.of(1, 0, 0))
    assert sym.kind is SymmetryKind.SYMMETRIC and sym.axis == 0
    skew = classify_symmetry(Harmonic.of(0, 1, -1))
    assert skew.kind is SymmetryKind.SKEW and skew.axis == 0
    assert classify_symmetry(Harmonic.of(0, 1, 3)).kind is SymmetryKind.NONE


@given(rationals, rationals)
def test_centered_offsets_classify_skew(c, a):
    if a == 0:
        return
    got = classify_symmetry(Harmonic(c, c + a, c - a))
    assert got.kind is SymmetryKind.SKEW and got.axis == 0
    assert satisfies_skew_condition(Harmonic(c, c + a, c - a), 0)


@given(harmonics)
def test_harmonic_text_round_trip(h):
    assert parse_harmonic(format_harmonic(h)) == h
