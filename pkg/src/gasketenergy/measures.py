"""Signed measures spanned by the three corner energy measures.

A measure is a coefficient triple ``(a0, a1, a2)`` against the corner basis;
the uniform triple ``(1, 1, 1)`` is the Kusuoka measure.  Exact cell masses
come from two independent recursions:

* the *mass route*: the word product of the mass generators applied to the
  level-1 mass triple ``(2, 2, 2)``;
* the *refine route*: starting from the level-1 child triple, each appended
  letter left-multiplies by the corresponding refine generator (the newest
  letter acts first on cells, so the transport matrix of a whole word is the
  product taken over the word reversed).

Both are exposed; tests and the verify suite insist they agree exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

from .core import (
    MASS_SCALED,
    REFINE_GENERATORS,
    Vec3,
    check_word,
    format_rational,
    mat_vec,
    parse_rational,
    vec_dot,
    vec_sum,
    word_matrix,
)

MeasureCoeffs = Vec3
CellTriple = Vec3

#: Coefficients of the Kusuoka measure (total mass 6).
KUSUOKA: MeasureCoeffs = (Fraction(1), Fraction(1), Fraction(1))

_LEVEL1_MASSES: Vec3 = (Fraction(2), Fraction(2), Fraction(2))


def parse_coeffs(text: str) -> MeasureCoeffs:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"coefficient text form needs three comma-separated values, got {text!r}")
    return tuple(parse_rational(p) for p in parts)  # type: ignore[return-value]


def format_coeffs(c: MeasureCoeffs) -> str:
    return ",".join(format_rational(x) for x in c)


def total_mass(c: MeasureCoeffs) -> Fraction:
    """Whole-gasket mass: each basis measure has total mass 2."""
    return 2 * vec_sum(c)


# ---------------------------------------------------------------------------
# cell evaluation
# ---------------------------------------------------------------------------

def basis_masses(word: str) -> Vec3:
    """Masses the three corner measures give to the addressed cell."""
    return mat_vec(word_matrix("mass", word), _LEVEL1_MASSES)


def subtree_coeffs(c: MeasureCoeffs, word: str) -> MeasureCoeffs:
    """Coefficients describing the measure inside the addressed cell.

    The triple ``r`` with ``r . basis_masses(u) = measure_of_cell(c, word + u)``
    for every suffix ``u`` -- i.e. the transpose word product applied to ``c``.
    """
    check_word(word)
    r = c
    for ch in word:
        m = MASS_SCALED[int(ch)]
        r = (
            (r[0] * m[0][0] + r[1] * m[1][0] + r[2] * m[2][0]) / 15,
            (r[0] * m[0][1] + r[1] * m[1][1] + r[2] * m[2][1]) / 15,
            (r[0] * m[0][2] + r[1] * m[1][2] + r[2] * m[2][2]) / 15,
        )
    return r


def measure_of_cell(c: MeasureCoeffs, word: str) -> Fraction:
    return vec_dot(c, basis_masses(word))


def children_triple(c: MeasureCoeffs, word: str) -> CellTriple:
    """Masses of the three children of the addressed cell (mass route)."""
    r = subtree_coeffs(c, word)
    return level1_from_coeffs(r)


def children_triple_via_refine(c: MeasureCoeffs, word: str) -> CellTriple:
    """Same triple by the refine recursion -- the cross-check route.

    Appending a letter to the cell word left-multiplies the triple by that
    letter's refine generator, so letters are folded in reading order with
    the generator acting on the left.
    """
    check_word(word)
    x = level1_from_coeffs(c)
    for ch in word:
        x = mat_vec(REFINE_GENERATORS[int(ch)], x)
    return x


def level1_from_coeffs(c: MeasureCoeffs) -> CellTriple:
    """Child masses of the whole gasket for coefficient triple ``c``."""
    s = vec_sum(c)
    return (
        Fraction(2, 5) * (s + 2 * c[0]),
        Fraction(2, 5) * (s + 2 * c[1]),
        Fraction(2, 5) * (s + 2 * c[2]),
    )


def selfsim_identity_gap(word: str, letter: int) -> Fraction:
    """Defect of the variable-weight self-similar identity; always 0.

    Compares the Kusuoka mass of the cell reached by applying map ``letter``
    *outside* the addressed cell against the weighted combination of the
    Kusuoka and corner masses of the cell itself.
    """
    if letter not in (0, 1, 2):
        raise ValueError(f"letter must be 0, 1 or 2, got {letter!r}")
    check_word(word)
    lhs = measure_of_cell(KUSUOKA, str(letter) + word)
    masses = basis_masses(word)
    rhs = Fraction(1, 15) * vec_sum(masses) + Fraction(12, 15) * masses[letter]
    return lhs - rhs


# ---------------------------------------------------------------------------
# positivity cone
# ---------------------------------------------------------------------------

def cone_value(c: MeasureCoeffs) -> Fraction:
    """The quadratic ``a0*a1 + a1*a2 + a0*a2`` whose sign decides positivity."""
    return c[0] * c[1] + c[1] * c[2] + c[0] * c[2]


def is_positive(c: MeasureCoeffs) -> bool:
    """Exact membership in the positive-measure cone.

    The quadratic ``cone_value >= 0`` carves out a double cone; the positive
    measures form the nappe with nonnegative coefficient sum (the other nappe
    is its negation).
    """
    return cone_value(c) >= 0 and vec_sum(c) >= 0


def find_negative_cell(c: MeasureCoeffs, max_depth: int = 10) -> Optional[str]:
    """Shortest (then lexicographically first) cell word with negative mass.

    Returns ``None`` when every cell down to ``max_depth`` has nonnegative
    mass.  Subtrees whose restricted coefficients already satisfy the cone
    test are skipped -- every cell below them is nonnegative.
    """
    if total_mass(c) < 0:
        return ""
    den = math.lcm(*(x.denominator for x in c))
    start = tuple(int(x * den) for x in c)
    # rows carry integer numerators of subtree_coeffs, scaled by den*15^depth
    frontier: list[tuple[str, tuple[int, int, int]]] = [("", start)]
    for _ in range(max_depth):
        next_frontier: list[tuple[str, tuple[int, int, int]]] = []
        for word, r in frontier:
            for j in (0, 1, 2):
                m = MASS_SCALED[j]
                rj = (
                    r[0] * m[0][0] + r[1] * m[1][0] + r[2] * m[2][0],
                    r[0] * m[0][1] + r[1] * m[1][1] + r[2] * m[2][1],
                    r[0] * m[0][2] + r[1] * m[1][2] + r[2] * m[2][2],
                )
                mass = rj[0] + rj[1] + rj[2]
                if mass < 0:
                    return word + str(j)
                if rj[0] * rj[1] + rj[1] * rj[2] + rj[0] * rj[2] >= 0:
                    continue  # positive inside: nothing negative below
                next_frontier.append((word + str(j), rj))
        frontier = next_frontier
        if not frontier:
            return None
    return None


# ---------------------------------------------------------------------------
# constructive decomposition into an orthogonal positive pair
# ---------------------------------------------------------------------------

def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def decompose_positive(c: MeasureCoeffs):
    """Write a positive measure as a convex combination of two boundary ones.

    Returns ``(t, p, q)`` with ``p`` and ``q`` exactly on the cone boundary,
    ``p + q`` a nonnegative multiple of the uniform triple (an orthogonal
    pair), and ``c = t*p + (1-t)*q``.  The construction intersects the line
    ``c + s*(1,1,1)`` with the cone boundary by solving
    ``3s^2 + 2(sum)s + (pair sum) = 0``; when the discriminant is a rational
    square everything stays exact, otherwise entries are floats accurate to
    well below 1e-12.
    """
    if not is_positive(c):
        raise ValueError(f"decompose_positive needs a positive measure, got {format_coeffs(c)}")
    sigma1 = vec_sum(c)
    sigma2 = cone_value(c)

    if sigma2 == 0:
        # already a single-harmonic (boundary) measure: keep it whole and
        # pair it with its orthogonal partner, which contributes nothing.
        scale = 2 * sigma1 / 3
        q = (scale - c[0], scale - c[1], scale - c[2])
        return Fraction(1), c, q

    if c[0] == c[1] == c[2]:
        kappa = c[0]
        p = (3 * kappa, Fraction(0), Fraction(0))
        q = (-kappa, 2 * kappa, 2 * kappa)
        return Fraction(1, 2), p, q

    disc = sigma1 * sigma1 - 3 * sigma2  # > 0 here (equality iff uniform)
    root = _rational_sqrt(disc)
    if root is not None:
        s_minus = (-sigma1 - root) / 3
        s_plus = (-sigma1 + root) / 3
        scale = sigma1 / root
        p = tuple(scale * (-(ci + s_minus)) for ci in c)
        q = tuple(scale * (ci + s_plus) for ci in c)
        t = (sigma1 - root) / (2 * sigma1)
        return t, p, q

    s1, rt = float(sigma1), math.sqrt(float(disc))
    cf = [float(x) for x in c]
    scale = s1 / rt
    s_minus = (-s1 - rt) / 3.0
    s_plus = (-s1 + rt) / 3.0
    p = tuple(scale * (-(ci + s_minus)) for ci in cf)
    q = tuple(scale * (ci + s_plus) for ci in cf)
    t = (s1 - rt) / (2.0 * s1)
    return t, p, q
