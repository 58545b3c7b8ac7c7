"""Unit-sum weight triples that average derivatives over a cell.

For every cell, the cell average of the derivative of a measure against the
Kusuoka measure equals a weighted average of the derivative's values at the
cell's three corners.  The weight triple depends only on the cell word and
is computable by three independent exact routes:

* column sums of the mass word product (``b_from_mass``),
* a one-letter rational recursion on the triple itself (``b_step``),
* Kusuoka mass ratios of the three child cells (``b_from_kusuoka``).

Route agreement is one of this package's strongest end-to-end checks.  The
triples live in a disk of squared radius 1/6 around the barycenter; the
bounds are strict at every finite word and sharp only in the limit, which
``scan_bounds`` verifies wholesale with integer arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Optional

from .core import MASS_SCALED, Vec3, VertexAddress, check_word, word_matrix
from .measures import KUSUOKA, MeasureCoeffs, measure_of_cell
from .derivatives import rn_derivative

#: A weight triple: three rationals summing to one.
BVector = Vec3

_THIRD = Fraction(1, 3)
_CENTER: BVector = (_THIRD, _THIRD, _THIRD)


def b_from_mass(word: str) -> BVector:
    """Weight triple of a cell from the column sums of its mass product.

    Weight j is 1/6 plus half the j-th column's share of the total entry
    sum.  The empty word gives the barycenter (1/3, 1/3, 1/3).
    """
    mat = word_matrix("mass", word)
    cols = tuple(mat[0][j] + mat[1][j] + mat[2][j] for j in range(3))
    total = cols[0] + cols[1] + cols[2]
    return tuple(Fraction(1, 6) + col / (2 * total) for col in cols)  # type: ignore[return-value]


def b_step(b: BVector, j: int) -> BVector:
    """Weight triple of the j-th child cell from the parent's triple.

    Accepts any exact unit-sum triple.  The denominator is 12*b_j + 1, which
    never vanishes on the closed disk of valid triples; a triple far enough
    outside it raises.
    """
    if j not in (0, 1, 2):
        raise ValueError(f"letter must be 0, 1 or 2, got {j!r}")
    if b[0] + b[1] + b[2] != 1:
        raise ValueError("b_step needs a unit-sum triple")
    k, l = (j + 1) % 3, (j + 2) % 3
    den = 12 * b[j] + 1
    if den == 0:
        raise ValueError("degenerate denominator: triple lies outside the weight disk")
    out = [Fraction(0)] * 3
    out[j] = 9 * b[j] / den
    out[k] = (2 * b[j] + 2 * b[k] - b[l]) / den
    out[l] = (2 * b[j] - b[k] + 2 * b[l]) / den
    return tuple(out)  # type: ignore[return-value]


def b_from_word(word: str) -> BVector:
    """Iterate ``b_step`` along the word from the barycenter (second route)."""
    check_word(word)
    b = _CENTER
    for ch in word:
        b = b_step(b, int(ch))
    return b


def b_from_kusuoka(word: str) -> BVector:
    """Weight triple from Kusuoka mass ratios of the three child cells.

    Weight j measures how much of the cell's Kusuoka mass the j-th child
    holds, recentered and scaled so a uniform split gives the barycenter:
    b_j = 1/3 + (5/4)(ratio_j - 1/3).
    """
    check_word(word)
    parent = measure_of_cell(KUSUOKA, word)
    out = []
    for j in range(3):
        ratio = measure_of_cell(KUSUOKA, word + str(j)) / parent
        out.append(_THIRD + Fraction(5, 4) * (ratio - _THIRD))
    return tuple(out)  # type: ignore[return-value]


def weighted_average_gap(c: MeasureCoeffs, word: str) -> Fraction:
    """Cell average of the derivative minus its corner weighted average.

    Identically zero: the weight triple is exactly the averaging kernel for
    derivatives of any (signed) measure in the coefficient space.
    """
    check_word(word)
    b = b_from_mass(word)
    average = measure_of_cell(c, word) / measure_of_cell(KUSUOKA, word)
    corners = sum(
        b[j] * rn_derivative(c, VertexAddress(word, j)) for j in range(3)
    )
    return average - corners


def a_values(b: BVector) -> Vec3:
    """Affine re-coordinates a_j = 2(b_j - 1/6); unit sum, squared sum < 1."""
    return tuple(2 * (x - Fraction(1, 6)) for x in b)  # type: ignore[return-value]


def kusuoka_ratio(a_j: Fraction) -> Fraction:
    """Child-to-parent Kusuoka mass ratio from one re-coordinate: (2/5)(a_j + 1/2)."""
    return Fraction(2, 5) * (a_j + Fraction(1, 2))


def closed_form_b(m: int) -> BVector:
    """Weight triple of the all-0s word of length m, in closed form.

    The leading weight is 2/3 - 2/(3(3^(2m)+1)); the other two split the
    remainder equally.  Approaches the disk boundary as m grows.
    """
    if m < 0:
        raise ValueError("depth must be nonnegative")
    b0 = Fraction(2, 3) - Fraction(2, 3 * (3 ** (2 * m) + 1))
    rest = (1 - b0) / 2
    return (b0, rest, rest)


def disk_radius_sq(b: BVector) -> Fraction:
    """Squared distance of a weight triple from the barycenter, coordinate-wise.

    Strictly below 1/6 for every cell's triple; tends to 1/6 along 0^m.
    """
    return sum((x - _THIRD) ** 2 for x in b)  # type: ignore[return-value]


def enumerate_bvectors(m: int) -> Iterator[tuple[str, BVector]]:
    """All level-m (word, weight triple) pairs in lexicographic word order.

    Exact; computed by recursion along the enumeration tree, so each step is
    a handful of small-denominator operations.
    """
    if m < 0:
        raise ValueError("depth must be nonnegative")

    def walk(word: str, b: BVector) -> Iterator[tuple[str, BVector]]:
        if len(word) == m:
            yield word, b
            return
        for j in (0, 1, 2):
            yield from walk(word + str(j), b_step(b, j))

    yield from walk("", _CENTER)


def _colsum_step(row: tuple[int, int, int], j: int) -> tuple[int, int, int]:
    m = MASS_SCALED[j]
    return (
        row[0] * m[0][0] + row[1] * m[1][0] + row[2] * m[2][0],
        row[0] * m[0][1] + row[1] * m[1][1] + row[2] * m[2][1],
        row[0] * m[0][2] + row[1] * m[1][2] + row[2] * m[2][2],
    )


def scan_bounds(max_level: int) -> Optional[str]:
    """Exhaustively verify the strict weight bounds up to a level.

    For every word of length <= max_level checks, in pure integer
    arithmetic on the scaled column sums (c_0, c_1, c_2) with total T:

    * 0 < b_j < 2/3          (as 0 < T + 3c_j and c_j < T),
    * sum (b_j - 1/3)^2 < 1/6  (as sum (3c_j - T)^2 < 6 T^2),
    * c_0c_1 + c_1c_2 + c_0c_2 > 0  (the column-sum cone that feeds the
      induction behind the first two).

    Returns the first offending word in lexicographic-by-prefix order, or
    None when every word passes.
    """
    if max_level < 0:
        raise ValueError("max_level must be nonnegative")

    def walk(row: tuple[int, int, int], budget: int) -> Optional[str]:
        c0, c1, c2 = row
        total = c0 + c1 + c2
        for cj in row:
            if total + 3 * cj <= 0 or cj >= total:
                return ""
        lhs = sum((3 * cj - total) ** 2 for cj in row)
        if lhs >= 6 * total * total:
            return ""
        if c0 * c1 + c1 * c2 + c0 * c2 <= 0:
            return ""
        if budget == 0:
            return None
        for j in (0, 1, 2):
            hit = walk(_colsum_step(row, j), budget - 1)
            if hit is not None:
                return str(j) + hit
        return None

    return walk((1, 1, 1), max_level)
