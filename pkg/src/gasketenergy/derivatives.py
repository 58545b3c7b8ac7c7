"""Derivatives of energy measures against the Kusuoka measure, at vertices.

The derivative of a coefficient-triple measure at an addressed vertex has two
independent exact closed forms:

* pair the children triple of the vertex's cell with the vertex corner's
  *limit row* (the row of the rank-1 limit of the scaled refine powers), or
* push the coefficient triple down the cell word with the transposed mass
  products and pair with the corner weight vector (2/3 at the corner, 1/6 at
  the other two).

Both give the same rational; the second is what the fast scans use, carried
as scaled integer rows.  Also here: the decay of cell masses toward a vertex
(with its two-rate classification), the edge restriction profile, the
left-to-right edge monotonicity check, and the Laplacian rescaling factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple, Optional

from .core import (
    MASS_SCALED,
    REFINE_DEN,
    REFINE_SCALED,
    Vec3,
    Mat3,
    VertexAddress,
    check_word,
    mat_mul,
    mat_scale,
    mat_vec,
    vec_dot,
    vec_sum,
    word_matrix,
)
from .harmonic import Harmonic, measure_coeffs
from .measures import (
    KUSUOKA,
    MeasureCoeffs,
    children_triple,
    is_positive,
    measure_of_cell,
    subtree_coeffs,
)

#: Limit rows: row j annihilates exactly the measures whose derivative
#: vanishes at corner j; pairing with a children triple gives the numerator
#: of the derivative at that corner.
LIMIT_ROWS: tuple[Vec3, Vec3, Vec3] = (
    (Fraction(14), Fraction(-1), Fraction(-1)),
    (Fraction(-1), Fraction(14), Fraction(-1)),
    (Fraction(-1), Fraction(-1), Fraction(14)),
)

_LIMIT_COLS: tuple[Vec3, Vec3, Vec3] = (
    (Fraction(3), Fraction(1), Fraction(1)),
    (Fraction(1), Fraction(3), Fraction(1)),
    (Fraction(1), Fraction(1), Fraction(3)),
)

#: Rank-1 limits of the scaled refine powers: (5/3 * refine_j)^n -> column
#: outer limit row, over 40.
RANK1_LIMITS: tuple[Mat3, Mat3, Mat3] = tuple(
    tuple(
        tuple(Fraction(1, 40) * _LIMIT_COLS[j][r] * LIMIT_ROWS[j][c] for c in range(3))
        for r in range(3)
    )
    for j in range(3)
)  # type: ignore[assignment]

# Pairing the limit row with a children triple equals (up to the factor 4
# that cancels in the quotient) pairing the *subtree coefficients* with these
# integer corner weights; they are 6x the (2/3, 1/6, 1/6) weight vector.
_CORNER_WEIGHTS_INT = ((4, 1, 1), (1, 4, 1), (1, 1, 4))

_CORNER_WEIGHTS: tuple[Vec3, Vec3, Vec3] = (
    (Fraction(2, 3), Fraction(1, 6), Fraction(1, 6)),
    (Fraction(1, 6), Fraction(2, 3), Fraction(1, 6)),
    (Fraction(1, 6), Fraction(1, 6), Fraction(2, 3)),
)


def rn_derivative(c: MeasureCoeffs, vertex: VertexAddress) -> Fraction:
    """Exact derivative of the measure ``c`` against Kusuoka at a vertex.

    Computed from the limit-row closed form on the vertex's canonical cell;
    the denominator is strictly positive for every cell.
    """
    v = vertex.canonical()
    return _derivative_raw(c, v.word, v.corner)


def _derivative_raw(c: MeasureCoeffs, word: str, corner: int) -> Fraction:
    """Limit-row form evaluated on one particular spelling of a vertex.

    Junction vertices have two spellings; this does not canonicalize, so
    tests can confirm the two sides agree.
    """
    row = LIMIT_ROWS[corner]
    x = children_triple(c, word)
    xi = children_triple(KUSUOKA, word)
    return vec_dot(row, x) / vec_dot(row, xi)


def rn_derivative_via_mass(c: MeasureCoeffs, vertex: VertexAddress) -> Fraction:
    """Independent route: transposed mass product against corner weights."""
    v = vertex.canonical()
    weights = _CORNER_WEIGHTS[v.corner]
    num = vec_dot(subtree_coeffs(c, v.word), weights)
    den = vec_dot(subtree_coeffs(KUSUOKA, v.word), weights)
    return num / den


def basis_ratio(i: int, vertex: VertexAddress) -> Fraction:
    """Derivative of the i-th corner measure against Kusuoka (in [0, 1])."""
    e = tuple(Fraction(1) if k == i else Fraction(0) for k in range(3))
    return rn_derivative(e, vertex)  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# nonnegative pairing and its zero set
# ---------------------------------------------------------------------------

def axis_gap(c: MeasureCoeffs, word: str, axis: int) -> Fraction:
    """14 x_axis minus the other two children masses of the addressed cell."""
    x = children_triple(c, word)
    j, k = (axis + 1) % 3, (axis + 2) % 3
    return 14 * x[axis] - x[j] - x[k]


def skew_energy_gap(h: Harmonic, word: str = "") -> Fraction:
    """Nonnegative pairing for a single harmonic's measure at a cell.

    Zero exactly when the restriction of ``h`` to the cell satisfies the
    skew condition about corner 0 (constants included).
    """
    return axis_gap(measure_coeffs(h, h), word, 0)


# ---------------------------------------------------------------------------
# decay of cell masses into a corner
# ---------------------------------------------------------------------------

class DecayClass(Enum):
    GENERIC = "generic"        # consecutive mass ratio tends to 3/5
    DEGENERATE = "degenerate"  # ratio tends to 1/15 (skew cells)
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class DecayReport:
    values: tuple[Fraction, ...]
    fitted_ratio: float
    classification: DecayClass


_CLASSIFY_TOL = 1e-6


def decay_sequence(c: MeasureCoeffs, word: str, letter: int, depth: int) -> DecayReport:
    """Masses of the nested cells obtained by repeating ``letter`` inside
    the addressed cell, for 0..depth repeats, with the tail ratio fitted.

    The masses follow a two-rate law (rates 3/5 and 1/15); which one the
    tail sees depends on whether the measure's skew pairing at ``letter``
    vanishes on the cell.
    """
    if letter not in (0, 1, 2):
        raise ValueError(f"letter must be 0, 1 or 2, got {letter!r}")
    check_word(word + str(letter) * depth)
    r = subtree_coeffs(c, word)
    m = MASS_SCALED[letter]
    values = []
    for _ in range(depth + 1):
        values.append(2 * vec_sum(r))
        r = (
            (r[0] * m[0][0] + r[1] * m[1][0] + r[2] * m[2][0]) / 15,
            (r[0] * m[0][1] + r[1] * m[1][1] + r[2] * m[2][1]) / 15,
            (r[0] * m[0][2] + r[1] * m[1][2] + r[2] * m[2][2]) / 15,
        )
    if len(values) >= 2 and values[-2] != 0:
        ratio = float(values[-1] / values[-2])
    else:
        ratio = float("nan")
    if abs(ratio - 3 / 5) <= _CLASSIFY_TOL:
        cls = DecayClass.GENERIC
    elif abs(ratio - 1 / 15) <= _CLASSIFY_TOL:
        cls = DecayClass.DEGENERATE
    else:
        cls = DecayClass.UNCLASSIFIED
    return DecayReport(tuple(values), ratio, cls)


def decay_two_term(c: MeasureCoeffs, word: str, letter: int, m: int) -> Fraction:
    """Closed-form oracle for the decay values: A/15^m + B(3/5)^m.

    The coefficients come from the children triple of the cell; the third
    eigenrate (1/5) never contributes to mass sums.
    """
    x = children_triple(c, word)
    i = letter
    j, k = (i + 1) % 3, (i + 2) % 3
    a = -Fraction(3, 4) * x[i] + Fraction(9, 8) * (x[j] + x[k])
    b = Fraction(1, 8) * (14 * x[i] - x[j] - x[k])
    return a * Fraction(1, 15) ** m + b * Fraction(3, 5) ** m


# ---------------------------------------------------------------------------
# vertex scans
# ---------------------------------------------------------------------------

class ScanResult(NamedTuple):
    minimum: Fraction
    maximum: Fraction
    argmin: VertexAddress
    argmax: VertexAddress


def scan_extrema(c: MeasureCoeffs, word: str = "", depth: int = 8) -> ScanResult:
    """Extrema of the derivative over the vertices strictly inside the
    addressed cell, down to ``depth`` levels of subdivision, with witnesses.

    The cell's own three corners are its boundary and are not scanned (the
    corner-0 derivative of the corner-0 measure, for instance, attains 2/3
    only at that excluded corner; over interior vertices the bound is strict).
    Requires a positive measure and ``depth >= 1``.  Carried as scaled
    integer rows; values are compared by cross-multiplication, so the whole
    scan is exact.  Witnesses are canonical addresses, ties broken
    lexicographically.
    """
    if not is_positive(c):
        raise ValueError("scan_extrema needs a positive measure")
    if depth < 1:
        raise ValueError("scan_extrema needs depth >= 1; the cell has no interior vertices at depth 0")
    check_word(word)
    den = math.lcm(*(x.denominator for x in c))
    r0 = tuple(int(x * den) for x in c)
    k0 = (den, den, den)  # same scale as r0 so the ratio is unchanged
    for ch in word:
        r0 = _row_step(r0, int(ch))
        k0 = _row_step(k0, int(ch))

    # candidates carried as (numerator, positive denominator, canonical key)
    best_min: Optional[tuple[int, int, tuple[str, int]]] = None
    best_max: Optional[tuple[int, int, tuple[str, int]]] = None
    base = len(word)

    stack = [(word, r0, k0, depth)]
    while stack:
        w, r, k, budget = stack.pop()
        u = w[base:]
        for corner in (0, 1, 2):
            if not u or u == str(corner) * len(u):
                continue  # this spelling names a corner of the scanned cell
            wt = _CORNER_WEIGHTS_INT[corner]
            num = wt[0] * r[0] + wt[1] * r[1] + wt[2] * r[2]
            dnm = wt[0] * k[0] + wt[1] * k[1] + wt[2] * k[2]
            key: Optional[tuple[str, int]] = None
            if best_min is None or _less(num, dnm, best_min[0], best_min[1]):
                key = _addr_key(w, corner)
                best_min = (num, dnm, key)
            elif _equal(num, dnm, best_min[0], best_min[1]):
                key = _addr_key(w, corner)
                if key < best_min[2]:
                    best_min = (num, dnm, key)
            if best_max is None or _less(best_max[0], best_max[1], num, dnm):
                key = key if key is not None else _addr_key(w, corner)
                best_max = (num, dnm, key)
            elif _equal(num, dnm, best_max[0], best_max[1]):
                key = key if key is not None else _addr_key(w, corner)
                if key < best_max[2]:
                    best_max = (num, dnm, key)
        if budget > 0:
            for j in (2, 1, 0):
                stack.append((w + str(j), _row_step(r, j), _row_step(k, j), budget - 1))
    assert best_min is not None and best_max is not None
    return ScanResult(
        Fraction(best_min[0], best_min[1]),
        Fraction(best_max[0], best_max[1]),
        VertexAddress(*best_min[2]),
        VertexAddress(*best_max[2]),
    )


def _row_step(r: tuple[int, int, int], j: int) -> tuple[int, int, int]:
    m = MASS_SCALED[j]
    return (
        r[0] * m[0][0] + r[1] * m[1][0] + r[2] * m[2][0],
        r[0] * m[0][1] + r[1] * m[1][1] + r[2] * m[2][1],
        r[0] * m[0][2] + r[1] * m[1][2] + r[2] * m[2][2],
    )


def _less(a_num: int, a_den: int, b_num: int, b_den: int) -> bool:
    return a_num * b_den < b_num * a_den


def _equal(a_num: int, a_den: int, b_num: int, b_den: int) -> bool:
    return a_num * b_den == b_num * a_den


def _addr_key(word: str, corner: int):
    v = VertexAddress(word, corner).canonical()
    return (v.word, v.corner)


# ---------------------------------------------------------------------------
# edge restriction
# ---------------------------------------------------------------------------

def edge_profile(
    c: MeasureCoeffs,
    word: str,
    edge: tuple[int, int],
    depth: int,
) -> list[tuple[Fraction, Fraction]]:
    """Derivative values along one edge of a cell, ordered by position.

    Returns (position, value) pairs at the two endpoints and at every dyadic
    edge vertex p/2^n with n <= depth.  Position runs from 0 at the first
    edge corner to 1 at the second.
    """
    j, k = edge
    if j == k or j not in (0, 1, 2) or k not in (0, 1, 2):
        raise ValueError(f"edge must name two distinct corners, got {edge!r}")
    check_word(word)
    out = [
        (Fraction(0), rn_derivative(c, VertexAddress(word, j))),
        (Fraction(1), rn_derivative(c, VertexAddress(word, k))),
    ]
    for n in range(1, depth + 1):
        # interior halving pattern: each bit sends the interval toward j or k
        for bits in range(1 << (n - 1)):
            u = "".join(str(k) if (bits >> (n - 2 - t)) & 1 else str(j) for t in range(n - 1))
            pos = Fraction(2 * bits + 1, 1 << n)
            vertex = VertexAddress(word + u + str(j), k)
            out.append((pos, rn_derivative(c, vertex)))
    out.sort(key=lambda item: item[0])
    return out


def monotone_left_right(m: int) -> bool:
    """Check the left-to-right growth of the corner-2 mass along the bottom.

    Enumerates the 2^m bottom-edge cells (words over letters {1,2}) in their
    geometric order and confirms the corner-2 masses never decrease, and that
    every edge margin is at least the margin of the all-1s word.
    """
    if m < 0 or m > 12:
        raise ValueError("monotone_left_right supports 0 <= m <= 12")
    e2 = (Fraction(0), Fraction(0), Fraction(1))
    floor_margin = edge_margin("1" * m)
    prev: Optional[Fraction] = None
    for bits in range(1 << m):
        w = "".join("2" if (bits >> (m - 1 - t)) & 1 else "1" for t in range(m))
        value = measure_of_cell(e2, w)
        if prev is not None and value < prev:
            return False
        prev = value
        if edge_margin(w) < floor_margin:
            return False
    return True


# ---------------------------------------------------------------------------
# margin quantity along the bottom edge
# ---------------------------------------------------------------------------

_MARGIN_ROW: Vec3 = LIMIT_ROWS[2]
_MARGIN_COL: Vec3 = (Fraction(1), Fraction(1), Fraction(3))


def edge_margin(word: str) -> Fraction:
    """Pairing of the corner-2 limit row with the refine word product applied
    to the corner-2 child triple; strictly positive for words over {1,2}.
    """
    check_word(word)
    if "0" in word:
        raise ValueError("edge_margin is defined for words over letters {1,2} only")
    row = _MARGIN_ROW
    for ch in word:
        g = REFINE_SCALED[int(ch)]
        row = (
            (row[0] * g[0][0] + row[1] * g[1][0] + row[2] * g[2][0]) / REFINE_DEN,
            (row[0] * g[0][1] + row[1] * g[1][1] + row[2] * g[2][1]) / REFINE_DEN,
            (row[0] * g[0][2] + row[1] * g[1][2] + row[2] * g[2][2]) / REFINE_DEN,
        )
    return vec_dot(row, _MARGIN_COL)


def edge_margin_closed_form(m: int) -> Fraction:
    """Eigen-decomposed value of the all-1s margin: three explicit rates."""
    return (
        Fraction(45, 2) * Fraction(1, 15) ** m
        + Fraction(5, 2) * Fraction(3, 5) ** m
        + 15 * Fraction(1, 5) ** m
    )


# ---------------------------------------------------------------------------
# scaled operator norms
# ---------------------------------------------------------------------------

def operator_norm_scan(m: int) -> Fraction:
    """Max over all level-m refine word products of the scaled column norm.

    The scale (5/3 per level) compensates the dominant eigenrate, so the
    sequence stays bounded; the scan reports the exact per-level max.
    """
    if m < 0 or m > 10:
        raise ValueError("operator_norm_scan supports 0 <= m <= 10")
    ident = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    best = 0
    stack = [(ident, m)]
    while stack:
        mat, budget = stack.pop()
        if budget == 0:
            norm = max(
                abs(mat[0][c]) + abs(mat[1][c]) + abs(mat[2][c]) for c in range(3)
            )
            if norm > best:
                best = norm
            continue
        for g in REFINE_SCALED:
            stack.append((_imat_mul(mat, g), budget - 1))
    return Fraction(best) * Fraction(5, 3) ** m / REFINE_DEN**m


def _imat_mul(a, b):
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(3)) for j in range(3))
        for i in range(3)
    )


def rank1_deviation(j: int, n: int) -> float:
    """Float column-norm distance between the scaled n-th refine power and
    its rank-1 limit."""
    power = word_matrix("refine", str(j) * n)
    scaled = mat_scale(Fraction(5, 3) ** n, power)
    diff = [
        [float(scaled[r][c] - RANK1_LIMITS[j][r][c]) for c in range(3)]
        for r in range(3)
    ]
    return max(sum(abs(diff[r][c]) for r in range(3)) for c in range(3))


# ---------------------------------------------------------------------------
# Laplacian rescaling factors
# ---------------------------------------------------------------------------

def q_factor(i: int, vertex: VertexAddress, printed_variant: bool = False) -> Fraction:
    """One-letter rescaling factor of the measure Laplacian at a vertex.

    The derivation-consistent constant term is 1/25; ``printed_variant``
    switches to the 1/15 variant that circulates in statements of the result
    (the two differ by exactly 2/75).
    """
    if i not in (0, 1, 2):
        raise ValueError(f"letter must be 0, 1 or 2, got {i!r}")
    const = Fraction(1, 15) if printed_variant else Fraction(1, 25)
    return const + Fraction(12, 25) * basis_ratio(i, vertex)


def q_word(word: str, vertex: VertexAddress, printed_variant: bool = False) -> Fraction:
    """Word rescaling factor: product of one-letter factors, each evaluated
    at the vertex pushed forward by the remaining suffix."""
    check_word(word)
    out = Fraction(1)
    for t, ch in enumerate(word):
        suffix = word[t + 1:]
        moved = VertexAddress(suffix + vertex.word, vertex.corner)
        out *= q_factor(int(ch), moved, printed_variant)
    return out
