"""Float laboratory for the subdivision dynamics on the weight disk.

The exact weight triples of the bvectors module live on a disk; appending a
letter to the cell word acts on that disk by one of three rational maps.  In
orthonormal in-plane coordinates scaled to the unit disk the letter-0 map is

    (x, y)  |->  ((5x + 4)/(4x + 5),  3y/(4x + 5)),

and the other two letters are its conjugates by the one-third rotations.
The maps fix the disk, contract toward its boundary, and restrict to the
circle as smooth degree-one maps with an explicit closed form.  This module
iterates all of that in double precision: point clouds of every level-m
cell's weight triple, angular and radial histograms, boundary orbits, and
the residual of a sampled density under the circle maps' transfer operator.

Everything here is float; exactness lives in the bvectors module, and the
tests pin these floats against it.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from typing import Iterator, NamedTuple, Optional, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi
THIRD_TURN = TWO_PI / 3.0
#: b-space radius of the weight disk; unit-disk radius 1 corresponds to this.
DISK_RADIUS_B = 1.0 / math.sqrt(6.0)

_ROT = (0.0, THIRD_TURN, -THIRD_TURN)  # circle offset of each letter's map
_COS_ROT = (1.0, -0.5, -0.5)
_SIN_ROT = (0.0, math.sqrt(3.0) / 2.0, -math.sqrt(3.0) / 2.0)

#: Boundary fixed angles of the three maps (two per letter, exact).
BOUNDARY_FIXED_ANGLES: tuple[tuple[float, float], ...] = (
    (0.0, math.pi),
    (THIRD_TURN, -math.pi / 3.0),
    (-THIRD_TURN, math.pi / 3.0),
)

#: Boundary seed points used for the orbit histogram.
DEFAULT_SEEDS: tuple[tuple[float, float], ...] = (
    (0.0, 1.0),
    (-1.0, 0.0),
    (math.sqrt(0.5), -math.sqrt(0.5)),
)

_SQRT3 = math.sqrt(3.0)


class DiskPoint(NamedTuple):
    """A point of the closed unit disk (the weight disk, rescaled)."""

    x: float
    y: float

    @classmethod
    def from_b(cls, b: Sequence[float]) -> "DiskPoint":
        """From a unit-sum weight triple; the barycenter maps to the origin."""
        return cls(3.0 * float(b[0]) - 1.0, _SQRT3 * (float(b[1]) - float(b[2])))

    @classmethod
    def from_polar(cls, r: float, theta: float) -> "DiskPoint":
        """From b-space polar coordinates (r up to 1/sqrt(6) on the boundary)."""
        s = r / DISK_RADIUS_B
        return cls(s * math.cos(theta), s * math.sin(theta))

    def to_b(self) -> tuple[float, float, float]:
        b0 = (self.x + 1.0) / 3.0
        half_rest = (2.0 - self.x) / 6.0
        d = self.y / (2.0 * _SQRT3)
        return (b0, half_rest + d, half_rest - d)

    def to_polar(self) -> tuple[float, float]:
        return (math.hypot(self.x, self.y) * DISK_RADIUS_B, math.atan2(self.y, self.x))

    @property
    def radius(self) -> float:
        """Unit-disk radius (1 on the boundary)."""
        return math.hypot(self.x, self.y)


def apply_B(j: int, p: Sequence[float]) -> DiskPoint:
    """Image of a disk point under the letter-j subdivision map.

    Rejects points beyond the closed disk by more than 1e-9.
    """
    if j not in (0, 1, 2):
        raise ValueError(f"letter must be 0, 1 or 2, got {j!r}")
    x, y = float(p[0]), float(p[1])
    if x * x + y * y > 1.0 + 1e-9:
        raise ValueError("point outside the closed disk")
    c, s = _COS_ROT[j], _SIN_ROT[j]
    # rotate the letter's axis onto the x-axis, apply the letter-0 map, rotate back
    u, v = c * x + s * y, -s * x + c * y
    den = 4.0 * u + 5.0
    u, v = (5.0 * u + 4.0) / den, 3.0 * v / den
    return DiskPoint(c * u - s * v, s * u + c * v)


def _apply_B_arrays(j: int, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    c, s = _COS_ROT[j], _SIN_ROT[j]
    u = c * x + s * y
    v = -s * x + c * y
    den = 4.0 * u + 5.0
    u, v = (5.0 * u + 4.0) / den, 3.0 * v / den
    return c * u - s * v, s * u + c * v


def b_to_polar(b: Sequence[float]) -> tuple[float, float]:
    """Polar coordinates of a weight triple around the barycenter."""
    return DiskPoint.from_b(b).to_polar()


def polar_to_b(r: float, theta: float) -> tuple[float, float, float]:
    return DiskPoint.from_polar(r, theta).to_b()


# ---------------------------------------------------------------------------
# circle restrictions
# ---------------------------------------------------------------------------

def _wrap(t: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    t = math.remainder(t, TWO_PI)
    return math.pi if t == -math.pi else t


def circle_map(j: int, theta: float) -> float:
    """Boundary restriction of the letter-j map, as an angle in (-pi, pi].

    The letter-0 form is 2*atan((1/3)tan(theta/2)), written with atan2 so the
    odd 2pi-periodic continuation through pi is automatic; the other letters
    conjugate by +-(2pi/3).
    """
    if j not in (0, 1, 2):
        raise ValueError(f"letter must be 0, 1 or 2, got {j!r}")
    t = _wrap(theta - _ROT[j])
    g = 2.0 * math.atan2(math.sin(t / 2.0), 3.0 * math.cos(t / 2.0))
    return _wrap(g + _ROT[j])


def circle_map_inverse(j: int, alpha: float) -> float:
    """Inverse boundary map: the letter-0 form is 2*atan(3*tan(alpha/2))."""
    if j not in (0, 1, 2):
        raise ValueError(f"letter must be 0, 1 or 2, got {j!r}")
    t = _wrap(alpha - _ROT[j])
    g = 2.0 * math.atan2(3.0 * math.sin(t / 2.0), math.cos(t / 2.0))
    return _wrap(g + _ROT[j])


def circle_map_deriv(j: int, theta: float) -> float:
    """Derivative of the boundary map: 3/(5 + 4cos(theta - offset)); positive."""
    if j not in (0, 1, 2):
        raise ValueError(f"letter must be 0, 1 or 2, got {j!r}")
    return 3.0 / (5.0 + 4.0 * math.cos(theta - _ROT[j]))


def _circle_map_array(j: int, theta: np.ndarray) -> np.ndarray:
    t = theta - _ROT[j]
    g = 2.0 * np.arctan2(np.sin(t / 2.0), 3.0 * np.cos(t / 2.0))
    return g + _ROT[j]


def gamma_residual(r: float, theta: float, j: int) -> float:
    """Defect of the image-radius identity at one point.

    The squared b-radius of the image satisfies
    gamma^2 - 1/6 = 9 (r^2 - 1/6) / (4 sqrt(6) r cos(theta - offset) + 5)^2;
    this evaluates both sides, the left from the actual image point.
    """
    if r > DISK_RADIUS_B + 1e-9:
        raise ValueError("radius beyond the weight disk")
    p = DiskPoint.from_polar(r, theta)
    gamma = apply_B(j, p).radius * DISK_RADIUS_B
    lhs = gamma * gamma - 1.0 / 6.0
    den = 4.0 * math.sqrt(6.0) * r * math.cos(theta - _ROT[j]) + 5.0
    rhs = 9.0 * (r * r - 1.0 / 6.0) / (den * den)
    return abs(lhs - rhs)


class TriangleReport(NamedTuple):
    inside: bool
    base_radius: float
    image_radii: tuple[float, float, float]
    increased: tuple[bool, bool, bool]


def triangle_check(p: Sequence[float]) -> TriangleReport:
    """Radius growth against the inscribed triangle with vertex (1, 0).

    Points inside the closed inscribed triangle move strictly outward under
    all three maps; points of the open disk outside it still do under at
    least two.
    """
    x, y = float(p[0]), float(p[1])
    base = math.hypot(x, y)
    if base >= 1.0:
        raise ValueError("triangle_check expects an interior point")
    inside = x >= -0.5 and abs(y) <= (1.0 - x) / _SQRT3
    radii = tuple(apply_B(j, (x, y)).radius for j in range(3))
    return TriangleReport(inside, base, radii, tuple(rr > base for rr in radii))  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# level clouds
# ---------------------------------------------------------------------------

LEVEL_LIMIT = 16


def enumerate_level(m: int) -> Iterator[tuple[float, float, float]]:
    """All 3^m level-m weight triples, floats, in lexicographic word order."""
    if m < 0 or m > LEVEL_LIMIT:
        raise ValueError(f"level must be between 0 and {LEVEL_LIMIT}")

    def step(b: tuple[float, float, float], j: int) -> tuple[float, float, float]:
        k, l = (j + 1) % 3, (j + 2) % 3
        den = 12.0 * b[j] + 1.0
        out = [0.0, 0.0, 0.0]
        out[j] = 9.0 * b[j] / den
        out[k] = (2.0 * b[j] + 2.0 * b[k] - b[l]) / den
        out[l] = (2.0 * b[j] - b[k] + 2.0 * b[l]) / den
        return (out[0], out[1], out[2])

    def walk(b: tuple[float, float, float], depth: int) -> Iterator[tuple[float, float, float]]:
        if depth == 0:
            yield b
            return
        for j in (0, 1, 2):
            yield from walk(step(b, j), depth - 1)

    yield from walk((1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0), m)


def _descend(x: np.ndarray, y: np.ndarray, levels: int) -> tuple[np.ndarray, np.ndarray]:
    """Apply all words of the given length to a cloud, children in letter order."""
    for _ in range(levels):
        parts = [_apply_B_arrays(j, x, y) for j in (0, 1, 2)]
        x = np.stack([px for px, _ in parts], axis=1).reshape(-1)
        y = np.stack([py for _, py in parts], axis=1).reshape(-1)
    return x, y


def _subtree0_cloud(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit-disk cloud of the 3^(m-1) level-m words starting with letter 0."""
    x0, y0 = _apply_B_arrays(0, np.zeros(1), np.zeros(1))
    return _descend(x0, y0, m - 1)


# ---------------------------------------------------------------------------
# histograms
# ---------------------------------------------------------------------------

#: Normalization tags: values scaled to mean 1, or to ratios of the total.
NORM_MEAN_ONE = "MeanOne"
NORM_RATIO = "Ratio"

_ARC_SPANS = {"full": TWO_PI, "third": THIRD_TURN, "sixth": math.pi / 3.0}


class Histogram(NamedTuple):
    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]
    normalization: str

    @property
    def total(self) -> int:
        return sum(self.counts)

    def normalized_values(self) -> tuple[float, ...]:
        n = len(self.counts)
        total = self.total
        if total == 0:
            return (0.0,) * n
        if self.normalization == NORM_MEAN_ONE:
            return tuple(c * n / total for c in self.counts)
        return tuple(c / total for c in self.counts)


def _check_arc(arc: str) -> float:
    if arc not in _ARC_SPANS:
        raise ValueError(f"arc must be one of {sorted(_ARC_SPANS)}, got {arc!r}")
    return _ARC_SPANS[arc]


def _bin_counts(t: np.ndarray, span: float, bins: int) -> np.ndarray:
    idx = np.floor(t * (bins / span)).astype(np.int64)
    np.clip(idx, 0, bins - 1, out=idx)
    return np.bincount(idx, minlength=bins)


def _fold_angles(theta: np.ndarray, arc: str) -> np.ndarray:
    """Reduce angles into the reporting arc by the symmetries that tile it."""
    t = np.mod(theta, TWO_PI)
    if arc == "full":
        return t
    t = np.mod(t, THIRD_TURN)
    if arc == "sixth":
        t = np.minimum(t, THIRD_TURN - t)
    return t


def _edges(span: float, bins: int) -> tuple[float, ...]:
    return tuple(span * i / bins for i in range(bins + 1))


def angular_histogram(m: int, slices: int = 100, arc: str = "third", jobs: int = 1) -> Histogram:
    """Angle histogram of the level-m weight cloud, mean-one normalized.

    The cloud is exactly invariant under the one-third rotation (cycling the
    three letters of every word cycles the weights), so only the subtree of
    words starting with 0 is ever enumerated and the other two subtrees are
    folded in by rotating whole bins.  The reported histogram is therefore
    exactly symmetric, not just up to float placement.  For the full arc
    that folding needs the slice count divisible by 3; otherwise the three
    rotated copies are binned directly.
    """
    span = _check_arc(arc)
    if slices < 1:
        raise ValueError("slices must be positive")
    if m < 0 or m > LEVEL_LIMIT:
        raise ValueError(f"level must be between 0 and {LEVEL_LIMIT}")
    if m == 0:
        counts = np.zeros(slices, dtype=np.int64)
        counts[0] = 1  # the barycenter sits at angle 0
        return Histogram(_edges(span, slices), tuple(int(c) for c in counts), NORM_MEAN_ONE)

    x, y = _cloud_for(m, jobs)
    theta = np.arctan2(y, x)
    if arc == "full" and slices % 3 == 0:
        sub = _bin_counts(np.mod(theta, TWO_PI), span, slices)
        k = slices // 3
        counts = sub + np.roll(sub, k) + np.roll(sub, 2 * k)
    elif arc == "full":
        counts = sum(
            _bin_counts(np.mod(theta + rot, TWO_PI), span, slices) for rot in _ROT
        )
    else:
        counts = 3 * _bin_counts(_fold_angles(theta, arc), span, slices)
    return Histogram(_edges(span, slices), tuple(int(c) for c in counts), NORM_MEAN_ONE)


def radial_histogram(m: int, bins: int = 300, jobs: int = 1) -> Histogram:
    """Radius histogram of the level-m weight cloud over [0, 1/sqrt(6)].

    Values are reported as ratios of the total count.  Radii are rotation
    invariant, so the subtree-0 counts are simply tripled.
    """
    if bins < 1:
        raise ValueError("bins must be positive")
    if m < 0 or m > LEVEL_LIMIT:
        raise ValueError(f"level must be between 0 and {LEVEL_LIMIT}")
    if m == 0:
        counts = np.zeros(bins, dtype=np.int64)
        counts[0] = 1
        return Histogram(_edges(DISK_RADIUS_B, bins), tuple(int(c) for c in counts), NORM_RATIO)
    x, y = _cloud_for(m, jobs)
    r = np.hypot(x, y) * DISK_RADIUS_B
    counts = 3 * _bin_counts(r, DISK_RADIUS_B, bins)
    return Histogram(_edges(DISK_RADIUS_B, bins), tuple(int(c) for c in counts), NORM_RATIO)


def boundary_orbit_histogram(
    seeds: Sequence[tuple[float, float]] = DEFAULT_SEEDS,
    iters: int = 14,
    bins: int = 800,
    arc: str = "sixth",
    jobs: int = 1,
) -> Histogram:
    """Angle histogram of boundary seeds pushed through every length-``iters``
    word of the circle maps, mean-one normalized.

    Seeds must sit on the boundary circle (1e-9 tolerance).  Angles are
    folded into the reporting arc by the rotation (and, for the sixth,
    reflection) symmetries of the map family, so a seed anywhere on the
    circle lands in the report.
    """
    span = _check_arc(arc)
    if iters < 0 or iters > LEVEL_LIMIT:
        raise ValueError(f"iters must be between 0 and {LEVEL_LIMIT}")
    if bins < 1:
        raise ValueError("bins must be positive")
    angles = []
    for sx, sy in seeds:
        if abs(sx * sx + sy * sy - 1.0) > 1e-9:
            raise ValueError(f"seed ({sx}, {sy}) is not on the boundary circle")
        angles.append(math.atan2(sy, sx))

    if jobs > 1 and iters >= 1:
        tasks = [(a, j, iters - 1, bins, arc) for a in angles for j in (0, 1, 2)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            partials = list(pool.map(_orbit_partial, tasks))
        counts = np.sum(partials, axis=0)
    else:
        counts = np.zeros(bins, dtype=np.int64)
        for a in angles:
            theta = np.array([a])
            for _ in range(iters):
                theta = np.concatenate([_circle_map_array(j, theta) for j in (0, 1, 2)])
            counts += _bin_counts(_fold_angles(theta, arc), span, bins)
    return Histogram(_edges(span, bins), tuple(int(c) for c in counts), NORM_MEAN_ONE)


def _orbit_partial(task: tuple[float, int, int, int, str]) -> np.ndarray:
    seed_angle, first, depth, bins, arc = task
    theta = _circle_map_array(first, np.array([seed_angle]))
    for _ in range(depth):
        theta = np.concatenate([_circle_map_array(j, theta) for j in (0, 1, 2)])
    return _bin_counts(_fold_angles(theta, arc), _ARC_SPANS[arc], bins)


def _cloud_for(m: int, jobs: int) -> tuple[np.ndarray, np.ndarray]:
    """Subtree-0 cloud, optionally built by parallel sub-subtrees.

    The per-point float values do not depend on the partitioning - each
    point runs the same operation chain - so any job count gives identical
    histograms.
    """
    if jobs > 1 and m >= 3:
        tasks = [(w, m) for w in ("00", "01", "02")]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_cloud_partial, tasks))
        return (
            np.concatenate([p[0] for p in parts]),
            np.concatenate([p[1] for p in parts]),
        )
    return _subtree0_cloud(m)


def _cloud_partial(task: tuple[str, int]) -> tuple[np.ndarray, np.ndarray]:
    prefix, m = task
    x, y = np.zeros(1), np.zeros(1)
    for ch in prefix:
        x, y = _apply_B_arrays(int(ch), x, y)
    return _descend(x, y, m - len(prefix))


# ---------------------------------------------------------------------------
# transfer-operator residual
# ---------------------------------------------------------------------------

def invariant_density_residual(values: Sequence[float]) -> float:
    """Sup distance of a sampled circle density from its transfer image.

    ``values`` samples the density at the uniform grid t_i = 2*pi*i/n.  The
    transfer image at t averages the three pullbacks f(g_j^{-1}(t)) weighted
    by the inverse derivative 3/(5 - 4cos(t - offset_j)); a density equal to
    its image would be invariant under the map family.  Evaluation between
    grid points interpolates linearly around the circle.
    """
    f = np.asarray(values, dtype=float)
    n = f.size
    if n < 2:
        raise ValueError("need at least two samples")
    if np.any(f < 0):
        raise ValueError("density values must be nonnegative")
    grid = TWO_PI * np.arange(n) / n
    xp = np.concatenate([grid, [TWO_PI]])
    fp = np.concatenate([f, f[:1]])
    image = np.zeros(n)
    for j in (0, 1, 2):
        t = grid - _ROT[j]
        pre = 2.0 * np.arctan2(3.0 * np.sin(t / 2.0), np.cos(t / 2.0)) + _ROT[j]
        weight = 3.0 / (5.0 - 4.0 * np.cos(grid - _ROT[j]))
        image += np.interp(np.mod(pre, TWO_PI), xp, fp) * weight
    image /= 3.0
    return float(np.max(np.abs(f - image)))


def density_from_angular(hist: Histogram) -> np.ndarray:
    """Tile an angular histogram to a full-circle mean-one density sample.

    Accepts full-arc histograms as-is and third-arc ones tiled three times;
    the sample grid is the left bin edges, matching what the residual wants.
    """
    values = np.asarray(hist.normalized_values())
    span = hist.bin_edges[-1] - hist.bin_edges[0]
    if abs(span - TWO_PI) < 1e-12:
        return values
    if abs(span - THIRD_TURN) < 1e-12:
        return np.tile(values, 3)
    raise ValueError("only full or third arcs tile the circle")


def count_grid_fixed_points(j: int, n: int = 200, tol: float = 1e-9) -> int:
    """Grid search for interior fixed points of one map; boundary excluded.

    The only fixed points sit on the boundary circle, so this returns 0 for
    any sensible tolerance.
    """
    xs = np.linspace(-1.0, 1.0, n)
    gx, gy = np.meshgrid(xs, xs)
    inside = gx * gx + gy * gy < 1.0
    x, y = gx[inside], gy[inside]
    bx, by = _apply_B_arrays(j, x, y)
    return int(np.count_nonzero(np.hypot(bx - x, by - y) < tol))
