"""Equidistribution and discrepancy of sequences mod 1, and direction moduli.

A unit normal ``nu`` determines slopes of its orthogonal hyperplane with
respect to the coordinate axes.  The rate at which the fractional parts of
integer multiples of those slopes fill the unit interval (their discrepancy)
controls how well integer translates approach the hyperplane, which is the
quantitative engine behind the averaging rates computed elsewhere in this
package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "UnitSequence",
    "Direction",
    "frac",
    "discrepancy_star",
    "discrepancy",
    "rotation_discrepancy",
    "slopes",
    "omega",
    "classify_rationality",
    "Rationality",
]


def frac(x):
    """Fractional part x - floor(x), in [0, 1).  Works on scalars and arrays."""
    return x - np.floor(x)


@dataclass(frozen=True)
class UnitSequence:
    """A finite sequence of points in [0, 1)."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size == 0:
            raise ValueError("UnitSequence needs a non-empty 1-d collection of points")
        if np.any(pts < 0.0) or np.any(pts >= 1.0):
            raise ValueError("all points must lie in [0, 1)")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.size


def discrepancy_star(seq: UnitSequence | np.ndarray) -> float:
    """Star discrepancy D_N* via the exact sorted-point formula.

    For sorted points x_(1) <= ... <= x_(N),

        D_N* = 1/(2N) + max_i | x_(i) - (2i-1)/(2N) |.

    The value always lies in [1/(2N), 1] and is invariant under reordering.
    """
    if not isinstance(seq, UnitSequence):
        seq = UnitSequence(np.asarray(seq, dtype=float))
    x = np.sort(seq.points)
    n = x.size
    targets = (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)
    return 1.0 / (2.0 * n) + float(np.max(np.abs(x - targets)))


def discrepancy(seq: UnitSequence | np.ndarray) -> float:
    """Two-sided discrepancy: sup over closed [a,b] of |A([a,b];N)/N - (b-a)|.

    The supremum over intervals is attained (or approached) with endpoints at
    the sequence points or their one-sided limits, so a scan over sorted
    points is exact:

    * excess:     shrink [a, b] onto a block of consecutive points
                  x_(i)..x_(j); value (j-i+1)/N - (x_(j) - x_(i)).
    * deficiency: widen [a, b] inside the open gap around a block (possibly
                  an empty block inside one gap), with sentinels 0 and 1;
                  value (x_(j+1) - x_(i-1)) - (j-i+1)/N as a one-sided limit.
    """
    if not isinstance(seq, UnitSequence):
        seq = UnitSequence(np.asarray(seq, dtype=float))
    x = np.sort(seq.points)
    n = x.size
    best = 0.0
    # Excess over closed blocks [x_(i), x_(j)], vectorized over j for each i.
    counts = np.arange(1, n + 1, dtype=float)
    for i in range(n):
        vals = (counts[i:] - i) / n - (x[i:] - x[i])
        best = max(best, float(vals.max()))
    # Deficiency over open gaps: pad with sentinels at 0 and 1.
    padded = np.concatenate(([0.0], x, [1.0]))
    for i in range(n + 1):
        # interval creeping inside (padded[i], padded[j+1]) containing points i..j-1
        vals = (padded[i + 1:] - padded[i]) - (np.arange(i, n + 1) - i) / n
        best = max(best, float(vals.max()))
    return best


def rotation_discrepancy(x: float, n: int) -> float:
    """D_N* of the orbit frac(j*x), j = 1..n, of the rotation by x."""
    if n < 1:
        raise ValueError("n must be >= 1")
    j = np.arange(1, n + 1, dtype=float)
    return discrepancy_star(UnitSequence(frac(j * float(x))))


@dataclass(frozen=True)
class Rationality:
    """Outcome of a bounded rationality search for a direction.

    ``kind`` is "rational" (an integer multiple t*nu lies in Z^n with entries
    bounded by the search bound) or "irrational" (no such multiple up to the
    bound).  For rational outcomes ``vector`` holds the primitive integer
    vector and ``scale`` the smallest positive q with q*(nu/|nu|_inf) in Z^n.
    """

    kind: str
    bound: int
    vector: tuple[int, ...] | None = None
    scale: int | None = None

    @property
    def is_rational(self) -> bool:
        return self.kind == "rational"


@dataclass(frozen=True)
class Direction:
    """A unit vector with its hyperplane slopes and rationality tag.

    ``dominant`` is the largest index attaining |nu|_inf; the slopes satisfy
    m_j * |nu|_inf = |nu_j| so that m_dominant = 1 and every m_j is in [0,1].
    """

    nu: np.ndarray
    dominant: int
    m: np.ndarray
    rationality: Rationality | None = field(default=None, compare=False)

    def __post_init__(self):
        nu = np.asarray(self.nu, dtype=float)
        if abs(np.linalg.norm(nu) - 1.0) > 1e-12:
            raise ValueError("direction must be a unit vector to 1e-12")
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "m", np.asarray(self.m, dtype=float))

    @property
    def dim(self) -> int:
        return self.nu.size


def slopes(nu: np.ndarray) -> Direction:
    """Normalize ``nu`` and compute its slope vector.

    The dominant index is the *largest* index attaining the sup-norm of nu;
    m_j = |nu_j| / |nu|_inf.
    """
    nu = np.asarray(nu, dtype=float)
    norm = np.linalg.norm(nu)
    if norm == 0.0 or not np.isfinite(norm):
        raise ValueError("direction must be a nonzero finite vector")
    nu = nu / norm
    a = np.abs(nu)
    i = int(np.flatnonzero(a == a.max())[-1])
    m = a / a[i]
    m[i] = 1.0
    return Direction(nu=nu, dominant=i, m=m)


def omega(direction: Direction | np.ndarray, n: float) -> float:
    """Direction modulus: 2 * min_j D_[n]*(m_j) where [n] = floor(n), n > 1.

    For irrational directions at least one slope is irrational and the
    modulus tends to 0 along n -> infinity; for rational directions it is
    bounded below away from 0.
    """
    if n <= 1:
        raise ValueError("n must be > 1")
    if not isinstance(direction, Direction):
        direction = slopes(direction)
    nn = int(math.floor(n))
    return 2.0 * min(rotation_discrepancy(mj, nn) for mj in direction.m)


def _convergent_denominators(x: float, qmax: int) -> list[int]:
    """Denominators of continued-fraction convergents of x up to qmax."""
    dens = []
    h0, h1 = 1, 0  # (q_{-2}, q_{-1}) of the convergent recurrence
    y = x
    for _ in range(64):
        a = math.floor(y)
        h0, h1 = h1, a * h1 + h0
        if h1 > qmax:
            break
        if h1 > 0:
            dens.append(h1)
        r = y - a
        if r < 1e-15:
            break
        y = 1.0 / r
    return dens or [1]

_RATIONAL_TOL = 1e-9


def classify_rationality(nu: np.ndarray, qbound: int = 10**6) -> Rationality:
    """Decide whether some multiple of ``nu`` is an integer vector, up to a bound.

    Searches scales q <= qbound such that q * nu / |nu|_inf rounds to an
    integer vector within 1e-9 componentwise.  Candidate scales come from the
    continued-fraction convergents of each slope (their denominators and the
    pairwise products needed to clear several slopes at once are covered by
    scanning multiples of the least common refinement found).  Exact
    rationality of floats being undecidable, an "irrational" verdict always
    carries the bound it was checked against.
    """
    if qbound < 1:
        raise ValueError("qbound must be >= 1")
    d = slopes(nu)
    v = d.nu / np.abs(d.nu[d.dominant])  # components in [-1, 1], dominant = +-1
    # Candidate scales: merged convergent denominators of each non-dominant slope
    # and their lcm-style products, capped at qbound.
    cands: set[int] = {1}
    for j, mj in enumerate(d.m):
        if j == d.dominant:
            continue
        cands.update(q for q in _convergent_denominators(mj, qbound))
    merged: set[int] = set()
    for q1 in cands:
        for q2 in cands:
            q = q1 * q2 // math.gcd(q1, q2)
            if q <= qbound:
                merged.add(q)
    for q in sorted(merged):
        scaled = q * v
        z = np.round(scaled)
        if np.max(np.abs(scaled - z)) <= _RATIONAL_TOL and np.any(z != 0):
            zi = z.astype(int)
            g = int(np.gcd.reduce(np.abs(zi[zi != 0])))
            zi = zi // g
            if np.max(np.abs(zi)) <= qbound:
                return Rationality(kind="rational", bound=qbound,
                                   vector=tuple(int(t) for t in zi),
                                   scale=q // g if q % g == 0 else q)
    return Rationality(kind="irrational", bound=qbound)


def classified(nu: np.ndarray, qbound: int = 10**6) -> Direction:
    """slopes() plus a rationality classification attached."""
    d = slopes(nu)
    return Direction(nu=d.nu, dominant=d.dominant, m=d.m,
                     rationality=classify_rationality(d.nu, qbound))
