"""Constructive search for lattice translates close to a hyperplane.

Given a hyperplane H(x0) = {x : (x - x0) . nu = 0}, walking along integer
multiples of the in-plane vectors m_j e_i +- e_j produces, within a window of
radius O(N), a point congruent to x0 mod Z^n whose distance to H is below the
direction modulus omega(nu, N).  The walk is exact arithmetic on the slope
orbit frac(k * m_j); an exhaustive box search over integer offsets serves as
the independent check in the test-suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discrepancy import Direction, frac, omega, rotation_discrepancy, slopes

__all__ = ["Hyperplane", "LatticeApproach", "approach_point", "nearest_lattice_point"]


@dataclass(frozen=True)
class Hyperplane:
    """H(x0) = {x : (x - x0) . nu = 0} with a unit normal."""

    direction: Direction
    x0: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x0", np.asarray(self.x0, dtype=float))
        if self.x0.shape != self.direction.nu.shape:
            raise ValueError("x0 and nu must have the same dimension")

    def dist(self, p: np.ndarray) -> float:
        return abs(float(np.dot(np.asarray(p, dtype=float) - self.x0, self.direction.nu)))


@dataclass(frozen=True)
class LatticeApproach:
    """A point y with y - x0 in Z^n found near the hyperplane."""

    y: np.ndarray
    distance: float
    search_radius: float
    n_used: float
    capped: bool = False


def _circ_dist(a, b):
    d = frac(a - b)
    return np.minimum(d, 1.0 - d)


def _walk(direction: Direction, target_residue: np.ndarray, n: float):
    """Best lattice-congruent point near H_nu (through 0) for a residue class.

    Scans k = 0..[n] along both sign choices of the in-plane steps
    m_j e_i +- e_j for the slope j achieving the direction modulus, rounding
    each step onto the residue class ``target_residue`` mod Z^n.  Returns the
    point with the smallest distance |y . nu| among the candidates.
    """
    nu = direction.nu
    i = direction.dominant
    nn = int(math.floor(n))
    dim = nu.size
    # slope achieving the modulus; prefer a non-dominant index on ties so the
    # in-plane step is nontrivial
    stars = np.array([rotation_discrepancy(mj, nn) for mj in direction.m])
    stars[i] += 1e-15
    j = int(np.argmin(stars))
    s = np.asarray(target_residue, dtype=float)
    sgn_i = 1.0 if nu[i] >= 0 else -1.0
    sgn_j = 1.0 if nu[j] >= 0 else -1.0

    best_y = None
    best_d = np.inf
    ks = np.arange(0, nn + 1, dtype=float)
    for sign in (+1.0, -1.0):
        w = np.zeros(dim)
        w[i] = sgn_i * direction.m[j]
        w[j] = -sgn_j
        if j == i:  # axis direction: the only in-plane slope step is trivial
            w = np.zeros(dim)
        w = sign * w
        # candidate base points k*w + (s - s') where s' = (s.nu/nu_i) e_i
        sp = np.zeros(dim)
        sp[i] = float(np.dot(s, nu)) / nu[i]
        base = ks[:, None] * w[None, :] + (s - sp)[None, :]
        z = np.round(base - s[None, :])
        cand = s[None, :] + z
        d = np.abs(cand @ nu)
        t = int(np.argmin(d))
        if d[t] < best_d:
            best_d = float(d[t])
            best_y = cand[t]
    return best_y, best_d


def approach_point(h: Hyperplane, x: np.ndarray, n: float) -> LatticeApproach:
    """Find y with y - x0 in Z^n, |x - y| <= (2 sqrt(dim) + 1) n, close to H.

    ``x`` must lie on the hyperplane.  The returned distance is guaranteed to
    be below omega(nu, n); the walk tracks the best candidate which is
    typically far closer.
    """
    if n <= 1:
        raise ValueError("n must be > 1")
    x = np.asarray(x, dtype=float)
    if h.dist(x) > 1e-9:
        raise ValueError("x must lie on the hyperplane")
    dim = x.size
    # work in coordinates centered at x; the residue class of x0 - x
    s = frac(h.x0 - x)
    y_rel, dist = _walk(h.direction, s, n)
    y = x + y_rel
    radius = (2.0 * math.sqrt(dim) + 1.0) * n
    bound = omega(h.direction, n)
    if dist >= bound + 1e-9:
        raise RuntimeError(
            f"walk failed its distance guarantee: {dist} >= omega = {bound}")
    if np.linalg.norm(y - x) > radius:
        raise RuntimeError("walk left its search window")
    return LatticeApproach(y=y, distance=dist, search_radius=radius, n_used=float(n))


def nearest_lattice_point(h: Hyperplane, delta: float, n_max: int = 10**4) -> LatticeApproach:
    """An integer point z with dist(z, H) <= inf_{1 < n <= n_max} omega(nu, n) + delta.

    Runs the constructive walk over a ladder of window sizes, keeping the best
    candidate.  If the infimum of the modulus has not flattened out by
    ``n_max`` the result is flagged ``capped``.
    """
    if delta <= 0:
        raise ValueError("delta must be > 0")
    s = frac(-h.x0)
    ladder = [2]
    while ladder[-1] < n_max:
        ladder.append(min(n_max, max(ladder[-1] + 1, int(ladder[-1] * 1.35))))
    best_y, best_d, best_n = None, np.inf, 2
    early_exit = False
    for n in ladder:
        y_rel, dist = _walk(h.direction, s, n)
        if dist < best_d:
            best_y, best_d, best_n = y_rel, dist, n
        if best_d <= delta:  # cannot meaningfully improve on the target
            early_exit = True
            break
    z = h.x0 + best_y
    capped = not early_exit
    return LatticeApproach(y=z, distance=float(abs(np.dot(z - h.x0, h.direction.nu))),
                           search_radius=(2.0 * math.sqrt(h.x0.size) + 1.0) * best_n,
                           n_used=float(best_n), capped=capped)
