"""Brute-force oracles, kept independent of the library implementations."""

import numpy as np


def star_discrepancy_scan(points):
    """sup over a in (0, 1] of |#{x_j < a}/N - a| by scanning both one-sided
    limits at every point plus the right endpoint a = 1."""
    x = np.sort(np.asarray(points, dtype=float))
    n = x.size
    best = 0.0
    for a in x:
        below = np.sum(x < a) / n          # a approached from the point itself
        at = np.sum(x <= a) / n            # limit from just above the point
        best = max(best, abs(below - a), abs(at - a))
    best = max(best, abs(np.sum(x <= 1.0) / n - 1.0))
    return best


def interval_discrepancy_scan(points):
    """sup over closed [a,b] of |A/N - (b-a)| via a quadratic endpoint scan."""
    x = np.sort(np.asarray(points, dtype=float))
    n = x.size
    best = 0.0
    # excess on closed blocks
    for i in range(n):
        for j in range(i, n):
            best = max(best, (j - i + 1) / n - (x[j] - x[i]))
    # deficiency inside open gaps, sentinels at 0 and 1
    padded = np.concatenate(([0.0], x, [1.0]))
    for i in range(n + 1):
        for j in range(i + 1, n + 2):
            best = max(best, (padded[j] - padded[i]) - (j - i - 1) / n)
    return best


def pucci_sup_scan(m, lam, Lam, n_theta=2048):
    """max over lam I <= A <= Lam I of Tr(A M) on a fine rotation grid.

    A = a1 v v^T + a2 w w^T with (v, w) the rotated frame; Tr(A M) is linear
    in (a1, a2) so the coefficient maximum per frame sits at the endpoints
    {lam, Lam}, chosen by sign.  Only the rotation grid approximates; the
    optimum is smooth in theta so the scan under-estimates by O(dtheta^2).
    """
    m = np.asarray(m, dtype=float)
    thetas = np.linspace(0.0, np.pi, n_theta, endpoint=False)
    c, s = np.cos(thetas), np.sin(thetas)
    mvv = c * c * m[0, 0] + 2 * c * s * m[0, 1] + s * s * m[1, 1]
    mww = s * s * m[0, 0] - 2 * c * s * m[0, 1] + c * c * m[1, 1]
    vals = (Lam * np.maximum(mvv, 0) + lam * np.minimum(mvv, 0)
            + Lam * np.maximum(mww, 0) + lam * np.minimum(mww, 0))
    return float(np.max(vals))


def lattice_box_min(nu, x0, x, radius):
    """Exhaustive min over z in Z^2, |x0 + z - x|_inf <= radius, of the
    distance from x0 + z to the hyperplane through x0 with normal nu."""
    nu = np.asarray(nu, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    x = np.asarray(x, dtype=float)
    lo = np.floor(x - x0 - radius).astype(int)
    hi = np.ceil(x - x0 + radius).astype(int)
    zs1 = np.arange(lo[0], hi[0] + 1)
    zs2 = np.arange(lo[1], hi[1] + 1)
    z1, z2 = np.meshgrid(zs1, zs2, indexing="ij")
    d = np.abs(z1 * nu[0] + z2 * nu[1])
    return float(np.min(d))
