"""Monotone wide-stencil finite differences for F(D^2 u, y) = 0 in 2D.

The scheme evaluates the operator's min-max representation over matrices that
are diagonal in rotated frames, built from second directional differences

    u_ee(x) ~ (u(x + a e) - 2 u(x) + u(x - a e)) / a^2

along integer stencil directions.  Off-center weights are nonnegative, so the
node residual is nonincreasing in the off-center values: the discrete
comparison principle holds, and policy iteration (Howard's algorithm with
exact sparse solves for the frozen controls) handles the finite min-max
families used here.

Arms that would leave the domain are shortened to the exact boundary crossing
and the Dirichlet data is evaluated at the crossing point; this preserves
monotonicity at first-order accuracy in an O(h)-wide collar while the bulk of
the scheme is second-order consistent plus the angular-resolution error of
the stencil.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .operators import EllipticOperator, _coef_grid

__all__ = [
    "SchemeConfig", "RectangleGrid", "ClippedGrid", "DiscreteField",
    "Scheme", "discretize", "solve_dirichlet", "discrete_comparison_check",
    "ComparisonReport", "LocalizationBarrier", "localization_barrier",
    "SolverError", "stencil_directions",
    "field_to_csv", "field_to_binary", "field_from_binary",
]


class SolverError(RuntimeError):
    """Raised when the iteration budget is exhausted; carries the residual."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class SchemeConfig:
    """Stencil and iteration parameters.

    ``stencil_k`` counts angular directions over the half-plane; supported
    values 2, 4, 8, 16 map to integer-vector stencils of widths up to 3
    (2 is the plain axis pair).
    """

    stencil_k: int = 8
    tol: float = 1e-8
    max_iter: int = 60
    damping: float = 1.0

    def __post_init__(self):
        if self.stencil_k not in (2, 4, 8, 16):
            raise ValueError("stencil_k must be one of 2, 4, 8, 16")
        if self.tol <= 0:
            raise ValueError("tol must be > 0")


_STENCILS = {
    2: [(1, 0), (0, 1)],
    4: [(1, 0), (1, 1), (0, 1), (-1, 1)],
    8: [(1, 0), (2, 1), (1, 1), (1, 2), (0, 1), (-1, 2), (-1, 1), (-2, 1)],
    16: [(1, 0), (3, 1), (2, 1), (3, 2), (1, 1), (2, 3), (1, 2), (1, 3),
         (0, 1), (-1, 3), (-1, 2), (-2, 3), (-1, 1), (-3, 2), (-2, 1), (-3, 1)],
}


def stencil_directions(k: int) -> list[tuple[int, int]]:
    """Integer direction vectors covering the half-plane of angles [0, pi)."""
    return list(_STENCILS[k])


def _perp_index(dirs: list[tuple[int, int]]) -> list[int]:
    out = []
    lookup = {d: i for i, d in enumerate(dirs)}
    for (p, q) in dirs:
        cand = (-q, p) if (-q, p) in lookup else (q, -p)
        if cand not in lookup:
            raise ValueError(f"stencil misses the orthogonal partner of {(p, q)}")
        out.append(lookup[cand])
    return out


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------


class RectangleGrid:
    """Uniform grid on a (possibly rotated) rectangle; edge nodes are boundary.

    Node (i, j) sits at origin + h * (i * e0 + j * e1) for an orthonormal
    frame (e0, e1).  Dirichlet data lives on the four edges; stencil arms
    crossing an edge are cut at the exact edge line.
    """

    def __init__(self, origin, e0, e1, h: float, nx: int, ny: int):
        self.origin = np.asarray(origin, dtype=float)
        self.e0 = np.asarray(e0, dtype=float)
        self.e1 = np.asarray(e1, dtype=float)
        frame = np.stack([self.e0, self.e1])
        if np.max(np.abs(frame @ frame.T - np.eye(2))) > 1e-12:
            raise ValueError("frame must be orthonormal to 1e-12")
        if h <= 0 or nx < 3 or ny < 3:
            raise ValueError("need h > 0 and at least 3 nodes per side")
        self.h = float(h)
        self.nx, self.ny = int(nx), int(ny)
        ii, jj = np.meshgrid(np.arange(nx), np.arange(ny), indexing="ij")
        self._ij = np.stack([ii.ravel(), jj.ravel()], axis=1)
        kind = np.ones((nx, ny), dtype=np.int8)
        kind[0, :] = kind[-1, :] = 2
        kind[:, 0] = kind[:, -1] = 2
        self.kind = kind.ravel()
        self.n_nodes = nx * ny

    @classmethod
    def axis_aligned(cls, x0, x1, y0, y1, h):
        nx = int(round((x1 - x0) / h)) + 1
        ny = int(round((y1 - y0) / h)) + 1
        return cls((x0, y0), (1.0, 0.0), (0.0, 1.0), h, nx, ny)

    def positions(self) -> np.ndarray:
        return (self.origin[None, :]
                + self.h * (self._ij[:, :1] * self.e0[None, :]
                            + self._ij[:, 1:] * self.e1[None, :]))

    def data_points(self) -> np.ndarray:
        """Where Dirichlet data is evaluated for boundary nodes (the nodes)."""
        return self.positions()

    def arm_exit(self, ij: np.ndarray, v: tuple[int, int]) -> np.ndarray:
        """Fraction t in (0, 1] of arms from ``ij`` to the first edge crossing."""
        t = np.ones(len(ij))
        for axis, dv in enumerate(v):
            if dv == 0:
                continue
            n = self.nx if axis == 0 else self.ny
            c = ij[:, axis]
            lim = (n - 1 - c) / dv if dv > 0 else c / (-dv)
            t = np.minimum(t, lim)
        return t

    def index_to_point(self, fij: np.ndarray) -> np.ndarray:
        return (self.origin[None, :]
                + self.h * (fij[:, :1] * self.e0[None, :]
                            + fij[:, 1:] * self.e1[None, :]))


class ClippedGrid:
    """Cartesian grid clipped to a convex domain.

    Nodes inside the domain within ``h`` of the boundary are boundary nodes
    carrying data at their closest boundary point; deeper nodes are interior.
    ``domain`` must provide vectorized signed_distance(points) (negative
    inside), closest_boundary(points) and segment_crossing(p0, p1); convexity
    keeps chords between inside nodes inside.
    """

    def __init__(self, domain, h: float):
        self.domain = domain
        self.h = float(h)
        (x0, x1), (y0, y1) = domain.bounding_box()
        self.nx = int(math.floor((x1 - x0) / h)) + 1
        self.ny = int(math.floor((y1 - y0) / h)) + 1
        self.origin = np.array([x0, y0])
        self.e0 = np.array([1.0, 0.0])
        self.e1 = np.array([0.0, 1.0])
        ii, jj = np.meshgrid(np.arange(self.nx), np.arange(self.ny), indexing="ij")
        self._ij = np.stack([ii.ravel(), jj.ravel()], axis=1)
        pos = self.positions()
        sdist = domain.signed_distance(pos)
        kind = np.zeros(self.nx * self.ny, dtype=np.int8)
        inside = sdist < 0.0
        kind[inside & (sdist > -h)] = 2
        kind[inside & (sdist <= -h)] = 1
        self.kind = kind
        self.n_nodes = self.nx * self.ny
        self._data_points = pos.copy()
        bmask = kind == 2
        if np.any(bmask):
            self._data_points[bmask] = domain.closest_boundary(pos[bmask])[0]

    def positions(self) -> np.ndarray:
        return self.origin[None, :] + self.h * self._ij.astype(float)

    def data_points(self) -> np.ndarray:
        return self._data_points


@dataclass
class DiscreteField:
    """Nodal values on a grid; boundary nodes carry the prescribed data."""

    grid: object
    values: np.ndarray
    iterations: int = 0
    residual: float = 0.0

    def as_array(self) -> np.ndarray:
        out = np.full(self.grid.nx * self.grid.ny, np.nan)
        active = self.grid.kind > 0
        out[active] = self.values[active]
        return out.reshape(self.grid.nx, self.grid.ny)

    def interp(self, points: np.ndarray) -> np.ndarray:
        """Bilinear interpolation; every surrounding node must be active."""
        g = self.grid
        rel = np.asarray(points, dtype=float) - g.origin[None, :]
        fi = rel @ g.e0 / g.h
        fj = rel @ g.e1 / g.h
        i0 = np.clip(np.floor(fi).astype(int), 0, g.nx - 2)
        j0 = np.clip(np.floor(fj).astype(int), 0, g.ny - 2)
        tx = fi - i0
        ty = fj - j0
        v = self.values
        c00 = i0 * g.ny + j0
        c10 = (i0 + 1) * g.ny + j0
        c01 = i0 * g.ny + j0 + 1
        c11 = (i0 + 1) * g.ny + j0 + 1
        if np.any(g.kind[np.concatenate([c00, c10, c01, c11])] == 0):
            raise ValueError("interpolation cell touches inactive nodes")
        return ((1 - tx) * (1 - ty) * v[c00] + tx * (1 - ty) * v[c10]
                + (1 - tx) * ty * v[c01] + tx * ty * v[c11])


# ---------------------------------------------------------------------------
# compiled scheme
# ---------------------------------------------------------------------------


class _Branch:
    """One control choice: coefficients and direction indices, scalar or per-node."""

    __slots__ = ("mu_a", "ka", "mu_b", "kb")

    def __init__(self, mu_a, ka, mu_b, kb):
        self.mu_a, self.ka, self.mu_b, self.kb = mu_a, ka, mu_b, kb

    def gathered(self, idx):
        """Coefficients/directions restricted to interior-node subset idx."""
        mu_a = self.mu_a[idx] if isinstance(self.mu_a, np.ndarray) else self.mu_a
        mu_b = self.mu_b[idx] if isinstance(self.mu_b, np.ndarray) else self.mu_b
        ka = self.ka[idx] if isinstance(self.ka, np.ndarray) else np.full(idx.size, self.ka)
        kb = self.kb[idx] if isinstance(self.kb, np.ndarray) else np.full(idx.size, self.kb)
        return mu_a, ka, mu_b, kb


class Scheme:
    """A compiled monotone discretization bound to one grid and operator."""

    def __init__(self, op: EllipticOperator, grid, cfg: SchemeConfig):
        self.op = op
        self.grid = grid
        self.cfg = cfg
        self._build_geometry()
        self._compile_operator()
        self._cached_lu = None  # single-branch factorization, reused across solves

    # -- geometry ------------------------------------------------------------
    def _build_geometry(self):
        g = self.grid
        dirs = stencil_directions(self.cfg.stencil_k)
        self.dirs = dirs
        self.perp = _perp_index(dirs)
        self.int_ids = np.flatnonzero(g.kind == 1)
        if self.int_ids.size == 0:
            raise ValueError("grid has no interior nodes (under-resolved)")
        self.n_int = self.int_ids.size
        self.eq_index = np.full(g.n_nodes, -1, dtype=np.int64)
        self.eq_index[self.int_ids] = np.arange(self.n_int)
        self.positions = g.positions()
        self.int_pos = self.positions[self.int_ids]
        ij = g._ij[self.int_ids]
        nx, ny = g.nx, g.ny

        self.dir_angle = np.empty(len(dirs))
        for k, (p, q) in enumerate(dirs):
            vec = p * g.e0 + q * g.e1
            self.dir_angle[k] = math.atan2(vec[1], vec[0]) % math.pi

        K = len(dirs)
        self.nb = np.empty((K, 2, self.n_int), dtype=np.int64)
        self.armlen = np.empty((K, 2, self.n_int))
        self.bpt = np.zeros((K, 2, self.n_int, 2))
        h = g.h
        for k, (p, q) in enumerate(dirs):
            step = math.hypot(p, q) * h
            for s, sign in enumerate((1, -1)):
                v = (sign * p, sign * q)
                ti = ij[:, 0] + v[0]
                tj = ij[:, 1] + v[1]
                inside_box = (ti >= 0) & (ti < nx) & (tj >= 0) & (tj < ny)
                tgt = np.where(inside_box, ti * ny + tj, 0)
                ok = inside_box & (g.kind[tgt] > 0)
                self.nb[k, s] = np.where(ok, tgt, -1)
                arm = np.full(self.n_int, step)
                cut = np.flatnonzero(~ok)
                if cut.size:
                    arm_cut, pts_cut = self._cut_arms(ij[cut], v, step)
                    arm[cut] = arm_cut
                    self.bpt[k, s, cut] = pts_cut
                self.armlen[k, s] = arm
        if np.any(self.armlen <= 1e-12):
            raise ValueError("degenerate shortened arm; grid under-resolves the stencil")
        ap, am = self.armlen[:, 0], self.armlen[:, 1]
        self.cp = 2.0 / (ap * (ap + am))   # weight on the + neighbor
        self.cm = 2.0 / (am * (ap + am))   # weight on the - neighbor

    def _cut_arms(self, ij_cut, v, step):
        g = self.grid
        if isinstance(g, RectangleGrid):
            t = g.arm_exit(ij_cut, v)
            fij = ij_cut + t[:, None] * np.asarray(v, dtype=float)[None, :]
            return t * step, g.index_to_point(fij)
        p0 = g.origin[None, :] + g.h * ij_cut.astype(float)
        p1 = p0 + g.h * np.asarray(v, dtype=float)[None, :]
        t, pts = g.domain.segment_crossing(p0, p1)
        return t * step, pts

    # -- operator compilation --------------------------------------------------
    def _compile_operator(self):
        op = self.op
        xs = self.int_pos
        ys = self._fast_points(xs)
        if op.kind in ("pucci_plus", "pucci_minus"):
            self.f = np.zeros(self.n_int)
            combos = []
            for k in range(len(self.dirs)):
                kp = self.perp[k]
                if kp < k:
                    continue  # one branch per unordered frame
                for c1 in (op.lam, op.Lam):
                    for c2 in (op.lam, op.Lam):
                        combos.append(_Branch(c1, k, c2, kp))
            if op.kind == "pucci_plus":   # F = -P+ = min over the class
                self.groups = [combos]
            else:                         # F = -P- = max over the class
                self.groups = [[b] for b in combos]
        else:
            self.f = np.asarray(_coef_grid(op.f, xs, ys), dtype=float) \
                * np.ones(self.n_int)
            groups = []
            for fam_group in op.families:
                branches = []
                for mat in fam_group:
                    a11 = _coef_grid(mat[0], xs, ys) * np.ones(self.n_int)
                    a12 = _coef_grid(mat[1], xs, ys) * np.ones(self.n_int)
                    a22 = _coef_grid(mat[2], xs, ys) * np.ones(self.n_int)
                    branches.append(self._snap(a11, a12, a22))
                groups.append(branches)
            self.groups = groups
        self.single_branch = len(self.groups) == 1 and len(self.groups[0]) == 1

    def _fast_points(self, xs):
        """Fast-variable coordinates; the epsilon-problem rescales positions."""
        eps = getattr(self.grid, "epsilon", None)
        return xs / eps if eps else xs

    def _snap(self, a11, a12, a22) -> _Branch:
        """Eigen-decompose coefficient matrices and snap to stencil frames."""
        half_tr = 0.5 * (a11 + a22)
        half_gap = 0.5 * (a11 - a22)
        r = np.hypot(half_gap, a12)
        e_hi = half_tr + r
        e_lo = half_tr - r
        if np.any(e_lo <= 0):
            raise ValueError("coefficient matrix not positive definite on the grid")
        theta = np.where(r > 1e-14 * np.maximum(e_hi, 1.0),
                         0.5 * np.arctan2(2.0 * a12, a11 - a22), 0.0) % math.pi
        d = np.abs(((theta[:, None] - self.dir_angle[None, :]) + math.pi / 2)
                   % math.pi - math.pi / 2)
        ka = np.argmin(d, axis=1)
        kb = np.asarray(self.perp, dtype=np.int64)[ka]
        if ka.size and np.ptp(ka) == 0 and np.ptp(e_hi) == 0 and np.ptp(e_lo) == 0:
            return _Branch(float(e_hi[0]), int(ka[0]), float(e_lo[0]), int(kb[0]))
        return _Branch(e_hi, ka, e_lo, kb)

    # -- pointwise machinery ----------------------------------------------------
    def _deltas(self, u: np.ndarray, arm_data) -> np.ndarray:
        """Second directional differences at interior nodes, shape (K, n_int)."""
        K = len(self.dirs)
        out = np.empty((K, self.n_int))
        u0 = u[self.int_ids]
        for k in range(K):
            side = []
            for s in range(2):
                nb = self.nb[k, s]
                v = u[np.maximum(nb, 0)]
                cut = nb < 0
                if np.any(cut):
                    v = np.where(cut, arm_data[k, s], v)
                side.append(v)
            out[k] = (self.cp[k] * side[0] + self.cm[k] * side[1]
                      - (self.cp[k] + self.cm[k]) * u0)
        return out

    def _branch_value(self, br: _Branch, deltas: np.ndarray) -> np.ndarray:
        ar = np.arange(self.n_int)
        da = deltas[br.ka, ar] if isinstance(br.ka, np.ndarray) else deltas[br.ka]
        db = deltas[br.kb, ar] if isinstance(br.kb, np.ndarray) else deltas[br.kb]
        return -(br.mu_a * da + br.mu_b * db)

    def residual(self, u: np.ndarray, arm_data=None) -> np.ndarray:
        """Nonlinear residual f + max over groups of min over branches."""
        if arm_data is None:
            arm_data = np.zeros((len(self.dirs), 2, self.n_int))
        deltas = self._deltas(u, arm_data)
        gvals = [np.minimum.reduce([self._branch_value(b, deltas) for b in group])
                 for group in self.groups]
        return self.f + np.maximum.reduce(gvals)

    def residual_of_function(self, fn) -> np.ndarray:
        """Residual of a smooth function sampled on grid and arm endpoints."""
        u = np.zeros(self.grid.n_nodes)
        active = self.grid.kind > 0
        u[active] = fn(self.positions[active])
        arm_data = fn(self.bpt.reshape(-1, 2)).reshape(self.bpt.shape[:3])
        return self.residual(u, arm_data)

    def _arm_data_values(self, data) -> np.ndarray:
        """Dirichlet data at the shortened-arm crossing points."""
        out = np.zeros((len(self.dirs), 2, self.n_int))
        cut = self.nb < 0
        if np.any(cut):
            pts = self.bpt[cut]
            out[cut] = data(pts)
        return out

    def _select_policy(self, u, arm_data):
        deltas = self._deltas(u, arm_data)
        gmins, gargs = [], []
        for group in self.groups:
            bvals = np.stack([self._branch_value(b, deltas) for b in group])
            arg = np.argmin(bvals, axis=0)
            gargs.append(arg)
            gmins.append(bvals[arg, np.arange(self.n_int)])
        gsel = np.argmax(np.stack(gmins), axis=0)
        return gsel, gargs

    def _assemble(self, gsel, gargs, u_bnd, arm_data, need_matrix=True):
        """Sparse system for the frozen policy:  A u = b  on interior nodes."""
        n = self.n_int
        ar = np.arange(n)
        rows, cols, vals = [], [], []
        diag = np.zeros(n)
        rhs = -self.f.copy()
        for gi, group in enumerate(self.groups):
            for bi, br in enumerate(group):
                if len(self.groups) == 1 and len(group) == 1:
                    idx = ar
                else:
                    idx = ar[(gsel == gi) & (gargs[gi] == bi)]
                if idx.size == 0:
                    continue
                mu_a, ka, mu_b, kb = br.gathered(idx)
                for mu, kv in ((mu_a, ka), (mu_b, kb)):
                    for s, cw in ((0, self.cp), (1, self.cm)):
                        w = np.asarray(mu * cw[kv, idx])
                        nb = self.nb[kv, s, idx]
                        free = nb >= 0
                        free_int = free & (self.eq_index[np.maximum(nb, 0)] >= 0)
                        bnode = free & ~free_int
                        cut = ~free
                        if need_matrix:
                            np.add.at(diag, idx, w)
                            if np.any(free_int):
                                rows.append(idx[free_int])
                                cols.append(self.eq_index[nb[free_int]])
                                vals.append(-w[free_int])
                        if np.any(bnode):
                            np.add.at(rhs, idx[bnode], w[bnode] * u_bnd[nb[bnode]])
                        if np.any(cut):
                            np.add.at(rhs, idx[cut],
                                      w[cut] * arm_data[kv[cut], s, idx[cut]])
        if not need_matrix:
            return None, rhs
        a = sp.coo_matrix(
            (np.concatenate(vals + [diag]) if vals else diag,
             (np.concatenate(rows + [ar]) if rows else ar,
              np.concatenate(cols + [ar]) if cols else ar)),
            shape=(n, n)).tocsc()
        return a, rhs


def discretize(op: EllipticOperator, grid, cfg: SchemeConfig | None = None) -> Scheme:
    """Compile the monotone scheme for ``op`` on ``grid``."""
    return Scheme(op, grid, cfg or SchemeConfig())


def solve_dirichlet(scheme: Scheme, data) -> DiscreteField:
    """Solve the Dirichlet problem; ``data`` maps boundary points to values.

    Policy iteration with exact sparse solves: select the active min-max
    branch at every node, solve the frozen linear system, repeat until the
    nonlinear residual drops below the configured tolerance.  Single-branch
    (linear) schemes factorize once and reuse the factorization across calls
    with different data.
    """
    g = scheme.grid
    cfg = scheme.cfg
    u = np.zeros(g.n_nodes)
    bmask = g.kind == 2
    dpts = g.data_points()
    u[bmask] = data(dpts[bmask])
    arm_data = scheme._arm_data_values(data)

    def frozen_solve(gsel, gargs):
        if scheme.single_branch and scheme._cached_lu is not None:
            _, rhs = scheme._assemble(gsel, gargs, u, arm_data, need_matrix=False)
            return scheme._cached_lu.solve(rhs)
        a, rhs = scheme._assemble(gsel, gargs, u, arm_data)
        lu = spla.splu(a)
        if scheme.single_branch:
            scheme._cached_lu = lu
        return lu.solve(rhs)

    if scheme.single_branch:
        u[scheme.int_ids] = frozen_solve(None, None)
        res = float(np.max(np.abs(scheme.residual(u, arm_data))))
        return DiscreteField(grid=g, values=u, iterations=1, residual=res)

    res = np.inf
    prev_policy = None
    for it in range(1, cfg.max_iter + 1):
        gsel, gargs = scheme._select_policy(u, arm_data)
        u_new = u.copy()
        u_new[scheme.int_ids] = frozen_solve(gsel, gargs)
        if cfg.damping != 1.0:
            u_new[scheme.int_ids] = ((1 - cfg.damping) * u[scheme.int_ids]
                                     + cfg.damping * u_new[scheme.int_ids])
        u = u_new
        res = float(np.max(np.abs(scheme.residual(u, arm_data))))
        if res <= cfg.tol:
            return DiscreteField(grid=g, values=u, iterations=it, residual=res)
        policy = (gsel.tobytes(), tuple(a.tobytes() for a in gargs))
        if policy == prev_policy:
            break  # policy fixpoint at full damping; residual is numerical floor
        prev_policy = policy
    raise SolverError(f"policy iteration did not reach tol={cfg.tol} "
                      f"(residual {res:.3e})", residual=res, iterations=cfg.max_iter)


@dataclass(frozen=True)
class ComparisonReport:
    ok: bool
    interior_max: float
    boundary_max: float
    slack: float


def discrete_comparison_check(scheme: Scheme, u: DiscreteField, v: DiscreteField
                              ) -> ComparisonReport:
    """Check max over interior of (u - v) <= max over boundary of (u - v)_+.

    Solved fields on a common grid obey this up to twice the solver
    tolerance; a violation report carries both maxima.
    """
    g = scheme.grid
    w = u.values - v.values
    interior_max = float(np.max(w[g.kind == 1]))
    boundary_max = float(np.max(np.maximum(w[g.kind == 2], 0.0)))
    slack = 2.0 * scheme.cfg.tol
    return ComparisonReport(ok=interior_max <= boundary_max + slack,
                            interior_max=interior_max, boundary_max=boundary_max,
                            slack=slack)


# ---------------------------------------------------------------------------
# explicit localization barrier
# ---------------------------------------------------------------------------


class LocalizationBarrier:
    """The quadratic-in-|x'| barrier controlling truncation of half-space strips.

    phi(x) = L^(-1-e) (|x'|^2 - 2 (Lam/lam)(n-1) x_n^2) + delta
             + (2 (Lam/lam)(n-1) + 1) L^(-e) x_n

    It is a supersolution with constant extremal-operator excess
    -P+(D^2 phi) = 2 Lam (n-1) L^(-1-e) and is bounded on the unit cylinder
    by delta + 2((Lam/lam)(n-1) + 1) L^(-e).
    """

    def __init__(self, L: float, eps_exp: float, delta: float, lam: float,
                 Lam: float, n: int = 2):
        if L <= 1 or not (0.0 < eps_exp < 1.0):
            raise ValueError("need L > 1 and exponent in (0, 1)")
        self.L, self.eps_exp, self.delta = float(L), float(eps_exp), float(delta)
        self.lam, self.Lam, self.n = float(lam), float(Lam), int(n)
        self.ratio = 2.0 * (Lam / lam) * (n - 1)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        xp2 = np.sum(x[:, :-1] ** 2, axis=1)
        xn = x[:, -1]
        L = self.L
        out = (L ** (-1 - self.eps_exp) * (xp2 - self.ratio * xn ** 2)
               + self.delta + (self.ratio + 1.0) * L ** (-self.eps_exp) * xn)
        return out if out.size > 1 else float(out[0])

    def hessian_eigenvalues(self):
        """The constant Hessian spectrum: 2 L^(-1-e) with multiplicity n-1
        and -2 ratio L^(-1-e) once."""
        c = 2.0 * self.L ** (-1 - self.eps_exp)
        return np.array([c] * (self.n - 1) + [-c * self.ratio])

    def supersolution_excess(self) -> float:
        """-P+(D^2 phi), a positive constant."""
        eigs = self.hessian_eigenvalues()
        pplus = sum(self.Lam * e if e > 0 else self.lam * e for e in eigs)
        return -pplus

    def bound_on_unit_cylinder(self) -> float:
        return self.delta + (self.ratio + 2.0) * self.L ** (-self.eps_exp)


def localization_barrier(L, eps_exp, delta, lam, Lam, n=2) -> LocalizationBarrier:
    return LocalizationBarrier(L, eps_exp, delta, lam, Lam, n)


# ---------------------------------------------------------------------------
# field persistence
# ---------------------------------------------------------------------------

_BIN_MAGIC = b"HBCF"


def field_to_csv(fld: DiscreteField, fh) -> None:
    """Write active nodes as ``x,y,value`` rows."""
    pos = fld.grid.positions()
    active = fld.grid.kind > 0
    fh.write("x,y,value\n")
    for (x, y), v in zip(pos[active], fld.values[active]):
        fh.write(f"{float(x)!r},{float(y)!r},{float(v)!r}\n")


def field_to_binary(fld: DiscreteField, fh) -> None:
    """Header (dims, spacing, frame) + row-major float64 values."""
    g = fld.grid
    fh.write(_BIN_MAGIC)
    fh.write(struct.pack("<iid", g.nx, g.ny, g.h))
    fh.write(struct.pack("<6d", *g.origin, *g.e0, *g.e1))
    fh.write(np.ascontiguousarray(fld.values, dtype="<f8").tobytes())
    fh.write(np.ascontiguousarray(fld.grid.kind, dtype="<i1").tobytes())


def field_from_binary(fh):
    """Read back (nx, ny, h, origin, e0, e1, values, kind)."""
    if fh.read(4) != _BIN_MAGIC:
        raise ValueError("not a field file")
    nx, ny, h = struct.unpack("<iid", fh.read(16))
    frame = struct.unpack("<6d", fh.read(48))
    values = np.frombuffer(fh.read(8 * nx * ny), dtype="<f8").copy()
    kind = np.frombuffer(fh.read(nx * ny), dtype="<i1").copy()
    return dict(nx=nx, ny=ny, h=h, origin=np.array(frame[:2]),
                e0=np.array(frame[2:4]), e1=np.array(frame[4:6]),
                values=values, kind=kind)
