"""Fully nonlinear uniformly elliptic operators F(M, x, y) and their algebra.

Every operator here is degenerate-elliptic in the convention that F is
nonincreasing in the matrix argument, positively one-homogeneous when the
inhomogeneity vanishes, and Z^2-periodic in the fast variable.  The concrete
kinds:

    linear           F = f(x,y) - Tr(A(x,y) M)
    pucci_plus       F = -P+(M) = min over lam I <= A <= Lam I of -Tr(A M)
    pucci_minus      F = -P-(M) = max over the same class of -Tr(A M)
    isaacs           F = f + max_b min_a of -Tr(A_ab(x,y) M), finite families
    directional_min  F = min{ -Tr M, -(M_hh + Lam M_nn) } for an orthonormal
                     frame (h, n); the minimum of two linear branches, concave

The increments of any of these are sandwiched between the extremal operators:
-P+(M - N) <= F(M) - F(N) <= -P-(M - N), which `check_ellipticity` verifies on
random samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .functions import PeriodicFn, const, parse_fn

__all__ = [
    "sym2", "eig2", "pucci_plus", "pucci_minus",
    "EllipticOperator", "linear_operator", "pucci_operator",
    "isaacs_operator", "directional_min_operator",
    "evaluate", "check_ellipticity", "rescale",
    "operator_to_spec", "operator_from_spec",
]


def sym2(a: float, b: float, d: float) -> np.ndarray:
    """2x2 symmetric matrix [[a, b], [b, d]]; symmetric by construction."""
    return np.array([[a, b], [b, d]], dtype=float)


def eig2(m: np.ndarray):
    """Closed-form eigen-decomposition of a symmetric 2x2 matrix.

    Returns (e_lo, e_hi, theta) with e_lo <= e_hi and theta the angle of a
    unit eigenvector for e_hi.  For (near-)multiples of the identity the
    angle is 0, so isotropic matrices snap to the coordinate frame.
    """
    a, b, d = float(m[0, 0]), float(m[0, 1]), float(m[1, 1])
    half_tr = 0.5 * (a + d)
    half_gap = 0.5 * (a - d)
    r = math.hypot(half_gap, b)
    theta = 0.5 * math.atan2(2.0 * b, a - d) if r > 0.0 else 0.0
    return half_tr - r, half_tr + r, theta


def pucci_plus(m: np.ndarray, lam: float, Lam: float) -> float:
    """P+(M) = Lam Tr M_+ - lam Tr M_-, the maximal operator of the class."""
    if not (0.0 < lam <= Lam):
        raise ValueError("need 0 < lam <= Lam")
    e1, e2, _ = eig2(m)
    return sum(Lam * e if e > 0.0 else lam * e for e in (e1, e2))


def pucci_minus(m: np.ndarray, lam: float, Lam: float) -> float:
    """P-(M) = lam Tr M_+ - Lam Tr M_-; equals -P+(-M) exactly."""
    return -pucci_plus(-np.asarray(m, dtype=float), lam, Lam)


# ---------------------------------------------------------------------------
# coefficients: constants, periodic functions of y, or callables of (x, y)
# ---------------------------------------------------------------------------

Coef = "float | PeriodicFn | callable"


def _coef_val(c, x, y):
    if isinstance(c, (int, float)):
        return float(c)
    if isinstance(c, PeriodicFn):
        return c(np.asarray(y, dtype=float))
    return c(np.asarray(x, dtype=float), np.asarray(y, dtype=float))


def _coef_grid(c, xs, ys):
    """Vectorized coefficient evaluation at point arrays of shape (n, 2)."""
    if isinstance(c, (int, float)):
        return np.full(len(ys), float(c))
    if isinstance(c, PeriodicFn):
        return np.asarray(c(ys), dtype=float)
    return np.asarray(c(xs, ys), dtype=float)


def _matrix_at(entries, x, y) -> np.ndarray:
    a = _coef_val(entries[0], x, y)
    b = _coef_val(entries[1], x, y)
    d = _coef_val(entries[2], x, y)
    return sym2(a, b, d)


@dataclass(frozen=True)
class EllipticOperator:
    """A uniformly elliptic operator with constants (lam, Lam).

    ``families`` is the max-over-groups / min-within-group table of
    coefficient matrices for the isaacs and directional_min kinds; each
    matrix is a triple of coefficient entries (a11, a12, a22).  ``f`` is the
    inhomogeneity (zero for the homogeneous kinds).
    """

    kind: str
    lam: float
    Lam: float
    families: tuple = ()          # tuple over groups of tuples of matrix triples
    f: object = 0.0
    frame: np.ndarray | None = field(default=None, compare=False)  # directional_min

    def __post_init__(self):
        if not (0.0 < self.lam <= self.Lam):
            raise ValueError("need 0 < lam <= Lam")
        if self.kind not in ("linear", "pucci_plus", "pucci_minus", "isaacs",
                             "directional_min"):
            raise ValueError(f"unknown operator kind {self.kind!r}")

    @property
    def is_linear(self) -> bool:
        return self.kind == "linear"

    def branch_matrices(self, x, y):
        """Groups of coefficient matrices evaluated at one point (x, y)."""
        return [[_matrix_at(m, x, y) for m in group] for group in self.families]


def linear_operator(a11=1.0, a12=0.0, a22=1.0, f=0.0, lam=None, Lam=None) -> EllipticOperator:
    """F = f - Tr(A M).  Ellipticity constants default to crude bounds."""
    if lam is None or Lam is None:
        # for constant coefficients use the exact eigenvalue range
        if all(isinstance(c, (int, float)) for c in (a11, a12, a22)):
            e1, e2, _ = eig2(sym2(a11, a12, a22))
            lam = lam if lam is not None else e1
            Lam = Lam if Lam is not None else e2
        else:
            raise ValueError("variable coefficients need explicit lam, Lam")
    return EllipticOperator(kind="linear", lam=float(lam), Lam=float(Lam),
                            families=(((a11, a12, a22),),), f=f)


def pucci_operator(sign: str, lam: float, Lam: float) -> EllipticOperator:
    """The extremal operators: sign '+' gives F = -P+, '-' gives F = -P-."""
    kind = "pucci_plus" if sign == "+" else "pucci_minus"
    return EllipticOperator(kind=kind, lam=float(lam), Lam=float(Lam))


def isaacs_operator(families, f=0.0, lam=1.0, Lam=1.0) -> EllipticOperator:
    """F = f + max over groups of min within group of -Tr(A M).

    ``families`` is a sequence of groups; each group a sequence of
    coefficient-matrix triples (a11, a12, a22).
    """
    fam = tuple(tuple(tuple(m) for m in group) for group in families)
    if not fam or any(not g for g in fam):
        raise ValueError("families must be non-empty groups")
    return EllipticOperator(kind="isaacs", lam=float(lam), Lam=float(Lam),
                            families=fam, f=f)


def directional_min_operator(Lam: float, nu) -> EllipticOperator:
    """min{ -Laplacian, -(second derivative along h) - Lam * (along n) }.

    ``nu`` fixes the anisotropy frame: n = nu/|nu| and h = n rotated by 90
    degrees.  Concave (a minimum of two linear branches); for Lam = 1 both
    branches coincide with the negative Laplacian.
    """
    nu = np.asarray(nu, dtype=float)
    nu = nu / np.linalg.norm(nu)
    eta = np.array([nu[1], -nu[0]])
    a2 = np.outer(eta, eta) + Lam * np.outer(nu, nu)
    fam = (((1.0, 0.0, 1.0),
            (a2[0, 0], a2[0, 1], a2[1, 1])),)
    op = EllipticOperator(kind="directional_min", lam=1.0, Lam=float(Lam),
                          families=fam, f=0.0, frame=np.stack([eta, nu]))
    return op


def evaluate(op: EllipticOperator, m: np.ndarray, x=(0.0, 0.0), y=(0.0, 0.0)) -> float:
    """Pointwise value F(M, x, y); exact min-max over the finite families."""
    m = np.asarray(m, dtype=float)
    if op.kind == "pucci_plus":
        return -pucci_plus(m, op.lam, op.Lam)
    if op.kind == "pucci_minus":
        return -pucci_minus(m, op.lam, op.Lam)
    fval = _coef_val(op.f, x, y)
    groups = op.branch_matrices(x, y)
    val = max(min(-float(np.tensordot(a, m)) for a in group) for group in groups)
    return fval + val


def check_ellipticity(op: EllipticOperator, n_samples: int = 200, seed: int = 0,
                      tol: float = 1e-9):
    """Sample the extremal-operator sandwich and the ellipticity increments.

    For random symmetric M, N and points (x, y) checks

        -P+(M - N) <= F(M,y) - F(N,y) <= -P-(M - N)

    and, for N >= 0,  lam Tr N <= F(M,y) - F(M+N,y) <= Lam Tr N.
    Returns a report carrying the first few violating triples, if any.
    """
    rng = np.random.default_rng(seed)
    violations = []
    for _ in range(n_samples):
        m = sym2(*rng.normal(size=3) * 2.0)
        n = sym2(*rng.normal(size=3) * 2.0)
        x = rng.uniform(0.0, 1.0, size=2)
        y = rng.uniform(0.0, 1.0, size=2)
        dm = m - n
        diff = evaluate(op, m, x, y) - evaluate(op, n, x, y)
        lo = -pucci_plus(dm, op.lam, op.Lam)
        hi = -pucci_minus(dm, op.lam, op.Lam)
        if not (lo - tol <= diff <= hi + tol):
            violations.append(("sandwich", m, n, y, diff, lo, hi))
        # increments against a nonnegative perturbation
        w = rng.normal(size=(2, 2))
        npsd = w @ w.T  # symmetric psd
        dec = evaluate(op, m, x, y) - evaluate(op, m + npsd, x, y)
        tr = float(np.trace(npsd))
        if not (op.lam * tr - tol <= dec <= op.Lam * tr + tol):
            violations.append(("increment", m, npsd, y, dec, op.lam * tr, op.Lam * tr))
        if len(violations) >= 5:
            break
    return EllipticityReport(passed=not violations, n_samples=n_samples,
                             violations=tuple(violations))


@dataclass(frozen=True)
class EllipticityReport:
    passed: bool
    n_samples: int
    violations: tuple


def rescale(op: EllipticOperator, x) -> EllipticOperator:
    """Blow-up limit at x: coefficients frozen at x, inhomogeneity dropped.

    The result is positively one-homogeneous (vanishes on M = 0) and depends
    on the fast variable only.
    """
    if op.kind not in ("linear", "isaacs", "directional_min"):
        return op
    x = np.asarray(x, dtype=float)

    def freeze(c):
        if isinstance(c, (int, float, PeriodicFn)):
            return c
        return lambda _x, y, _c=c, _x0=x: _c(np.broadcast_to(_x0, np.shape(y)) if np.ndim(y) > 1 else _x0, y)

    fam = tuple(tuple(tuple(freeze(e) for e in mat) for mat in group)
                for group in op.families)
    return EllipticOperator(kind=op.kind, lam=op.lam, Lam=op.Lam, families=fam,
                            f=0.0, frame=op.frame)


# ---------------------------------------------------------------------------
# flat-text serialization (kind, constants, coefficient expressions)
# ---------------------------------------------------------------------------

def _coef_text(c) -> str:
    if isinstance(c, (int, float)):
        return repr(float(c))
    if isinstance(c, PeriodicFn):
        return c.to_text()
    raise ValueError("callable coefficients are not serializable")


def operator_to_spec(op: EllipticOperator) -> dict:
    out = {"kind": op.kind, "lambda": repr(op.lam), "Lambda": repr(op.Lam)}
    if op.kind in ("pucci_plus", "pucci_minus"):
        return out
    if op.kind == "directional_min":
        out["nu"] = f"{float(op.frame[1][0])!r},{float(op.frame[1][1])!r}"
        return out
    out["f"] = _coef_text(op.f)
    for bi, group in enumerate(op.families):
        for ai, mat in enumerate(group):
            for name, c in zip(("11", "12", "22"), mat):
                out[f"a_{bi}_{ai}_{name}"] = _coef_text(c)
    return out


def _coef_parse(text: str):
    try:
        return float(text)
    except ValueError:
        return parse_fn(text)


def operator_from_spec(spec: dict) -> EllipticOperator:
    kind = spec["kind"]
    lam = float(spec["lambda"])
    Lam = float(spec["Lambda"])
    if kind in ("pucci_plus", "pucci_minus"):
        return pucci_operator("+" if kind == "pucci_plus" else "-", lam, Lam)
    if kind == "directional_min":
        nu = np.array([float(t) for t in spec["nu"].split(",")])
        return directional_min_operator(Lam, nu)
    f = _coef_parse(spec.get("f", "0.0"))
    groups: dict[int, dict[int, list]] = {}
    for key, text in spec.items():
        if not key.startswith("a_"):
            continue
        _, bi, ai, entry = key.split("_")
        mat = groups.setdefault(int(bi), {}).setdefault(int(ai), [None, None, None])
        mat[("11", "12", "22").index(entry)] = _coef_parse(text)
    fam = tuple(tuple(tuple(groups[bi][ai]) for ai in sorted(groups[bi]))
                for bi in sorted(groups))
    if kind == "linear":
        mat = fam[0][0]
        return linear_operator(*mat, f=f, lam=lam, Lam=Lam)
    return isaacs_operator(fam, f=f, lam=lam, Lam=Lam)
