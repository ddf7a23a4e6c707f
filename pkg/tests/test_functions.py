import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from homobc.functions import PeriodicFn, cell_average, const, cos_k, parse_fn, sin_k


def test_primitive_values():
    f = cos_k(1, 0)
    assert f(np.array([0.0, 0.3])) == pytest.approx(1.0)
    assert f(np.array([0.25, 0.9])) == pytest.approx(0.0, abs=1e-15)
    g = sin_k(2, 1)
    assert g(np.array([0.4, 0.125])) == pytest.approx(1.0)


def test_algebra_and_parts():
    f = 0.5 * cos_k(1, 0) + const(0.25)
    assert f(np.array([0.0, 0.0])) == pytest.approx(0.75)
    p = PeriodicFn("pos", children=(cos_k(1, 0),))
    n = PeriodicFn("neg", children=(cos_k(1, 0),))
    x = np.array([0.4, 0.0])
    assert p(x) == pytest.approx(max(math.cos(2 * math.pi * 0.4), 0.0))
    assert n(x) == pytest.approx(max(-math.cos(2 * math.pi * 0.4), 0.0))
    assert p(x) - n(x) == pytest.approx(cos_k(1, 0)(x))


def test_shift_translates():
    f = cos_k(1, 0).shifted((0.25, 0.0))
    assert f(np.array([0.0, 0.0])) == pytest.approx(0.0, abs=1e-15)


@given(st.floats(-3, 3), st.floats(-3, 3),
       st.integers(-2, 2), st.integers(-2, 2))
def test_lattice_periodicity(x, y, zx, zy):
    f = cos_k(2, 0) * sin_k(1, 1) + 0.3 * cos_k(1, 1)
    p = np.array([x, y])
    q = p + np.array([zx, zy], dtype=float)
    assert f(q) == pytest.approx(f(p), abs=5e-13)


def test_bounds_cover_samples():
    f = cos_k(3, 0) * sin_k(2, 1) + 0.5 * cos_k(1, 0)
    rng = np.random.default_rng(0)
    pts = rng.uniform(0, 1, size=(500, 2))
    vals = f(pts)
    assert np.max(np.abs(vals)) <= f.sup_bound() + 1e-12
    # Lipschitz bound against sampled difference quotients
    d = rng.uniform(-1e-3, 1e-3, size=(500, 2))
    quot = np.abs(f(pts + d) - vals) / np.linalg.norm(d, axis=1)
    assert np.max(quot) <= f.lip_bound() + 1e-6


def test_holder_interpolation_bound():
    f = cos_k(1, 0)
    alpha = 0.5
    sem = f.holder_seminorm(alpha)
    rng = np.random.default_rng(1)
    p = rng.uniform(0, 1, size=(400, 2))
    q = rng.uniform(0, 1, size=(400, 2))
    num = np.abs(f(p) - f(q))
    den = np.linalg.norm(p - q, axis=1) ** alpha
    ok = den > 0
    assert np.max(num[ok] / den[ok]) <= sem + 1e-9


@pytest.mark.parametrize("text", [
    "cos(1,1)",
    "0.5*cos(1,1) + pos(sin(2,2))",
    "cos(1,1)*sin(1,2) + -0.25",
    "shift(cos(1,1);0.25,0.5)",
    "neg(cos(2,1)) + 1.5*sin(3,2)",
])
def test_parse_roundtrip(text):
    f = parse_fn(text)
    g = parse_fn(f.to_text())
    rng = np.random.default_rng(2)
    pts = rng.uniform(0, 1, size=(64, 2))
    assert np.allclose(f(pts), g(pts), atol=0)


def test_parse_rejects_junk():
    for bad in ("cos(1)", "foo(2,1)", "cos(1,1) +", "cos(1,1))"):
        with pytest.raises(ValueError):
            parse_fn(bad)


def test_cell_average_values():
    assert cell_average(cos_k(1, 0)) == pytest.approx(0.0, abs=1e-12)
    assert cell_average(cos_k(1, 0) * cos_k(1, 0)) == pytest.approx(0.5, abs=1e-10)
    assert cell_average(const(0.7)) == pytest.approx(0.7, abs=1e-12)


def test_cell_average_kinked_profile():
    # e^{-a} [cos]_+ - e^{-b} [cos]_- profile: exact integral (e^{-a} - e^{-b})/pi
    lam = 16.0
    a, b = lam ** -0.25, lam ** 0.25
    f = (math.exp(-a) * PeriodicFn("pos", children=(cos_k(1, 0),))
         + (-math.exp(-b)) * PeriodicFn("neg", children=(cos_k(1, 0),)))
    exact = (math.exp(-a) - math.exp(-b)) / math.pi
    assert cell_average(f, panels=512) == pytest.approx(exact, abs=2e-6)
    assert exact == pytest.approx(0.14998, abs=1e-4)
