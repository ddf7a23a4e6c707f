import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homobc.discrepancy import (UnitSequence, classify_rationality, discrepancy,
                                discrepancy_star, frac, omega,
                                rotation_discrepancy, slopes)
from oracles import interval_discrepancy_scan, star_discrepancy_scan

PHI = (math.sqrt(5.0) - 1.0) / 2.0


def test_frac_values():
    assert frac(1.25) == 0.25
    assert frac(-0.25) == 0.75
    assert frac(3.0) == 0.0


def test_star_single_point():
    assert discrepancy_star([0.5]) == pytest.approx(0.5, abs=1e-15)


def test_star_perfectly_spread():
    n = 17
    pts = (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)
    assert discrepancy_star(pts) == pytest.approx(1.0 / (2 * n), abs=1e-15)


def test_star_matches_scan_oracle_on_golden_orbit():
    pts = frac(np.arange(1, 101) * PHI)
    assert discrepancy_star(pts) == pytest.approx(star_discrepancy_scan(pts), abs=1e-12)


def test_interval_discrepancy_single_point():
    d = discrepancy([0.5])
    ds = discrepancy_star([0.5])
    assert 0.5 <= d <= 1.0
    assert ds <= d <= 2 * ds


def test_interval_discrepancy_spread_points():
    n = 12
    pts = (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)
    d = discrepancy(pts)
    assert d == pytest.approx(1.0 / n, abs=1e-12)
    assert discrepancy_star(pts) - 1e-12 <= d <= 2 * discrepancy_star(pts) + 1e-12


def test_interval_discrepancy_matches_scan_oracle():
    rng = np.random.default_rng(7)
    for n in (1, 2, 5, 23):
        pts = rng.uniform(0, 1, size=n)
        assert discrepancy(pts) == pytest.approx(
            interval_discrepancy_scan(pts), abs=1e-12)


def test_golden_orbit_sandwich_n500():
    pts = frac(np.arange(1, 501) * PHI)
    d, ds = discrepancy(pts), discrepancy_star(pts)
    assert ds - 1e-12 <= d <= 2 * ds + 1e-12


@given(st.lists(st.floats(min_value=0.0, max_value=1.0, exclude_max=True,
                          allow_nan=False), min_size=1, max_size=60))
def test_sandwich_property(pts):
    seq = UnitSequence(np.array(pts))
    d, ds = discrepancy(seq), discrepancy_star(seq)
    assert ds - 1e-12 <= d <= 2 * ds + 1e-12
    assert 1.0 / (2 * seq.n) - 1e-15 <= ds <= 1.0 + 1e-15


@given(st.lists(st.floats(min_value=0.0, max_value=1.0, exclude_max=True,
                          allow_nan=False), min_size=2, max_size=40),
       st.randoms())
def test_star_permutation_invariance(pts, rnd):
    shuffled = list(pts)
    rnd.shuffle(shuffled)
    assert discrepancy_star(np.array(pts)) == discrepancy_star(np.array(shuffled))


def test_empty_sequence_rejected():
    with pytest.raises(ValueError):
        UnitSequence(np.array([]))


def test_rotation_zero():
    for n in (1, 5, 50):
        assert rotation_discrepancy(0.0, n) == pytest.approx(1.0, abs=1e-15)


def test_rotation_half_n2():
    # orbit {0.5, 0.0}; sorted {0, 0.5}; 1/4 + max(1/4, 1/4) = 1/2
    assert rotation_discrepancy(0.5, 2) == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("x", [PHI, math.sqrt(2.0) - 1.0, math.pi - 3.0])
@pytest.mark.parametrize("n", [100, 1000, 10000])
def test_equidistribution_rate(x, n):
    assert rotation_discrepancy(x, n) <= 10.0 * math.log(n) / n


def test_local_continuity_at_irrational():
    base = rotation_discrepancy(PHI, 50)
    pert = rotation_discrepancy(PHI + 1e-12, 50)
    assert abs(base - pert) < 1e-9


def test_slopes_axis():
    d = slopes(np.array([0.0, 1.0]))
    assert d.dominant == 1
    assert np.allclose(d.m, [0.0, 1.0])


def test_slopes_tie_breaks_to_largest_index():
    d = slopes(np.array([1.0, 1.0]) / math.sqrt(2.0))
    assert d.dominant == 1
    assert np.allclose(d.m, [1.0, 1.0])


def test_slopes_normalizes_and_scales():
    d = slopes(np.array([1.0, math.sqrt(2.0)]))
    assert d.dominant == 1
    assert d.m[0] == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-15)
    assert d.m[1] == 1.0
    # defining identity m_j |nu|_inf = |nu_j|, up to roundoff of the division
    assert d.m[0] * abs(d.nu[1]) == pytest.approx(abs(d.nu[0]), abs=1e-15)


def test_omega_axis_direction():
    assert omega(slopes(np.array([0.0, 1.0])), 10) == pytest.approx(2.0)


def test_omega_quadratic_irrational_small():
    assert omega(slopes(np.array([1.0, math.sqrt(2.0)])), 1000) < 0.05


def test_omega_requires_n_above_one():
    with pytest.raises(ValueError):
        omega(slopes(np.array([0.0, 1.0])), 1.0)


def test_omega_running_inf_monotone():
    d = slopes(np.array([1.0, math.sqrt(2.0)]))
    ns = [2, 3, 5, 8, 13, 21, 55, 144]
    infs = np.minimum.accumulate([omega(d, n) for n in ns])
    assert np.all(np.diff(infs) <= 1e-15)


def test_classify_axis():
    r = classify_rationality(np.array([1.0, 0.0]))
    assert r.is_rational and r.vector == (1, 0) and r.scale == 1


def test_classify_pythagorean():
    r = classify_rationality(np.array([3.0, 4.0]) / 5.0)
    assert r.is_rational
    assert r.vector == (3, 4)


def test_classify_irrational_direction():
    r = classify_rationality(np.array([1.0, math.sqrt(2.0)]) / math.sqrt(3.0),
                             qbound=10**6)
    assert not r.is_rational
    assert r.bound == 10**6


@settings(max_examples=25)
@given(st.integers(min_value=-20, max_value=20),
       st.integers(min_value=-20, max_value=20))
def test_classify_rational_lattice_directions(p, q):
    if p == 0 and q == 0:
        return
    r = classify_rationality(np.array([p, q], dtype=float) / math.hypot(p, q))
    assert r.is_rational
    g = math.gcd(abs(p), abs(q))
    assert tuple(abs(t) for t in r.vector) == (abs(p) // g, abs(q) // g)
