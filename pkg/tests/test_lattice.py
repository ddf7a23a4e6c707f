import math

import numpy as np
import pytest

from homobc.discrepancy import omega, slopes
from homobc.lattice import Hyperplane, approach_point, nearest_lattice_point
from oracles import lattice_box_min


def plane(nu, x0):
    return Hyperplane(direction=slopes(np.asarray(nu, dtype=float)),
                      x0=np.asarray(x0, dtype=float))


def test_axis_direction_hits_plane_exactly():
    h = plane([0.0, 1.0], [0.0, 0.0])
    ap = approach_point(h, np.array([3.0, 0.0]), 2)
    assert np.allclose(ap.y, [3.0, 0.0])
    assert ap.distance == 0.0


def test_quadratic_irrational_beats_modulus_and_box_oracle():
    nu = [1.0, math.sqrt(2.0)]
    h = plane(nu, [0.0, 0.0])
    x = np.array([0.0, 0.0])
    ap = approach_point(h, x, 50)
    bound = omega(h.direction, 50)
    assert ap.distance < bound + 1e-9
    assert np.max(np.abs((ap.y - h.x0) - np.round(ap.y - h.x0))) < 1e-9
    assert np.linalg.norm(ap.y - x) <= ap.search_radius
    # the best point in the same box can only be better
    assert lattice_box_min(h.direction.nu, h.x0, x, ap.search_radius) <= ap.distance + 1e-12


def test_golden_direction_offset_plane():
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    h = plane([1.0, phi], [0.3, 0.7])
    ap = approach_point(h, np.array([0.3, 0.7]), 100)
    rel = ap.y - h.x0
    assert np.max(np.abs(rel - np.round(rel))) < 1e-9
    assert ap.distance < omega(h.direction, 100)


def test_rejects_small_n():
    h = plane([0.0, 1.0], [0.0, 0.0])
    with pytest.raises(ValueError):
        approach_point(h, np.array([0.0, 0.0]), 1.0)


def test_rejects_off_plane_anchor():
    h = plane([0.0, 1.0], [0.0, 0.0])
    with pytest.raises(ValueError):
        approach_point(h, np.array([0.0, 0.5]), 10)


def test_translation_covariance():
    nu = [1.0, math.sqrt(2.0)]
    x0 = np.array([0.25, 0.1])
    x = x0.copy()
    base = approach_point(plane(nu, x0), x, 40)
    for z in ([1, 0], [2, -3], [-5, 7]):
        z = np.asarray(z, dtype=float)
        moved = approach_point(plane(nu, x0 + z), x + z, 40)
        assert moved.distance == pytest.approx(base.distance, abs=1e-12)


def test_nearest_lattice_point_axis_cases():
    h = plane([0.0, 1.0], [0.0, 0.0])
    res = nearest_lattice_point(h, delta=0.01)
    assert np.allclose(res.y, np.round(res.y))
    assert res.distance <= 1e-12

    h2 = plane([0.0, 1.0], [0.0, 0.5])
    res2 = nearest_lattice_point(h2, delta=0.01, n_max=50)
    assert res2.distance == pytest.approx(0.5, abs=1e-12)


def test_nearest_lattice_point_vs_exhaustive():
    h = plane([1.0, math.sqrt(2.0)], [0.25, 0.25])
    res = nearest_lattice_point(h, delta=0.01, n_max=500)
    assert np.max(np.abs(res.y - np.round(res.y))) < 1e-9
    # exhaustive minimum over a box of side 2 * n_max around x0
    lo = np.floor(h.x0 - 500).astype(int)
    hi = np.ceil(h.x0 + 500).astype(int)
    z1 = np.arange(lo[0], hi[0] + 1)
    z2 = np.arange(lo[1], hi[1] + 1)
    zz1, zz2 = np.meshgrid(z1, z2, indexing="ij")
    d = np.abs((zz1 - h.x0[0]) * h.direction.nu[0]
               + (zz2 - h.x0[1]) * h.direction.nu[1])
    assert res.distance <= float(d.min()) + 0.01


def test_acceptance_style_random_directions():
    rng = np.random.default_rng(3)
    for _ in range(10):
        theta = rng.uniform(0.1, math.pi / 2 - 0.1)
        nu = [math.cos(theta), math.sin(theta)]
        x0 = rng.uniform(-1, 1, size=2)
        h = plane(nu, x0)
        ap = approach_point(h, x0, 60)
        assert ap.distance < omega(h.direction, 60) + 1e-9
        rel = ap.y - h.x0
        assert np.max(np.abs(rel - np.round(rel))) < 1e-9
        assert np.linalg.norm(ap.y - x0) <= (2 * math.sqrt(2) + 1) * 60
