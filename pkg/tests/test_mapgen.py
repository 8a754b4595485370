import math

import numpy as np
import pytest

from splab.core import ParameterError
from splab.holomap import PolyMap, catalog, evaluate, jacobian
from splab.inequalities import check_theorem1
from splab.mapgen import (
    GenConfig,
    coeff_abs_sum,
    grid_points,
    make_rng,
    random_points,
    random_polymap,
    random_remark2_instance,
    remark2_map,
    remark3_pair,
    scan_sharpness,
)

from conftest import uniform_points

S2 = 1 / math.sqrt(2)


@pytest.mark.parametrize("seed", [0, 1, 2**63 + 5])
def test_random_polymap_abs_sum(seed):
    f = random_polymap(GenConfig(3, 2, 3, seed=seed, margin=0.05))
    assert coeff_abs_sum(f) == pytest.approx(0.95, abs=1e-12)


def test_random_polymap_constant():
    f = random_polymap(GenConfig(2, 3, 0, seed=9, margin=0.05))
    assert list(f.terms) == [(0, 0)]
    assert np.linalg.norm(f.terms[(0, 0)]) == pytest.approx(0.95, abs=1e-12)


def test_random_polymap_deterministic():
    cfg = GenConfig(2, 2, 2, seed=42)
    a, b = random_polymap(cfg), random_polymap(cfg)
    assert list(a.terms) == list(b.terms)
    for k in a.terms:
        assert np.array_equal(a.terms[k], b.terms[k])
    c = random_polymap(GenConfig(2, 2, 2, seed=43))
    assert not np.array_equal(a.terms[(0, 0)], c.terms[(0, 0)])


@pytest.mark.parametrize("seed", range(5))
def test_random_polymap_containment(seed, rng):
    cfg = GenConfig(2, 3, 3, seed=seed, margin=0.05)
    f = random_polymap(cfg)
    norms = np.linalg.norm(f.values(uniform_points(2, 1000, rng, radius=0.9999)), axis=1)
    assert np.all(norms <= 1 - cfg.margin / 2)
    assert np.all(norms <= 0.95)


def test_gen_config_validation():
    with pytest.raises(ParameterError):
        GenConfig(0, 1, 1)
    with pytest.raises(ParameterError):
        GenConfig(1, 1, -1)
    with pytest.raises(ParameterError):
        GenConfig(1, 1, 1, margin=0)


def test_random_points_inside():
    pts = random_points(3, 500, make_rng(1), radius=0.98)
    assert pts.shape == (500, 3)
    assert np.max(np.abs(pts)) <= 0.98


def test_grid_points():
    pts = grid_points(2)
    assert pts.shape == (25**2, 2)
    assert np.array_equal(pts[0], [0, 0])


# remark 2


def test_remark2_origin_standard_basis():
    f = remark2_map([0, 0], [[S2, 0], [0, S2]])
    z = np.array([0.3 - 0.2j, 0.1j])
    assert np.allclose(evaluate(f, z), -S2 * z, atol=1e-15)
    r = check_theorem1(f, [0, 0])
    assert r.branch == "zero"
    assert r.lhs == pytest.approx(1.0, abs=1e-12)


def test_remark2_vanishes_and_recovers_v():
    rng = make_rng(5)
    for _ in range(10):
        p, v = random_remark2_instance(2, 3, rng)
        f = remark2_map(p, v)
        assert np.linalg.norm(evaluate(f, p)) <= 1e-15
        J = jacobian(f, p)
        for j in range(2):
            assert np.allclose(J[:, j] * (-1 + abs(p[j]) ** 2), v[j], atol=1e-12)


def test_remark2_equality_sweep():
    rng = make_rng(8)
    for n, m in [(2, 2), (2, 3), (3, 3)]:
        for _ in range(10):
            p, v = random_remark2_instance(n, m, rng)
            r = check_theorem1(remark2_map(p, v), p)
            assert r.branch == "zero"
            assert abs(r.lhs - 1) <= 1e-9


def test_remark2_lands_in_ball(rng):
    p, v = random_remark2_instance(2, 2, make_rng(3))
    f = remark2_map(p, v)
    assert np.all(np.linalg.norm(f.values(uniform_points(2, 1000, rng, 0.999)), axis=1) < 1)


def test_remark2_rejects_bad_vectors():
    with pytest.raises(ParameterError):
        remark2_map([0, 0], [[S2, 0], [S2, 0]])
    with pytest.raises(ParameterError):
        remark2_map([0, 0], [[1, 0], [0, 1]])
    with pytest.raises(ParameterError):
        remark2_map([0], [[1, 0], [0, 1]])


# remark 3


def test_remark3_pair():
    g, gt = remark3_pair()
    for h in (g, gt):
        assert abs(evaluate(h, [0, 0])[0]) <= 1e-15
        assert np.sum(np.abs(jacobian(h, [0, 0]))) == pytest.approx(1.0, abs=1e-15)
    assert evaluate(g, [0.5, 0.5])[0] == pytest.approx(0.5)
    assert evaluate(gt, [0.5, 0.5])[0] == pytest.approx(0.5)
    assert evaluate(g, [0.5, -0.5])[0] == pytest.approx(0.0)
    assert evaluate(gt, [0.5, -0.5])[0] == pytest.approx(0.25)


# scanner


def test_scan_equality8():
    res = scan_sharpness(catalog("equality-8"), "grid")
    assert res.worst_ratio == pytest.approx(1.0, abs=1e-12)
    assert res.argmax == (0j, 0j)
    res = scan_sharpness(catalog("equality-8"), "random", count=200, seed=1)
    assert res.worst_ratio == pytest.approx(1.0, abs=1e-12)


def test_scan_constant():
    res = scan_sharpness(PolyMap({(0, 0): [0.3, 0.1]}), "random", count=100, seed=2)
    assert res.worst_ratio == 0.0


@pytest.mark.parametrize("seed", range(3))
def test_scan_random_maps(seed):
    f = random_polymap(GenConfig(2, 2, 3, seed=seed))
    res = scan_sharpness(f, "random", count=300, seed=seed)
    assert res.worst_ratio <= 1 + 1e-9
    assert res.failures == 0


def test_scan_unknown_sampler():
    with pytest.raises(ParameterError):
        scan_sharpness(catalog("equality-8"), "sobol")
