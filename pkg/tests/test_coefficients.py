import itertools
import math

import numpy as np
import pytest

from splab.coefficients import (
    check_lemma1,
    coeff_sq_sum,
    integral_mean_sq,
    series_mean_sq,
)
from splab.core import ParameterError
from splab.holomap import PolyMap, catalog
from splab.mapgen import GenConfig, random_polymap


def brute_mean(f, sigma, N):
    """Plain nested-loop trapezoid sum, independent of the vectorized path."""
    nodes = [sigma * complex(math.cos(2 * math.pi * k / N), math.sin(2 * math.pi * k / N))
             for k in range(N)]
    total = 0.0
    for z in itertools.product(nodes, repeat=f.n):
        v = f.values(np.array(z))[0]
        total += float(np.vdot(v, v).real)
    return total / N**f.n


def test_coeff_sum_equality28():
    s = coeff_sq_sum(catalog("equality-28"))
    assert s.sq_sum == pytest.approx(1.0, abs=1e-15)
    assert s.by_degree == {1: pytest.approx(1.0)}


def test_coeff_sum_constant():
    s = coeff_sq_sum(PolyMap({(0, 0): [0.3 + 0.4j]}))
    assert s.sq_sum == pytest.approx(0.25)


def test_coeff_sum_counterexample():
    s = coeff_sq_sum(catalog("polydisk-counterexample"))
    assert s.sq_sum == pytest.approx(1 / 3 + 1 / 3 + 0.01 / 3, abs=1e-15)
    assert s.sq_sum == pytest.approx(0.67, abs=1e-12)
    assert sum(s.by_degree.values()) == pytest.approx(s.sq_sum)


def test_coeff_sum_rejects_rational():
    with pytest.raises(TypeError):
        coeff_sq_sum(catalog("remark3-gtilde"))


def test_mean_equality28():
    assert integral_mean_sq(catalog("equality-28"), 0.5, 8).value == pytest.approx(0.25, abs=1e-15)


@pytest.mark.parametrize("sigma", [0.1, 0.5, 0.95])
def test_mean_constant(sigma):
    f = PolyMap({(0, 0, 0): [0.2, 0.3j]})
    assert integral_mean_sq(f, sigma, 4).value == pytest.approx(0.13, abs=1e-15)


@pytest.mark.parametrize("k", [1, 2, 5])
def test_mean_single_monomial(k):
    f = PolyMap({(k,): [1.0]})
    assert integral_mean_sq(f, 0.7, 16).value == pytest.approx(0.7 ** (2 * k), abs=1e-15)


def test_mean_matches_brute_force():
    f = random_polymap(GenConfig(2, 2, 3, seed=4))
    assert integral_mean_sq(f, 0.6, 12).value == pytest.approx(brute_mean(f, 0.6, 12), abs=1e-14)
    g = catalog("remark3-gtilde")
    assert integral_mean_sq(g, 0.5, 10).value == pytest.approx(brute_mean(g, 0.5, 10), abs=1e-14)


def test_mean_argument_checks():
    with pytest.raises(ParameterError):
        integral_mean_sq(catalog("equality-28"), 1.0)
    with pytest.raises(ParameterError):
        integral_mean_sq(catalog("equality-28"), 0.5, N=2)


@pytest.mark.parametrize("seed", range(6))
def test_parseval(seed):
    f = random_polymap(GenConfig(2 + seed % 2, 2, 3, seed=seed))
    for sigma in (0.3, 0.6, 0.9):
        q = integral_mean_sq(f, sigma, 2 * f.maxdeg + 1)
        assert abs(q.value - series_mean_sq(f, sigma)) <= 1e-8


def test_monotone_in_sigma():
    f = random_polymap(GenConfig(2, 3, 3, seed=11))
    means = [integral_mean_sq(f, s, 16).value for s in np.linspace(0.05, 0.95, 10)]
    assert all(b >= a for a, b in zip(means, means[1:]))


@pytest.mark.parametrize(
    "name, expected",
    [("equality-28", 1.0), ("polydisk-counterexample", 0.67), ("remark3-g", 0.5),
     ("pavlovic", 1.0)],
)
def test_check_lemma1_catalog(name, expected):
    r = check_lemma1(catalog(name))
    assert r.lhs == pytest.approx(expected, abs=1e-12)
    assert r.rhs == 1.0
    assert r.passed
    assert max(r.details["residuals"]) <= 1e-8
    assert r.details["monotone"]


def test_check_lemma1_flags_out_of_ball():
    r = check_lemma1(PolyMap({(1,): [0.9], (0,): [0.9]}))
    assert not r.passed


def test_rational_quadrature_converges():
    g = catalog("remark3-gtilde")
    for sigma in (0.3, 0.6, 0.9):
        a = integral_mean_sq(g, sigma, 128).value
        b = integral_mean_sq(g, sigma, 256).value
        assert abs(a - b) < 1e-8


@pytest.mark.parametrize("sigma", [0.9, 0.99, 0.999])
def test_rational_means_stay_bounded(sigma):
    assert integral_mean_sq(catalog("remark3-gtilde"), sigma, 256).value <= 1 + 1e-6
