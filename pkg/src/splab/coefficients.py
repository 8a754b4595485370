"""Coefficient square sums and integral means of ``|f|^2`` over tori.

For ``f = sum_alpha a_alpha z^alpha`` orthogonality of the monomials on the
torus ``|z_j| = sigma`` gives

    (2 pi)^-n \\int |f(sigma e^{i theta})|^2 d theta = sum_alpha |a_alpha|^2 sigma^(2|alpha|),

and a map into the unit ball therefore has ``sum_alpha |a_alpha|^2 <= 1``.
The integral is computed with the equispaced trapezoid rule, which is exact
for trigonometric polynomials of degree below the number of nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .core import ParameterError
from .holomap import HoloMap, PolyMap
from .inequalities import CheckReport

DEFAULT_N = 64
LEMMA_SIGMAS = (0.3, 0.6, 0.9)
_CHUNK = 1 << 16


@dataclass(frozen=True)
class TorusQuadrature:
    sigma: float
    points_per_dim: int
    value: float


@dataclass(frozen=True)
class CoeffSummary:
    sq_sum: float
    by_degree: dict[int, float] = field(default_factory=dict)


def coeff_sq_sum(f: PolyMap) -> CoeffSummary:
    """``sum_alpha |a_alpha|^2`` with the partial sums per total degree."""
    if not isinstance(f, PolyMap):
        raise TypeError("coefficient sums need a polynomial map")
    by_degree: dict[int, float] = {}
    for alpha, coeff in f.terms.items():
        d = sum(alpha)
        by_degree[d] = by_degree.get(d, 0.0) + float(np.sum(np.abs(coeff) ** 2))
    return CoeffSummary(sum(by_degree.values()), dict(sorted(by_degree.items())))


def series_mean_sq(f: PolyMap, sigma: float) -> float:
    """``sum_alpha |a_alpha|^2 sigma^(2|alpha|)`` straight from the coefficients."""
    return float(sum(np.sum(np.abs(c) ** 2) * sigma ** (2 * sum(a)) for a, c in f.terms.items()))


def integral_mean_sq(f: HoloMap, sigma: float, N: int = DEFAULT_N) -> TorusQuadrature:
    """Trapezoid-rule mean of ``|f|^2`` over the torus of radius ``sigma``, ``N`` nodes per axis."""
    if not 0 < sigma < 1:
        raise ParameterError(f"sigma must lie in (0, 1), got {sigma}")
    if N < 4:
        raise ParameterError(f"need at least 4 nodes per dimension, got {N}")
    axis = sigma * np.exp(2j * np.pi * np.arange(N) / N)
    total = 0.0
    count = N**f.n
    # walk the tensor grid in flat chunks to bound memory
    for start in range(0, count, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, count))
        digits = np.stack(np.unravel_index(idx, (N,) * f.n), axis=1)
        vals = f.values(axis[digits])
        total += float(np.sum(vals.real**2 + vals.imag**2))
    return TorusQuadrature(float(sigma), int(N), total / count)


def check_lemma1(f: PolyMap, sigmas=LEMMA_SIGMAS, N: int = DEFAULT_N, tol: float = 1e-9,
                 quad_tol: float = 1e-8) -> CheckReport:
    """Coefficient bound ``sum |a_alpha|^2 <= 1`` plus the quadrature identity behind it.

    ``passed`` requires the bound, quadrature/series agreement at each sigma
    within ``quad_tol`` and means nondecreasing in sigma.
    """
    summary = coeff_sq_sum(f)
    sigmas = sorted(sigmas)
    means, residuals = [], []
    for s in sigmas:
        q = integral_mean_sq(f, s, N)
        means.append(q.value)
        residuals.append(abs(q.value - series_mean_sq(f, s)))
    monotone = all(b >= a - quad_tol for a, b in zip(means, means[1:]))
    rep = CheckReport.build(
        "coefficient-sum", summary.sq_sum, 1.0, "coefficients", np.zeros(f.n), tol,
        sigmas=sigmas, means=means, residuals=residuals, monotone=monotone,
        by_degree=summary.by_degree,
    )
    ok = rep.passed and monotone and max(residuals, default=0.0) <= quad_tol
    return replace(rep, passed=ok)
