"""Random maps certified to land in the unit ball, structured extremal maps,
point samplers and the sharpness scanner.

Random streams come from numpy's Philox counter-based bit generator keyed by
the seed, so a given seed reproduces the same coefficients everywhere numpy
runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ParameterError, PolydiskPoint, as_vector, multi_indices
from .holomap import HoloMap, MoebiusComposed, PolyMap, catalog
from .inequalities import TOL, route_check

GRID_RADII = (0.3, 0.6, 0.9)
GRID_PHASES = 8
SAMPLE_RADIUS = 0.98


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed) & 0xFFFFFFFFFFFFFFFF))


@dataclass(frozen=True)
class GenConfig:
    n: int
    m: int
    maxdeg: int
    seed: int = 0
    margin: float = 0.05

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ParameterError(f"n and m must be >= 1, got n={self.n}, m={self.m}")
        if self.maxdeg < 0:
            raise ParameterError("maxdeg must be >= 0")
        if not 0 < self.margin < 1:
            raise ParameterError("margin must lie in (0, 1)")


def random_polymap(cfg: GenConfig) -> PolyMap:
    """Polynomial map with total degree ``<= cfg.maxdeg`` and ``sum |a_alpha| = 1 - margin``.

    Since ``|f(z)| <= sum_alpha |a_alpha| |z^alpha| < sum_alpha |a_alpha|`` on the
    polydisk, the image lies in the ball of radius ``1 - margin``.
    """
    rng = make_rng(cfg.seed)
    alphas = multi_indices(cfg.n, cfg.maxdeg)
    raw = rng.standard_normal((len(alphas), cfg.m)) + 1j * rng.standard_normal((len(alphas), cfg.m))
    # random per-term weights so some terms dominate
    raw *= rng.uniform(0.0, 1.0, size=(len(alphas), 1))
    total = np.sum(np.linalg.norm(raw, axis=1))
    coeffs = raw * ((1 - cfg.margin) / total)
    return PolyMap(dict(zip(alphas, coeffs)), n=cfg.n, m=cfg.m)


def coeff_abs_sum(f: PolyMap) -> float:
    return float(sum(np.linalg.norm(c) for c in f.terms.values()))


# --------------------------------------------------------------------------
# points


def random_points(n: int, count: int, rng: np.random.Generator,
                  radius: float = SAMPLE_RADIUS) -> np.ndarray:
    """``count`` points uniform in the polydisk of the given radius, shape ``(count, n)``."""
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, size=(count, n)))
    theta = rng.uniform(0.0, 2 * np.pi, size=(count, n))
    return r * np.exp(1j * theta)


def grid_points(n: int, radii=GRID_RADII, phases: int = GRID_PHASES) -> np.ndarray:
    """Tensor grid: per coordinate the origin plus ``radii x phases`` circle points."""
    theta = 2 * np.pi * np.arange(phases) / phases
    axis = np.concatenate([[0.0], (np.asarray(radii)[:, None] * np.exp(1j * theta)).ravel()])
    mesh = np.meshgrid(*([axis] * n), indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=1)


# --------------------------------------------------------------------------
# structured maps


def remark2_map(p, v) -> MoebiusComposed:
    """``f(z) = sum_j v_j (p_j - z_j) / (1 - conj(p_j) z_j)``.

    With pairwise orthogonal ``v_j`` and ``sum |v_j|^2 = 1`` the map lands in
    the ball, vanishes at ``p`` and attains equality in the square-sum bound there.
    """
    p = as_vector(p, "p")
    V = np.array([as_vector(vj, f"v[{j}]") for j, vj in enumerate(v)])
    if V.shape[0] != p.size:
        raise ParameterError(f"need one vector per coordinate: {V.shape[0]} vs n={p.size}")
    gram = V.conj() @ V.T
    if np.max(np.abs(gram - np.diag(np.diag(gram)))) > 1e-10:
        raise ParameterError("the vectors v_j must be pairwise orthogonal")
    if abs(np.real(np.trace(gram)) - 1) > 1e-10:
        raise ParameterError(f"sum |v_j|^2 must be 1, got {np.real(np.trace(gram))!r}")
    n = p.size
    linear = PolyMap({tuple(int(i == j) for i in range(n)): V[j] for j in range(n)},
                     n=n, m=V.shape[1])
    return MoebiusComposed(linear, p)


def random_remark2_instance(n: int, m: int, rng: np.random.Generator,
                            radius: float = 0.9) -> tuple[np.ndarray, np.ndarray]:
    """Random ``p`` in the polydisk and orthogonal ``v_1..v_n`` in C^m with unit square sum."""
    if m < n:
        raise ParameterError("orthogonal v_1..v_n need m >= n")
    p = random_points(n, 1, rng, radius)[0]
    Q, _ = np.linalg.qr(rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m)))
    w = rng.uniform(0.1, 1.0, size=n)
    w /= np.linalg.norm(w)
    return p, (Q[:, :n] * w).T


def remark3_pair() -> tuple[HoloMap, HoloMap]:
    """Two scalar maps with equal 1-jets at the origin but different higher-order terms."""
    return catalog("remark3-g"), catalog("remark3-gtilde")


# --------------------------------------------------------------------------
# sharpness scanning


@dataclass(frozen=True)
class ScanResult:
    worst_ratio: float
    argmax: tuple[complex, ...]
    samples: int
    check: str
    failures: int = 0


def scan_sharpness(f: HoloMap, sampler: str = "grid", count: int = 1000, tol: float = TOL,
                   seed: int = 0, check: str | None = None,
                   include_origin: bool = True) -> ScanResult:
    """Largest ``lhs / rhs`` of the routed check over sampled interior points."""
    if sampler == "grid":
        pts = grid_points(f.n)
    elif sampler == "random":
        pts = random_points(f.n, count, make_rng(seed))
        if include_origin:
            pts = np.vstack([np.zeros((1, f.n)), pts])
    else:
        raise ParameterError(f"unknown sampler {sampler!r}")
    worst, arg, failures, name = -np.inf, None, 0, None
    for z in pts:
        rep = route_check(f, PolydiskPoint(z), tol, check)
        name = rep.name
        failures += not rep.passed
        if rep.ratio > worst + 1e-12:
            worst, arg = rep.ratio, rep.point
    return ScanResult(float(worst), arg, len(pts), name, failures)
