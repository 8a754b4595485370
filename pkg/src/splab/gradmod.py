"""Gradient of the modulus ``|f|`` of a holomorphic map.

The closed forms distinguish two cases.  Where ``f(z) != 0`` the modulus is
real-differentiable and

    |grad |f|(z)|   = |(<f_1', f>, ..., <f_n', f>)| / |f(z)|
    |grad_j |f|(z)| = |<f_j', f>| / |f(z)|

with ``f_j'`` the holomorphic partial in ``z_j``.  At a zero of ``f`` the
one-sided directional derivative in direction ``beta`` is ``|Df(z) beta|``, so
the full gradient is the operator 2-norm of the Jacobian and the coordinate
version is the column norm.

The oracle side evaluates the defining one-sided difference quotients
``(|f|(z + t beta) - |f|(z)) / t`` and maximises over sampled directions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .core import DimensionError, ParameterError, StepError, as_point
from .holomap import HoloMap, evaluate, jacobian

TAU_ZERO = 1e-12


class Branch(str, Enum):
    NONZERO = "nonzero-value"
    ZERO = "zero-value"


@dataclass(frozen=True)
class GradResult:
    value: float
    branch: Branch

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class OracleConfig:
    """Sampling setup for the difference-quotient oracle.

    ``direction_samples`` is the number of phases per complex dimension; the
    same number of seeded random unit directions is added per dimension.
    """

    direction_samples: int = 64
    t_schedule: tuple[float, ...] = (1e-4, 1e-5, 1e-6)
    agree_tol: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.direction_samples < 8:
            raise ParameterError("direction_samples must be >= 8")
        t = self.t_schedule
        if not t or any(x <= 0 for x in t) or any(a <= b for a, b in zip(t, t[1:])):
            raise ParameterError("t_schedule must be positive and strictly decreasing")


def operator_norm(A, max_iter: int = 200, rtol: float = 1e-13) -> float:
    """Largest singular value of a small dense complex matrix.

    Power iteration on the Gram matrix ``A^H A``, accelerated by repeated
    squaring: after ``k`` squarings the iterate is proportional to
    ``sum_i (s_i / s_1)^(2^(k+1)) v_i v_i^H``, so its largest column lies in the
    top singular subspace and no start vector is needed.  The Rayleigh
    quotient of that column on the original Gram matrix gives ``s_1^2``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    G = A.conj().T @ A
    scale = np.max(np.abs(G)) if G.size else 0.0
    if scale == 0.0:
        return 0.0
    P = G / scale
    prev = None
    for _ in range(max_iter):
        P = P @ P
        P = P / np.max(np.abs(P))
        # re-hermitize to stop round-off drift
        P = 0.5 * (P + P.conj().T)
        v = P[:, np.argmax(np.sum(np.abs(P) ** 2, axis=0))]
        rq = float(np.real(np.vdot(v, G @ v)) / np.real(np.vdot(v, v)))
        if prev is not None and abs(rq - prev) <= rtol * abs(rq):
            break
        prev = rq
    return float(np.sqrt(max(rq, 0.0)))


def _value_and_jacobian(f: HoloMap, z):
    z = as_point(z)
    return z, evaluate(f, z), jacobian(f, z)


def grad_modulus(f: HoloMap, z) -> GradResult:
    z, fz, J = _value_and_jacobian(f, z)
    r = np.linalg.norm(fz)
    if r > TAU_ZERO:
        # <f'_{z_j}, f> for every j, i.e. f^H J
        proj = np.conj(fz) @ J
        return GradResult(float(np.linalg.norm(proj) / r), Branch.NONZERO)
    return GradResult(operator_norm(J), Branch.ZERO)


def grad_j_modulus(f: HoloMap, z, j: int) -> GradResult:
    """Coordinate version; ``j`` is 1-based as in the usual notation."""
    if not 1 <= j <= f.n:
        raise IndexError(f"coordinate index {j} outside 1..{f.n}")
    z, fz, J = _value_and_jacobian(f, z)
    col = J[:, j - 1]
    r = np.linalg.norm(fz)
    if r > TAU_ZERO:
        return GradResult(float(abs(np.vdot(fz, col)) / r), Branch.NONZERO)
    return GradResult(float(np.linalg.norm(col)), Branch.ZERO)


def grad_j_all(f: HoloMap, z) -> tuple[np.ndarray, Branch]:
    """All coordinate values ``|grad_j |f|(z)|``, j = 1..n, and the branch taken."""
    z, fz, J = _value_and_jacobian(f, z)
    r = np.linalg.norm(fz)
    if r > TAU_ZERO:
        return np.abs(np.conj(fz) @ J) / r, Branch.NONZERO
    return np.linalg.norm(J, axis=0), Branch.ZERO


# --------------------------------------------------------------------------
# definitional oracle


def _quotients(f: HoloMap, z: np.ndarray, betas: np.ndarray, t: float) -> np.ndarray:
    shifted = z[None, :] + t * betas
    if np.any(np.abs(shifted) >= 1):
        raise StepError(f"step t={t} leaves the polydisk from {z.tolist()}")
    base = np.linalg.norm(f.values(z)[0])
    return (np.linalg.norm(f.values(shifted), axis=1) - base) / t


def directional_quotient(f: HoloMap, z, beta, t: float) -> float:
    """One-sided quotient ``(|f|(z + t beta) - |f|(z)) / t``."""
    z = as_point(z)
    beta = np.asarray(beta, dtype=complex).reshape(-1)
    if beta.size != z.n:
        raise DimensionError(f"direction has length {beta.size}, point has {z.n}")
    if t <= 0:
        raise ParameterError("t must be positive")
    return float(_quotients(f, z.coords, beta[None, :], t)[0])


def _extrapolate(rows: np.ndarray, schedule, tol: float) -> np.ndarray:
    # rows[k] holds the quotients at schedule[k]; pick per direction the
    # smallest t whose value is within tol of the next-larger t.
    chosen = rows[-1].copy()
    settled = np.zeros(rows.shape[1], dtype=bool)
    for k in range(len(schedule) - 1, 0, -1):
        ok = ~settled & (np.abs(rows[k] - rows[k - 1]) < tol)
        chosen[ok] = rows[k][ok]
        settled |= ok
    return chosen


def _sup_quotient(f: HoloMap, z: np.ndarray, betas: np.ndarray, cfg: OracleConfig) -> float:
    tmax = cfg.t_schedule[0]
    if np.max(np.abs(z)) + tmax >= 1:
        raise StepError(f"point {z.tolist()} is within {tmax} of the boundary")
    rows = np.array([_quotients(f, z, betas, t) for t in cfg.t_schedule])
    return float(np.max(_extrapolate(rows, cfg.t_schedule, cfg.agree_tol)))


def _phases(k: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(k) / k)


def _unit(v: np.ndarray) -> np.ndarray | None:
    s = np.linalg.norm(v)
    return v / s if s > 0 else None


def _full_directions(f: HoloMap, z: np.ndarray, cfg: OracleConfig) -> np.ndarray:
    n, k = f.n, cfg.direction_samples
    dirs = [np.eye(n, dtype=complex)[j] * ph for j in range(n) for ph in _phases(k)]
    rng = np.random.default_rng(cfg.seed)
    g = rng.standard_normal((k * n, n)) + 1j * rng.standard_normal((k * n, n))
    dirs.extend(g / np.linalg.norm(g, axis=1, keepdims=True))
    fz = f.values(z)[0]
    J = f.jacobians(z)[0]
    if np.linalg.norm(fz) > TAU_ZERO:
        # maximiser of Re <J beta, f>: beta proportional to conj(<f'_{z_j}, f>)
        best = _unit(np.conj(np.conj(fz) @ J))
    else:
        best = np.linalg.svd(J)[2][0].conj()
    if best is not None:
        dirs.append(best)
    return np.array(dirs)


def grad_modulus_oracle(f: HoloMap, z, cfg: OracleConfig = OracleConfig()) -> float:
    """Sampled sup over unit directions of the extrapolated one-sided quotient."""
    z = as_point(z)
    return _sup_quotient(f, z.coords, _full_directions(f, z.coords, cfg), cfg)


def grad_j_modulus_oracle(f: HoloMap, z, j: int, cfg: OracleConfig = OracleConfig()) -> float:
    """Same as :func:`grad_modulus_oracle` with the step confined to coordinate ``j``."""
    if not 1 <= j <= f.n:
        raise IndexError(f"coordinate index {j} outside 1..{f.n}")
    z = as_point(z)
    phases = list(_phases(cfg.direction_samples))
    fz = f.values(z.coords)[0]
    col = f.jacobians(z.coords)[0][:, j - 1]
    if np.linalg.norm(fz) > TAU_ZERO:
        c = np.vdot(fz, col)
        if abs(c) > 0:
            phases.append(np.conj(c) / abs(c))
    betas = np.zeros((len(phases), f.n), dtype=complex)
    betas[:, j - 1] = phases
    return _sup_quotient(f, z.coords, betas, cfg)


@dataclass
class OracleComparison:
    closed_full: float
    oracle_full: float
    closed_coords: list[float] = field(default_factory=list)
    oracle_coords: list[float] = field(default_factory=list)

    @property
    def max_deviation(self) -> float:
        devs = [abs(self.closed_full - self.oracle_full)]
        devs += [abs(a - b) for a, b in zip(self.closed_coords, self.oracle_coords)]
        return max(devs)


def compare_with_oracle(f: HoloMap, z, cfg: OracleConfig = OracleConfig()) -> OracleComparison:
    z = as_point(z)
    return OracleComparison(
        closed_full=grad_modulus(f, z).value,
        oracle_full=grad_modulus_oracle(f, z, cfg),
        closed_coords=[grad_j_modulus(f, z, j).value for j in range(1, f.n + 1)],
        oracle_coords=[grad_j_modulus_oracle(f, z, j, cfg) for j in range(1, f.n + 1)],
    )
