"""Checkers for the Schwarz-Pick type inequalities, with uniform reports.

Each checker returns a :class:`CheckReport`; ``passed`` is ``slack >= -tol``.
The ``naive_*`` functions evaluate the unmodified extensions of the scalar
inequalities, which fail for vector-valued maps.  Their reports carry the
branch ``"informational"`` and are never counted as failures by the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import DimensionError, PolydiskPoint, as_point
from .gradmod import TAU_ZERO, Branch, grad_j_all, grad_modulus
from .holomap import HoloMap, compose_moebius, evaluate, jacobian

TOL = 1e-9

INFORMATIONAL = "informational"


@dataclass(frozen=True)
class CheckReport:
    name: str
    lhs: float
    rhs: float
    slack: float
    passed: bool
    branch: str
    point: tuple[complex, ...]
    tol: float = TOL
    details: dict = field(default_factory=dict, compare=False)

    @classmethod
    def build(cls, name, lhs, rhs, branch, point, tol=TOL, **details) -> "CheckReport":
        lhs, rhs = float(lhs), float(rhs)
        slack = rhs - lhs
        pt = tuple(complex(c) for c in np.atleast_1d(np.asarray(point, dtype=complex)))
        return cls(name, lhs, rhs, slack, bool(slack >= -tol), branch, pt, tol, details)

    @property
    def informational(self) -> bool:
        return self.branch == INFORMATIONAL

    @property
    def ratio(self) -> float:
        if self.rhs > 0:
            return self.lhs / self.rhs
        return 0.0 if self.lhs == 0 else float("inf")

    def to_record(self) -> dict:
        """JSON-ready record with the fixed report fields."""
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "branch": self.branch,
            "point": [[c.real, c.imag] for c in self.point],
            "passed": self.passed,
        }


def _require(f: HoloMap, n: int | None = None, m: int | None = None, m_min: int | None = None,
             what: str = ""):
    if n is not None and f.n != n:
        raise DimensionError(f"{what} needs n={n}, map has n={f.n}")
    if m is not None and f.m != m:
        raise DimensionError(f"{what} needs m={m}, map has m={f.m}")
    if m_min is not None and f.m < m_min:
        raise DimensionError(f"{what} needs m>={m_min}, map has m={f.m}")


def _label(branch: Branch) -> str:
    return "nonzero" if branch is Branch.NONZERO else "zero"


def _weights(z: PolydiskPoint) -> np.ndarray:
    return 1 - np.abs(z.coords) ** 2


def check_classical(f: HoloMap, z, tol: float = TOL) -> CheckReport:
    """``|f'(z)| <= (1 - |f(z)|^2) / (1 - |z|^2)`` for scalar maps of the disk."""
    _require(f, n=1, m=1, what="classical check")
    z = as_point(z)
    lhs = abs(jacobian(f, z)[0, 0])
    rhs = (1 - abs(evaluate(f, z)[0]) ** 2) / _weights(z)[0]
    return CheckReport.build("classical", lhs, rhs, "scalar", z, tol)


def check_disk_to_ball(f: HoloMap, z, tol: float = TOL) -> CheckReport:
    """``|grad |f|(z)| <= (1 - |f(z)|^2) / (1 - |z|^2)`` for maps of the disk into a ball."""
    _require(f, n=1, what="disk-to-ball check")
    z = as_point(z)
    g = grad_modulus(f, z)
    rhs = (1 - np.linalg.norm(evaluate(f, z)) ** 2) / _weights(z)[0]
    return CheckReport.build("disk-to-ball", g.value, rhs, _label(g.branch), z, tol)


def check_scalar_polydisk(f: HoloMap, z, tol: float = TOL) -> CheckReport:
    """``sum_j (1 - |z_j|^2) |f'_{z_j}(z)| <= 1 - |f(z)|^2`` for scalar maps of the polydisk."""
    _require(f, m=1, what="scalar polydisk check")
    z = as_point(z)
    lhs = np.sum(_weights(z) * np.abs(jacobian(f, z)[0]))
    rhs = 1 - abs(evaluate(f, z)[0]) ** 2
    return CheckReport.build("scalar-polydisk", lhs, rhs, "scalar", z, tol)


def check_theorem1(f: HoloMap, z, tol: float = TOL) -> CheckReport:
    """Weighted coordinate-gradient bound for maps of the polydisk into the ball (m >= 2).

    Where ``f(z) != 0``: ``sum_j (1-|z_j|^2) |grad_j|f|| <= 1 - |f(z)|^2``.
    Where ``f(z) = 0``: ``sum_j (1-|z_j|^2)^2 |grad_j|f||^2 <= 1``.
    """
    _require(f, m_min=2, what="polydisk-to-ball check")
    z = as_point(z)
    grads, branch = grad_j_all(f, z)
    w = _weights(z)
    r = np.linalg.norm(evaluate(f, z))
    if branch is Branch.NONZERO:
        return CheckReport.build("polydisk-to-ball", np.sum(w * grads), 1 - r**2,
                                 "nonzero", z, tol)
    return CheckReport.build("polydisk-to-ball", np.sum((w * grads) ** 2), 1.0, "zero", z, tol)


def check_eq28_everywhere(f: HoloMap, z, tol: float = TOL) -> CheckReport:
    """Squared bound ``sum_j (1-|z_j|^2)^2 |grad_j|f||^2 <= 1`` at every point, either branch."""
    _require(f, m_min=2, what="square-sum check")
    z = as_point(z)
    grads, branch = grad_j_all(f, z)
    lhs = np.sum((_weights(z) * grads) ** 2)
    return CheckReport.build("square-sum", lhs, 1.0, _label(branch), z, tol)


# naive extensions (expected to fail on the counterexample maps)


def naive_classical(f: HoloMap, z) -> CheckReport:
    """``|f'(z)| <= (1 - |f(z)|^2) / (1 - |z|^2)`` with the Euclidean norm of ``f'``."""
    _require(f, n=1, what="naive classical check")
    z = as_point(z)
    lhs = np.linalg.norm(jacobian(f, z)[:, 0])
    rhs = (1 - np.linalg.norm(evaluate(f, z)) ** 2) / _weights(z)[0]
    return CheckReport.build("naive-classical", lhs, rhs, INFORMATIONAL, z)


def naive_partial_sum(f: HoloMap, z) -> CheckReport:
    """``sum_j (1-|z_j|^2) |f'_{z_j}(z)| <= 1 - |f(z)|^2`` with vector norms of the partials."""
    z = as_point(z)
    lhs = np.sum(_weights(z) * np.linalg.norm(jacobian(f, z), axis=0))
    rhs = 1 - np.linalg.norm(evaluate(f, z)) ** 2
    return CheckReport.build("naive-partial-sum", lhs, rhs, INFORMATIONAL, z)


def naive_gradient_sum(f: HoloMap, z) -> CheckReport:
    """``sum_j (1-|z_j|^2) |grad_j|f|| <= 1 - |f(z)|^2`` without the zero-value split."""
    z = as_point(z)
    grads, _ = grad_j_all(f, z)
    lhs = np.sum(_weights(z) * grads)
    rhs = 1 - np.linalg.norm(evaluate(f, z)) ** 2
    return CheckReport.build("naive-gradient-sum", lhs, rhs, INFORMATIONAL, z)


# --------------------------------------------------------------------------
# routing and reduction

CHECKS: dict[str, Callable[..., CheckReport]] = {
    "classical": check_classical,
    "disk-to-ball": check_disk_to_ball,
    "scalar-polydisk": check_scalar_polydisk,
    "polydisk-to-ball": check_theorem1,
    "square-sum": check_eq28_everywhere,
}


def default_check_name(f: HoloMap) -> str:
    if f.m == 1:
        return "classical" if f.n == 1 else "scalar-polydisk"
    return "disk-to-ball" if f.n == 1 else "polydisk-to-ball"


def route_check(f: HoloMap, z, tol: float = TOL, name: str | None = None) -> CheckReport:
    try:
        check = CHECKS[name or default_check_name(f)]
    except KeyError:
        raise KeyError(f"unknown check {name!r}; known: {', '.join(CHECKS)}") from None
    return check(f, z, tol)


def naive_companion(f: HoloMap, z) -> CheckReport | None:
    """The naive counterpart of the routed check, reported only when it is violated
    at a point where ``f(z) != 0``."""
    if f.m == 1:
        return None
    z = as_point(z)
    if np.linalg.norm(evaluate(f, z)) <= TAU_ZERO:
        return None
    rep = naive_classical(f, z) if f.n == 1 else naive_partial_sum(f, z)
    return None if rep.passed else rep


def _weighted_check(f: HoloMap, z, tol: float) -> CheckReport:
    return check_scalar_polydisk(f, z, tol) if f.m == 1 else check_theorem1(f, z, tol)


def verify_reduction(f: HoloMap, p, tol: float = TOL) -> tuple[CheckReport, CheckReport]:
    """Reports for ``f`` at ``p`` and for ``f o phi_p`` at the origin.

    Transport by the coordinatewise disk involution moving ``p`` to the origin
    leaves both sides of the weighted inequality unchanged, so the two reports
    should agree.
    """
    p = as_point(p)
    g = compose_moebius(f, p.coords)
    return _weighted_check(f, p, tol), _weighted_check(g, PolydiskPoint.origin(f.n), tol)
