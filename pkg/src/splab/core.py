"""Complex vectors, the Hermitian inner product, multi-indices and polydisk points.

Complex vectors are plain 1-D ``numpy`` arrays of dtype ``complex128``.
Everything here is double precision.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Iterator, Sequence, Tuple, Union

import numpy as np

# Tolerance conventions used across the package.
TOL_ALGEBRAIC = 1e-12
TOL_QUADRATURE = 1e-8
TOL_ORACLE = 1e-3

MultiIndex = Tuple[int, ...]


class DimensionError(ValueError):
    """Raised when vector or map dimensions do not match."""


class ParameterError(ValueError):
    """Raised for invalid parameters (non-unit vectors, |p_j| >= 1, ...)."""


class DomainError(ValueError):
    """Raised when a point is not strictly inside the unit polydisk."""


class StepError(DomainError):
    """Raised when a finite-difference step leaves the polydisk."""


class EvaluationError(ArithmeticError):
    """Raised when a map cannot be evaluated safely (e.g. near a pole)."""


def as_vector(z, name: str = "vector") -> np.ndarray:
    v = np.atleast_1d(np.asarray(z, dtype=complex))
    if v.ndim != 1 or v.size == 0:
        raise DimensionError(f"{name} must be a non-empty 1-D sequence, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} has non-finite entries")
    return v


def hermitian_inner(z, w) -> complex:
    """Return ``sum_k z_k * conj(w_k)`` (linear in the first slot)."""
    z = as_vector(z)
    w = as_vector(w)
    if z.shape != w.shape:
        raise DimensionError(f"length mismatch: {z.size} vs {w.size}")
    return complex(np.sum(z * np.conj(w)))


def norm(z) -> float:
    z = as_vector(z)
    return float(np.sqrt(np.sum(z.real**2 + z.imag**2)))


def in_polydisk(z, margin: float = 0.0) -> bool:
    """True iff ``max_j |z_j| <= 1 - margin``."""
    if not 0.0 <= margin < 1.0:
        raise ParameterError(f"margin must lie in [0, 1), got {margin}")
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    return bool(np.max(np.abs(z)) <= 1.0 - margin)


class PolydiskPoint:
    """A point of the open unit polydisk; membership is strict and checked here."""

    __slots__ = ("coords",)

    def __init__(self, coords: Union[Sequence[complex], np.ndarray, "PolydiskPoint"]):
        if isinstance(coords, PolydiskPoint):
            coords = coords.coords
        arr = as_vector(coords, "point").copy()
        if np.max(np.abs(arr)) >= 1.0:
            raise DomainError(f"point {arr.tolist()} is not inside the open unit polydisk")
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)

    def __setattr__(self, key, value):
        raise AttributeError("PolydiskPoint is immutable")

    @property
    def n(self) -> int:
        return self.coords.size

    def __len__(self) -> int:
        return self.coords.size

    def __iter__(self) -> Iterator[complex]:
        return iter(self.coords.tolist())

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolydiskPoint):
            return NotImplemented
        return np.array_equal(self.coords, other.coords)

    def __hash__(self) -> int:
        return hash(tuple(self.coords.tolist()))

    def __repr__(self) -> str:
        return f"PolydiskPoint({self.coords.tolist()!r})"

    @classmethod
    def origin(cls, n: int) -> "PolydiskPoint":
        return cls(np.zeros(n, dtype=complex))


def as_point(z) -> PolydiskPoint:
    return z if isinstance(z, PolydiskPoint) else PolydiskPoint(z)


def check_multi_index(alpha: Iterable[int], n: int | None = None) -> MultiIndex:
    alpha = tuple(int(a) for a in alpha)
    if any(a < 0 for a in alpha):
        raise ParameterError(f"multi-index entries must be nonnegative: {alpha}")
    if n is not None and len(alpha) != n:
        raise DimensionError(f"multi-index {alpha} should have length {n}")
    return alpha


def degree(alpha: MultiIndex) -> int:
    return sum(alpha)


def multi_indices(n: int, maxdeg: int) -> list[MultiIndex]:
    """All multi-indices of length ``n`` with total degree ``<= maxdeg``, lexicographic."""
    return [a for a in product(range(maxdeg + 1), repeat=n) if sum(a) <= maxdeg]
