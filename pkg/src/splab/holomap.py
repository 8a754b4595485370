"""Holomorphic maps on the polydisk: polynomial, rational, Moebius-precomposed
and scalar projections, plus the catalog of named maps and the JSON map format.

Every map exposes ``n`` (domain dimension), ``m`` (codomain dimension) and two
batched primitives, ``values(Z)`` and ``jacobians(Z)`` for ``Z`` of shape
``(k, n)``.  Batched evaluation does no domain checking so that quadrature can
sample tori of radius ``sigma < 1`` directly; the point-level functions
:func:`evaluate` and :func:`jacobian` take :class:`~splab.core.PolydiskPoint`.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from .core import (
    DimensionError,
    EvaluationError,
    MultiIndex,
    ParameterError,
    PolydiskPoint,
    as_point,
    as_vector,
    check_multi_index,
)

DELTA_DEN = 1e-6
R_CHECK = 0.999
UNIT_TOL = 1e-12


def _batch(Z, n: int) -> np.ndarray:
    Z = np.asarray(Z, dtype=complex)
    if Z.ndim == 1:
        Z = Z[None, :]
    if Z.ndim != 2 or Z.shape[1] != n:
        raise DimensionError(f"expected points of dimension {n}, got shape {Z.shape}")
    return Z


class HoloMap:
    """Common interface of every map kind."""

    kind: str = ""
    n: int
    m: int
    name: str | None = None

    def values(self, Z) -> np.ndarray:
        raise NotImplementedError

    def jacobians(self, Z) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, z) -> np.ndarray:
        return evaluate(self, z)

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<{type(self).__name__}{label} n={self.n} m={self.m}>"


class PolyMap(HoloMap):
    """``f(z) = sum_alpha a_alpha z^alpha`` with vector coefficients ``a_alpha`` in C^m.

    ``terms`` maps multi-indices (length ``n``) to coefficient vectors
    (length ``m``).  ``n`` and ``m`` are inferred from the terms unless given;
    they must be given for the zero map.
    """

    kind = "polynomial"

    def __init__(self, terms: Mapping[Sequence[int], Sequence[complex]], n: int | None = None,
                 m: int | None = None, name: str | None = None):
        table: dict[MultiIndex, np.ndarray] = {}
        for alpha, coeff in terms.items():
            alpha = check_multi_index(alpha, n)
            if n is None:
                n = len(alpha)
            c = as_vector(coeff, f"coefficient of {alpha}")
            if m is None:
                m = c.size
            if c.size != m:
                raise DimensionError(f"coefficient of {alpha} has length {c.size}, expected {m}")
            if alpha in table:
                raise ParameterError(f"duplicate multi-index {alpha}")
            c = c.copy()
            c.setflags(write=False)
            table[alpha] = c
        if n is None or m is None:
            raise DimensionError("n and m are required for a map without terms")
        if n < 1 or m < 1:
            raise DimensionError(f"dimensions must be positive, got n={n}, m={m}")
        self.n, self.m, self.name = int(n), int(m), name
        keys = sorted(table)
        self.terms = MappingProxyType({k: table[k] for k in keys})
        self._exps = np.array(keys, dtype=int).reshape(len(keys), self.n)
        self._coeffs = np.array([table[k] for k in keys], dtype=complex).reshape(len(keys), self.m)

    @property
    def maxdeg(self) -> int:
        """Largest exponent of any single coordinate."""
        return int(self._exps.max()) if len(self._exps) else 0

    @property
    def total_degree(self) -> int:
        return int(self._exps.sum(axis=1).max()) if len(self._exps) else 0

    def _monomials(self, Z, exps) -> np.ndarray:
        top = int(exps.max()) if exps.size else 0
        powers = np.ones((Z.shape[0], self.n, top + 1), dtype=complex)
        for d in range(1, top + 1):
            powers[:, :, d] = powers[:, :, d - 1] * Z
        # powers[k, j, exps[t, j]] -> (k, T, n)
        return np.prod(powers[:, np.arange(self.n)[None, :], exps], axis=2)

    def values(self, Z) -> np.ndarray:
        Z = _batch(Z, self.n)
        return self._monomials(Z, self._exps) @ self._coeffs

    def jacobians(self, Z) -> np.ndarray:
        Z = _batch(Z, self.n)
        J = np.empty((Z.shape[0], self.m, self.n), dtype=complex)
        for j in range(self.n):
            alpha_j = self._exps[:, j]
            lowered = self._exps.copy()
            lowered[:, j] = np.maximum(alpha_j - 1, 0)
            J[:, :, j] = (self._monomials(Z, lowered) * alpha_j) @ self._coeffs
        return J


class RationalMap(HoloMap):
    """``numerator / denominator`` with a scalar polynomial denominator.

    The denominator is checked on a grid of the closed polydisk of radius
    ``R_CHECK``; construction fails if it drops below ``DELTA_DEN`` there.
    """

    kind = "rational"

    def __init__(self, numerator: PolyMap, denominator: PolyMap, name: str | None = None):
        if denominator.m != 1:
            raise DimensionError("denominator must be scalar-valued")
        if numerator.n != denominator.n:
            raise DimensionError("numerator and denominator have different domain dimensions")
        self.numerator, self.denominator = numerator, denominator
        self.n, self.m, self.name = numerator.n, numerator.m, name
        low = np.min(np.abs(denominator.values(_check_grid(self.n))))
        if low < DELTA_DEN:
            raise ParameterError(
                f"denominator gets as small as {low:.3g} on the polydisk of radius {R_CHECK}")

    def _den(self, Z) -> np.ndarray:
        d = self.denominator.values(Z)[:, 0]
        if np.any(np.abs(d) < DELTA_DEN):
            raise EvaluationError("denominator below safety threshold")
        return d

    def values(self, Z) -> np.ndarray:
        Z = _batch(Z, self.n)
        return self.numerator.values(Z) / self._den(Z)[:, None]

    def jacobians(self, Z) -> np.ndarray:
        Z = _batch(Z, self.n)
        d = self._den(Z)
        num = self.numerator.values(Z)
        dnum = self.numerator.jacobians(Z)
        dden = self.denominator.jacobians(Z)[:, 0, :]
        return (dnum * d[:, None, None] - num[:, :, None] * dden[:, None, :]) / (d**2)[:, None, None]


def _check_grid(n: int, budget: int = 200_000) -> np.ndarray:
    radii = np.array([0.25, 0.5, 0.75, R_CHECK])
    phases = 64
    while phases > 4 and (1 + len(radii) * phases) ** n > budget:
        phases -= 1
    theta = 2 * np.pi * np.arange(phases) / phases
    axis = np.concatenate([[0.0], (radii[:, None] * np.exp(1j * theta)[None, :]).ravel()])
    mesh = np.meshgrid(*([axis] * n), indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=1)


def _moebius(p: np.ndarray, W: np.ndarray) -> np.ndarray:
    return (p - W) / (1 - np.conj(p) * W)


def _moebius_derivative(p: np.ndarray, W: np.ndarray) -> np.ndarray:
    return (np.abs(p) ** 2 - 1) / (1 - np.conj(p) * W) ** 2


def _check_p(p, n: int | None = None) -> np.ndarray:
    p = as_vector(p, "p").copy()
    if n is not None and p.size != n:
        raise DimensionError(f"p has length {p.size}, expected {n}")
    if np.any(np.abs(p) >= 1):
        raise ParameterError(f"every |p_j| must be < 1, got {np.abs(p).tolist()}")
    p.setflags(write=False)
    return p


class MoebiusComposed(HoloMap):
    """``g(w) = base(phi(w))`` with ``phi_j(w_j) = (p_j - w_j) / (1 - conj(p_j) w_j)``."""

    kind = "moebius"

    def __init__(self, base: HoloMap, p, name: str | None = None):
        self.base = base
        self.p = _check_p(p, base.n)
        self.n, self.m, self.name = base.n, base.m, name

    def values(self, Z) -> np.ndarray:
        Z = _batch(Z, self.n)
        return self.base.values(_moebius(self.p, Z))

    def jacobians(self, Z) -> np.ndarray:
        Z = _batch(Z, self.n)
        return self.base.jacobians(_moebius(self.p, Z)) * _moebius_derivative(self.p, Z)[:, None, :]


class ScalarProjection(HoloMap):
    """``h(z) = <base(z), u>`` for a unit vector ``u``."""

    kind = "projection"

    def __init__(self, base: HoloMap, u, name: str | None = None):
        u = as_vector(u, "u").copy()
        if u.size != base.m:
            raise DimensionError(f"u has length {u.size}, map has m={base.m}")
        if abs(np.linalg.norm(u) - 1) > UNIT_TOL:
            raise ParameterError(f"u must have unit norm, got {np.linalg.norm(u)!r}")
        u.setflags(write=False)
        self.base, self.u = base, u
        self.n, self.m, self.name = base.n, 1, name

    def values(self, Z) -> np.ndarray:
        return (self.base.values(Z) @ np.conj(self.u))[:, None]

    def jacobians(self, Z) -> np.ndarray:
        return np.einsum("k,ikj->ij", np.conj(self.u), self.base.jacobians(Z))[:, None, :]


def _check_point(f: HoloMap, z) -> PolydiskPoint:
    z = as_point(z)
    if z.n != f.n:
        raise DimensionError(f"point has dimension {z.n}, map expects {f.n}")
    return z


def evaluate(f: HoloMap, z) -> np.ndarray:
    """Value ``f(z)`` in C^m at an interior point."""
    z = _check_point(f, z)
    return f.values(z.coords)[0]


def jacobian(f: HoloMap, z) -> np.ndarray:
    """The ``m x n`` complex Jacobian; column ``j`` is the partial in ``z_j``."""
    z = _check_point(f, z)
    return f.jacobians(z.coords)[0]


def moebius_point(p, w) -> PolydiskPoint:
    w = as_point(w)
    p = _check_p(p, w.n)
    return PolydiskPoint(_moebius(p, w.coords))


def compose_moebius(f: HoloMap, p) -> MoebiusComposed:
    return MoebiusComposed(f, p)


def project_scalar(f: HoloMap, u) -> ScalarProjection:
    return ScalarProjection(f, u)


# --------------------------------------------------------------------------
# catalog

_S2 = 1 / math.sqrt(2)
_S3 = 1 / math.sqrt(3)


def _build_catalog() -> dict[str, HoloMap]:
    ball_identity = PolyMap({(1, 0): [_S2, 0], (0, 1): [0, _S2]})
    return {
        "pavlovic": PolyMap({(1,): [_S2, 0], (0,): [0, _S2]}, name="pavlovic"),
        "polydisk-counterexample": PolyMap(
            {(1, 0): [_S3, 0], (0, 1): [0, _S3], (0, 0): [0, 0.1 * _S3]},
            name="polydisk-counterexample"),
        "equality-28": PolyMap({(1, 0): [_S2, 0], (0, 1): [0, _S2]}, name="equality-28"),
        "equality-8": MoebiusComposed(ball_identity, [0.5, 0.5], name="equality-8"),
        "remark3-g": PolyMap({(1, 0): [0.5], (0, 1): [0.5]}, name="remark3-g"),
        "remark3-gtilde": RationalMap(
            PolyMap({(1, 0): [0.5], (0, 1): [0.5], (1, 1): [-1.0]}),
            PolyMap({(0, 0): [1.0], (1, 0): [-0.5], (0, 1): [-0.5]}),
            name="remark3-gtilde"),
    }


_CATALOG = _build_catalog()


class UnknownMapError(KeyError):
    pass


def catalog_names() -> list[str]:
    return list(_CATALOG)


def catalog(name: str) -> HoloMap:
    try:
        return _CATALOG[name]
    except KeyError:
        raise UnknownMapError(
            f"unknown catalog map {name!r}; known: {', '.join(_CATALOG)}") from None


# --------------------------------------------------------------------------
# JSON map files


class MapFormatError(ValueError):
    """Malformed map file; ``field`` names the offending JSON path."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _c2json(c: complex):
    c = complex(c)
    return [c.real, c.imag]


def _json2c(value, field: str) -> complex:
    if isinstance(value, bool):
        raise MapFormatError(field, "expected a number or [re, im] pair")
    if isinstance(value, (int, float)):
        return complex(value)
    if (isinstance(value, list) and len(value) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        return complex(value[0], value[1])
    raise MapFormatError(field, f"expected a number or [re, im] pair, got {value!r}")


def _json2cvec(value, field: str) -> list[complex]:
    if not isinstance(value, list) or not value:
        raise MapFormatError(field, "expected a non-empty list")
    return [_json2c(v, f"{field}[{i}]") for i, v in enumerate(value)]


_FIELDS = {
    "polynomial": {"kind", "n", "m", "terms"},
    "rational": {"kind", "n", "m", "numerator", "denominator"},
    "moebius": {"kind", "n", "m", "base", "p"},
    "projection": {"kind", "n", "m", "base", "u"},
}


def map_to_dict(f: HoloMap) -> dict:
    out = {"kind": f.kind, "n": f.n, "m": f.m}
    if isinstance(f, PolyMap):
        out["terms"] = [{"alpha": list(a), "coeff": [_c2json(c) for c in coeff]}
                        for a, coeff in f.terms.items()]
    elif isinstance(f, RationalMap):
        out["numerator"] = map_to_dict(f.numerator)
        out["denominator"] = map_to_dict(f.denominator)
    elif isinstance(f, MoebiusComposed):
        out["base"] = map_to_dict(f.base)
        out["p"] = [_c2json(c) for c in f.p]
    elif isinstance(f, ScalarProjection):
        out["base"] = map_to_dict(f.base)
        out["u"] = [_c2json(c) for c in f.u]
    else:
        raise TypeError(f"cannot serialize {type(f).__name__}")
    return out


def _int_field(obj: dict, key: str, path: str) -> int | None:
    if key not in obj:
        return None
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise MapFormatError(f"{path}.{key}", f"expected a positive integer, got {v!r}")
    return v


def map_from_dict(obj, path: str = "$", default_kind: str | None = None) -> HoloMap:
    if not isinstance(obj, dict):
        raise MapFormatError(path, "expected a JSON object")
    kind = obj.get("kind", default_kind)
    if kind not in _FIELDS:
        raise MapFormatError(f"{path}.kind", f"expected one of {sorted(_FIELDS)}, got {kind!r}")
    extra = set(obj) - _FIELDS[kind]
    if extra:
        raise MapFormatError(f"{path}.{sorted(extra)[0]}", f"unknown field for kind {kind!r}")
    n, m = _int_field(obj, "n", path), _int_field(obj, "m", path)

    def need(key):
        if key not in obj:
            raise MapFormatError(f"{path}.{key}", "missing required field")
        return obj[key]

    try:
        if kind == "polynomial":
            terms = need("terms")
            if not isinstance(terms, list):
                raise MapFormatError(f"{path}.terms", "expected a list")
            table = {}
            for i, term in enumerate(terms):
                tpath = f"{path}.terms[{i}]"
                if not isinstance(term, dict) or set(term) != {"alpha", "coeff"}:
                    raise MapFormatError(tpath, "expected an object with exactly 'alpha' and 'coeff'")
                alpha = term["alpha"]
                if (not isinstance(alpha, list)
                        or not all(isinstance(a, int) and not isinstance(a, bool) and a >= 0
                                   for a in alpha)):
                    raise MapFormatError(f"{tpath}.alpha", "expected a list of nonnegative integers")
                if n is not None and len(alpha) != n:
                    raise MapFormatError(f"{tpath}.alpha", f"length {len(alpha)} != n={n}")
                coeff = _json2cvec(term["coeff"], f"{tpath}.coeff")
                if m is not None and len(coeff) != m:
                    raise MapFormatError(f"{tpath}.coeff", f"length {len(coeff)} != m={m}")
                if tuple(alpha) in table:
                    raise MapFormatError(f"{tpath}.alpha", f"duplicate multi-index {alpha}")
                table[tuple(alpha)] = coeff
            f = PolyMap(table, n=n, m=m)
        elif kind == "rational":
            num = map_from_dict(need("numerator"), f"{path}.numerator", "polynomial")
            den = map_from_dict(need("denominator"), f"{path}.denominator", "polynomial")
            if not isinstance(num, PolyMap) or not isinstance(den, PolyMap):
                raise MapFormatError(path, "numerator and denominator must be polynomial")
            f = RationalMap(num, den)
        elif kind == "moebius":
            base = map_from_dict(need("base"), f"{path}.base")
            f = MoebiusComposed(base, _json2cvec(need("p"), f"{path}.p"))
        else:
            base = map_from_dict(need("base"), f"{path}.base")
            f = ScalarProjection(base, _json2cvec(need("u"), f"{path}.u"))
    except (DimensionError, ParameterError) as exc:
        raise MapFormatError(path, str(exc)) from exc
    if n is not None and f.n != n:
        raise MapFormatError(f"{path}.n", f"declared n={n} but map has n={f.n}")
    if m is not None and f.m != m:
        raise MapFormatError(f"{path}.m", f"declared m={m} but map has m={f.m}")
    return f


def dumps_map(f: HoloMap, **kwargs) -> str:
    return json.dumps(map_to_dict(f), **kwargs)


def loads_map(text: str) -> HoloMap:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MapFormatError("$", f"invalid JSON ({exc})") from exc
    return map_from_dict(obj)


def save_map(f: HoloMap, path) -> None:
    Path(path).write_text(dumps_map(f, indent=2) + "\n")


def load_map(path) -> HoloMap:
    return loads_map(Path(path).read_text())
