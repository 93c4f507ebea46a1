"""Cayley-algebra arithmetic: real, complex, hyperbolic, bicomplex, quaternion,
coquaternion and octonion numbers, their PT conjugations and representation maps.

All numbers are immutable coefficient vectors over a fixed basis; multiplication
is driven by a signed structure table so every algebra shares one code path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import AlgebraMismatch, DegenerateImaginary, LightCone, UnsupportedSymmetry

_OCTONION_TRIPLES = ((1, 2, 3), (1, 4, 5), (1, 7, 6), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 6, 5))


def _octonion_table() -> tuple[np.ndarray, np.ndarray]:
    """Generate the signed octonion table from the seven quaternionic triples."""
    sign = np.zeros((8, 8), dtype=int)
    index = np.zeros((8, 8), dtype=int)
    for j in range(8):
        sign[0, j] = sign[j, 0] = 1
        index[0, j] = index[j, 0] = j
        if j:
            sign[j, j] = -1
            index[j, j] = 0
    for a, b, c in _OCTONION_TRIPLES:
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            sign[x, y], index[x, y] = 1, z
            sign[y, x], index[y, x] = -1, z
    return sign, index


def _table_from_unit_squares(squares: Sequence[int], products: dict) -> tuple[np.ndarray, np.ndarray]:
    """4-dim table with units (1, i, j, k): unit squares plus off-diagonal products."""
    sign = np.zeros((4, 4), dtype=int)
    index = np.zeros((4, 4), dtype=int)
    for j in range(4):
        sign[0, j] = sign[j, 0] = 1
        index[0, j] = index[j, 0] = j
    for j, sq in enumerate(squares, start=1):
        sign[j, j], index[j, j] = sq, 0
    for (a, b), (s, c) in products.items():
        sign[a, b], index[a, b] = s, c
    return sign, index


@dataclass(frozen=True)
class Algebra:
    """One of the seven number systems, with its signed multiplication table."""

    tag: str
    dim: int
    sign: np.ndarray
    index: np.ndarray
    commutative: bool

    def __repr__(self) -> str:
        return f"Algebra({self.tag})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Algebra) and self.tag == other.tag

    def __hash__(self) -> int:
        return hash(self.tag)

    def unit(self, k: int) -> "MCNumber":
        coeffs = [0.0] * self.dim
        coeffs[k] = 1.0
        return MCNumber(self, coeffs)

    def from_scalar(self, value: float) -> "MCNumber":
        coeffs = [0.0] * self.dim
        coeffs[0] = float(value)
        return MCNumber(self, coeffs)


def _make_algebras() -> dict[str, Algebra]:
    algebras = {}
    one = np.ones((1, 1), dtype=int)
    algebras["Real"] = Algebra("Real", 1, one, np.zeros((1, 1), dtype=int), True)

    s2 = np.array([[1, 1], [1, -1]])
    i2 = np.array([[0, 1], [1, 0]])
    algebras["Complex"] = Algebra("Complex", 2, s2, i2, True)

    h2 = np.array([[1, 1], [1, 1]])
    algebras["Hyperbolic"] = Algebra("Hyperbolic", 2, h2, i2, True)

    # bicomplex: i^2 = j^2 = -1, k^2 = +1, commuting units, k = ij
    sign, index = _table_from_unit_squares(
        (-1, -1, 1),
        {
            (1, 2): (1, 3), (2, 1): (1, 3),
            (1, 3): (-1, 2), (3, 1): (-1, 2),
            (2, 3): (-1, 1), (3, 2): (-1, 1),
        },
    )
    algebras["Bicomplex"] = Algebra("Bicomplex", 4, sign, index, True)

    sign, index = _table_from_unit_squares(
        (-1, -1, -1),
        {
            (1, 2): (1, 3), (2, 1): (-1, 3),
            (2, 3): (1, 1), (3, 2): (-1, 1),
            (3, 1): (1, 2), (1, 3): (-1, 2),
        },
    )
    algebras["Quaternion"] = Algebra("Quaternion", 4, sign, index, False)

    # coquaternion: i^2 = -1, j^2 = k^2 = +1
    sign, index = _table_from_unit_squares(
        (-1, 1, 1),
        {
            (1, 2): (1, 3), (2, 1): (-1, 3),
            (2, 3): (-1, 1), (3, 2): (1, 1),
            (3, 1): (1, 2), (1, 3): (-1, 2),
        },
    )
    algebras["Coquaternion"] = Algebra("Coquaternion", 4, sign, index, False)

    sign, index = _octonion_table()
    algebras["Octonion"] = Algebra("Octonion", 8, sign, index, False)
    return algebras


ALGEBRAS = _make_algebras()
REAL = ALGEBRAS["Real"]
COMPLEX = ALGEBRAS["Complex"]
HYPERBOLIC = ALGEBRAS["Hyperbolic"]
BICOMPLEX = ALGEBRAS["Bicomplex"]
QUATERNION = ALGEBRAS["Quaternion"]
COQUATERNION = ALGEBRAS["Coquaternion"]
OCTONION = ALGEBRAS["Octonion"]


class MCNumber:
    """A value in one of the Cayley algebras: coefficient vector plus algebra tag."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: Algebra, coeffs: Iterable[float]):
        coeffs = tuple(float(c) for c in coeffs)
        if len(coeffs) != algebra.dim:
            raise AlgebraMismatch(f"{algebra.tag} needs {algebra.dim} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("MCNumber is immutable")

    def __repr__(self) -> str:
        return f"MCNumber({self.algebra.tag}, {list(self.coeffs)})"

    def _check(self, other: "MCNumber") -> None:
        if self.algebra != other.algebra:
            raise AlgebraMismatch(f"{self.algebra.tag} vs {other.algebra.tag}")

    def __add__(self, other: "MCNumber") -> "MCNumber":
        self._check(other)
        return MCNumber(self.algebra, (a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "MCNumber") -> "MCNumber":
        self._check(other)
        return MCNumber(self.algebra, (a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "MCNumber":
        return MCNumber(self.algebra, (-a for a in self.coeffs))

    def __rmul__(self, scalar) -> "MCNumber":
        return MCNumber(self.algebra, (scalar * a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, MCNumber):
            return mul(self, other)
        return MCNumber(self.algebra, (other * a for a in self.coeffs))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MCNumber)
            and self.algebra == other.algebra
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.algebra.tag, self.coeffs))

    def allclose(self, other: "MCNumber", tol: float = 1e-12) -> bool:
        self._check(other)
        return all(abs(a - b) <= tol for a, b in zip(self.coeffs, other.coeffs))

    @property
    def norm_sq(self) -> float:
        return sum(c * c for c in self.coeffs)


def mul(a: MCNumber, b: MCNumber) -> MCNumber:
    """Cayley product; bilinear, table-driven, total on basis indices."""
    a._check(b)
    alg = a.algebra
    out = [0.0] * alg.dim
    sign, index = alg.sign, alg.index
    for i, ca in enumerate(a.coeffs):
        if ca == 0.0:
            continue
        for j, cb in enumerate(b.coeffs):
            if cb == 0.0:
                continue
            out[index[i, j]] += sign[i, j] * ca * cb
    return MCNumber(alg, out)


def mc_mul_arrays(alg: Algebra, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cayley product of component-stacked arrays with shape (dim, ...)."""
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.result_type(a, b, float))
    for i in range(alg.dim):
        for j in range(alg.dim):
            out[alg.index[i, j]] += alg.sign[i, j] * a[i] * b[j]
    return out


_PT_FLIPS_4DIM = {"PT_ij": (1, 2), "PT_ik": (1, 3), "PT_jk": (2, 3)}


def pt_map(kind: str, n: MCNumber) -> MCNumber:
    """Flip unit signs for the chosen PT symmetry (coefficient action only;
    the caller is responsible for the accompanying x, t reflection)."""
    alg = n.algebra
    if kind == "PT_full":
        if alg.dim == 1:
            raise UnsupportedSymmetry("real numbers carry no unit to conjugate")
        return MCNumber(alg, (c if k == 0 else -c for k, c in enumerate(n.coeffs)))
    if kind in _PT_FLIPS_4DIM:
        if alg.dim != 4:
            raise UnsupportedSymmetry(f"{kind} needs a four-dimensional algebra, not {alg.tag}")
        flips = _PT_FLIPS_4DIM[kind]
        return MCNumber(alg, (-c if k in flips else c for k, c in enumerate(n.coeffs)))
    raise UnsupportedSymmetry(f"unknown PT map {kind!r}")


@dataclass(frozen=True)
class IdempotentPair:
    """Bicomplex number split over the orthogonal idempotents (1±k)/2."""

    v1: complex
    v2: complex


def to_idempotent(n: MCNumber) -> IdempotentPair:
    if n.algebra != BICOMPLEX:
        raise AlgebraMismatch("idempotent split is a bicomplex representation")
    a0, a1, a2, a3 = n.coeffs
    return IdempotentPair(complex(a0 + a3, a1 - a2), complex(a0 - a3, a1 + a2))


def from_idempotent(p: IdempotentPair) -> MCNumber:
    a0 = (p.v1.real + p.v2.real) / 2.0
    a3 = (p.v1.real - p.v2.real) / 2.0
    a1 = (p.v1.imag + p.v2.imag) / 2.0
    a2 = (p.v2.imag - p.v1.imag) / 2.0
    return MCNumber(BICOMPLEX, (a0, a1, a2, a3))


@dataclass(frozen=True)
class ComplexRep:
    """A number viewed as real part + magnitude times a unit imaginary direction."""

    real_part: float
    imag_magnitude: float
    unit_direction: tuple[float, ...]


def complex_rep(n: MCNumber) -> ComplexRep:
    """Split n as a0 + (magnitude)*(direction) with direction squaring to -1.

    Quaternions and octonions always admit this; coquaternions only when
    a1^2 - a2^2 - a3^2 > 0.
    """
    alg = n.algebra
    imag = n.coeffs[1:]
    if alg == COQUATERNION:
        m_sq = imag[0] ** 2 - imag[1] ** 2 - imag[2] ** 2
        scale = sum(c * c for c in imag)
        if m_sq <= 1e-12 * max(scale, 1e-300):
            raise DegenerateImaginary("coquaternion imaginary magnitude M^2 <= 0")
        mag = math.sqrt(m_sq)
    elif alg in (QUATERNION, OCTONION, COMPLEX):
        mag = math.sqrt(sum(c * c for c in imag))
        if mag == 0.0:
            raise DegenerateImaginary("vanishing imaginary part has no direction")
    else:
        raise UnsupportedSymmetry(f"no complex representation for {alg.tag}")
    direction = (0.0,) + tuple(c / mag for c in imag)
    return ComplexRep(n.coeffs[0], mag, direction)


def hyperbolic_polar(w: MCNumber) -> tuple[float, float]:
    """Polar split rho*exp(k*phi) of a hyperbolic number in the time-like region."""
    if w.algebra != HYPERBOLIC:
        raise AlgebraMismatch("polar split defined for hyperbolic numbers")
    alpha, beta = w.coeffs
    if alpha * alpha <= beta * beta:
        raise LightCone(f"{w} lies on or outside the light cone")
    rho = math.sqrt(alpha * alpha - beta * beta)
    phi = math.atanh(beta / alpha)
    return rho, phi


def hyperbolic_exp(phi: float) -> MCNumber:
    """exp(k*phi) = cosh(phi) + k sinh(phi)."""
    return MCNumber(HYPERBOLIC, (math.cosh(phi), math.sinh(phi)))


@lru_cache(maxsize=None)
def _basis(tag: str) -> tuple[MCNumber, ...]:
    alg = ALGEBRAS[tag]
    return tuple(alg.unit(k) for k in range(alg.dim))


def basis(alg: Algebra) -> tuple[MCNumber, ...]:
    return _basis(alg.tag)
