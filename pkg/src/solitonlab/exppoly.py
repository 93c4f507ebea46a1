"""Exact calculus on exponential polynomials.

An ExpPoly is a finite sum of terms  c * x^px * t^pt * exp(a*x + b*t)  with
complex c, a, b and nonnegative integer powers.  The class is closed under
addition, multiplication, x/t differentiation, conjugation (real x, t) and
coordinate reflection, which is everything the solution builders need.

ParamExpPoly carries the same terms with Laurent-polynomial dependence on one
spectral parameter, so parameter derivatives (Jordan states) stay exact.
"""
from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .errors import NonPolynomialParameter, SingularWronskian

Key = tuple[int, int, complex, complex]

_PRUNE = 1e-13


class ExpPoly:
    """Canonical dict-of-terms representation, keyed by (px, pt, a, b)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Key, complex] | None = None):
        self.terms = {k: complex(v) for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def term(cls, coeff: complex, px: int = 0, pt: int = 0, a: complex = 0j, b: complex = 0j) -> "ExpPoly":
        return cls({(int(px), int(pt), complex(a), complex(b)): coeff})

    @classmethod
    def const(cls, value: complex) -> "ExpPoly":
        return cls.term(value)

    @classmethod
    def zero(cls) -> "ExpPoly":
        return cls()

    def __repr__(self) -> str:
        if not self.terms:
            return "ExpPoly(0)"
        bits = [f"({c:.6g})*x^{px}*t^{pt}*e^[({a:.6g})x+({b:.6g})t]" for (px, pt, a, b), c in self.terms.items()]
        return "ExpPoly(" + " + ".join(bits) + ")"

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, ExpPoly):
            other = ExpPoly.const(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, 0j) + v
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return ExpPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, ExpPoly):
            other = ExpPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return ExpPoly.const(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, ExpPoly):
            return ExpPoly({k: v * other for k, v in self.terms.items()})
        out: dict[Key, complex] = {}
        for (px1, pt1, a1, b1), c1 in self.terms.items():
            for (px2, pt2, a2, b2), c2 in other.terms.items():
                k = (px1 + px2, pt1 + pt2, a1 + a2, b1 + b2)
                out[k] = out.get(k, 0j) + c1 * c2
        return ExpPoly({k: v for k, v in out.items() if v != 0})

    __rmul__ = __mul__

    def diff(self, var: str) -> "ExpPoly":
        """Exact partial derivative with respect to 'x' or 't'."""
        out: dict[Key, complex] = {}

        def add(k: Key, v: complex):
            s = out.get(k, 0j) + v
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s

        for (px, pt, a, b), c in self.terms.items():
            if var == "x":
                if a != 0:
                    add((px, pt, a, b), c * a)
                if px:
                    add((px - 1, pt, a, b), c * px)
            elif var == "t":
                if b != 0:
                    add((px, pt, a, b), c * b)
                if pt:
                    add((px, pt - 1, a, b), c * pt)
            else:
                raise ValueError(f"unknown variable {var!r}")
        return ExpPoly(out)

    def dx(self, order: int = 1) -> "ExpPoly":
        f = self
        for _ in range(order):
            f = f.diff("x")
        return f

    def dt(self, order: int = 1) -> "ExpPoly":
        f = self
        for _ in range(order):
            f = f.diff("t")
        return f

    def conjugate(self) -> "ExpPoly":
        """Complex conjugate as a function of real x, t."""
        return ExpPoly({(px, pt, a.conjugate(), b.conjugate()): c.conjugate()
                        for (px, pt, a, b), c in self.terms.items()})

    def reflect(self, x: bool = False, t: bool = False) -> "ExpPoly":
        """Substitute x -> -x and/or t -> -t."""
        out: dict[Key, complex] = {}
        for (px, pt, a, b), c in self.terms.items():
            if x:
                c, a = c * (-1) ** px, -a
            if t:
                c, b = c * (-1) ** pt, -b
            k = (px, pt, a, b)
            out[k] = out.get(k, 0j) + c
        return ExpPoly({k: v for k, v in out.items() if v != 0})

    def scale_args(self, cx: complex = 1.0, ct: complex = 1.0) -> "ExpPoly":
        """Substitute x -> cx*x, t -> ct*t."""
        out: dict[Key, complex] = {}
        for (px, pt, a, b), c in self.terms.items():
            k = (px, pt, a * cx, b * ct)
            out[k] = out.get(k, 0j) + c * cx ** px * ct ** pt
        return ExpPoly({k: v for k, v in out.items() if v != 0})

    def prune(self, rel: float = _PRUNE) -> "ExpPoly":
        if not self.terms:
            return self
        big = max(abs(v) for v in self.terms.values())
        return ExpPoly({k: v for k, v in self.terms.items() if abs(v) > rel * big})

    def __call__(self, x, t):
        x = np.asarray(x, dtype=complex)
        t = np.asarray(t, dtype=complex)
        out = np.zeros(np.broadcast_shapes(x.shape, t.shape), dtype=complex)
        for (px, pt, a, b), c in self.terms.items():
            term = np.exp(a * x + b * t)
            if px:
                term = term * x ** px
            if pt:
                term = term * t ** pt
            out += c * term
        return out


class Laurent:
    """Laurent polynomial in one parameter, used for exact parameter calculus."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, complex] | None = None):
        self.coeffs = {int(k): complex(v) for k, v in (coeffs or {}).items() if v != 0}
        if any(not isinstance(k, int) for k in (coeffs or {})):
            raise NonPolynomialParameter("Laurent exponents must be integers")

    @classmethod
    def const(cls, value: complex) -> "Laurent":
        return cls({0: value})

    @classmethod
    def var(cls) -> "Laurent":
        return cls({1: 1.0})

    def __add__(self, other):
        if not isinstance(other, Laurent):
            other = Laurent.const(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k, 0j) + v
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return Laurent(out)

    def __neg__(self):
        return Laurent({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, Laurent):
            other = Laurent.const(other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Laurent):
            return Laurent({k: v * other for k, v in self.coeffs.items()})
        out: dict[int, complex] = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                k = k1 + k2
                out[k] = out.get(k, 0j) + v1 * v2
        return Laurent(out)

    __rmul__ = __mul__

    def deriv(self) -> "Laurent":
        return Laurent({k - 1: k * v for k, v in self.coeffs.items() if k != 0})

    def __call__(self, value: complex) -> complex:
        return sum(c * value ** k for k, c in self.coeffs.items())

    def frozen(self) -> tuple:
        return tuple(sorted(self.coeffs.items(), key=lambda kv: kv[0]))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs


class ParamExpPoly:
    """Sum of p(s)*x^px*t^pt*exp(a(s)x + b(s)t) with Laurent p, a, b in the
    spectral parameter s; closed under d/ds, d/dx and d/dt."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[Laurent, int, int, Laurent, Laurent]] = ()):
        merged: dict[tuple, tuple[Laurent, int, int, Laurent, Laurent]] = {}
        for p, px, pt, a, b in terms:
            if p.is_zero:
                continue
            key = (px, pt, a.frozen(), b.frozen())
            if key in merged:
                q, *_ = merged[key]
                merged[key] = (q + p, px, pt, a, b)
            else:
                merged[key] = (p, px, pt, a, b)
        self.terms = [v for v in merged.values() if not v[0].is_zero]

    @classmethod
    def exponential(cls, a: Laurent, b: Laurent, coeff: Laurent | complex = 1.0) -> "ParamExpPoly":
        p = coeff if isinstance(coeff, Laurent) else Laurent.const(coeff)
        return cls([(p, 0, 0, a, b)])

    def __add__(self, other: "ParamExpPoly") -> "ParamExpPoly":
        return ParamExpPoly(list(self.terms) + list(other.terms))

    def __mul__(self, scalar) -> "ParamExpPoly":
        s = scalar if isinstance(scalar, Laurent) else Laurent.const(scalar)
        return ParamExpPoly([(p * s, px, pt, a, b) for p, px, pt, a, b in self.terms])

    __rmul__ = __mul__

    def diff_param(self) -> "ParamExpPoly":
        out = []
        for p, px, pt, a, b in self.terms:
            out.append((p.deriv(), px, pt, a, b))
            out.append((p * a.deriv(), px + 1, pt, a, b))
            out.append((p * b.deriv(), px, pt + 1, a, b))
        return ParamExpPoly(out)

    def diff_x(self) -> "ParamExpPoly":
        out = []
        for p, px, pt, a, b in self.terms:
            out.append((p * a, px, pt, a, b))
            if px:
                out.append((p * px, px - 1, pt, a, b))
        return ParamExpPoly(out)

    def diff_t(self) -> "ParamExpPoly":
        out = []
        for p, px, pt, a, b in self.terms:
            out.append((p * b, px, pt, a, b))
            if pt:
                out.append((p * pt, px, pt - 1, a, b))
        return ParamExpPoly(out)

    def at(self, s: complex) -> ExpPoly:
        """Evaluate the parameter, leaving an ordinary ExpPoly in x, t."""
        out: dict[Key, complex] = {}
        for p, px, pt, a, b in self.terms:
            k = (px, pt, complex(a(s)), complex(b(s)))
            out[k] = out.get(k, 0j) + p(s)
        return ExpPoly(out)


def param_diff(seed: ParamExpPoly, order: int, s: complex) -> ExpPoly:
    """order-th parameter derivative of a parameterized seed, evaluated at s."""
    f = seed
    for _ in range(order):
        f = f.diff_param()
    return f.at(s)


def jordan_seeds(seed: ParamExpPoly, count: int, s: complex) -> list[ExpPoly]:
    """The tower seed, d/ds seed, ..., d^{count-1}/ds^{count-1} seed at s."""
    out = []
    f = seed
    for k in range(count):
        out.append(f.at(s))
        if k + 1 < count:
            f = f.diff_param()
    return out


# -- seed builders -----------------------------------------------------------

def exp_seed(a: complex, b: complex, const: complex = 0.0) -> ExpPoly:
    """exp(a*x + b*t + const)."""
    return ExpPoly.term(np.exp(const), a=a, b=b)


def cosh_seed(a: complex, b: complex, const: complex = 0.0) -> ExpPoly:
    """cosh(a*x + b*t + const)."""
    return 0.5 * (exp_seed(a, b, const) + exp_seed(-a, -b, -const))


def sinh_seed(a: complex, b: complex, const: complex = 0.0) -> ExpPoly:
    return 0.5 * (exp_seed(a, b, const) - exp_seed(-a, -b, -const))


def param_exp_seed(a: Laurent, b: Laurent, const: complex = 0.0, coeff: complex = 1.0) -> ParamExpPoly:
    return ParamExpPoly.exponential(a, b, Laurent.const(coeff * np.exp(const)))


def param_cosh_seed(a: Laurent, b: Laurent, const: complex = 0.0) -> ParamExpPoly:
    na = Laurent({k: -v for k, v in a.coeffs.items()})
    nb = Laurent({k: -v for k, v in b.coeffs.items()})
    return param_exp_seed(a, b, const, 0.5) + param_exp_seed(na, nb, -const, 0.5)


def param_sinh_seed(a: Laurent, b: Laurent, const: complex = 0.0) -> ParamExpPoly:
    na = Laurent({k: -v for k, v in a.coeffs.items()})
    nb = Laurent({k: -v for k, v in b.coeffs.items()})
    return param_exp_seed(a, b, const, 0.5) + param_exp_seed(na, nb, -const, -0.5)


def kdv_schroedinger_seed(mu: complex, half: bool = True) -> ParamExpPoly:
    """cosh[(s x - s^3 t + mu)/2] as a function of the spectral parameter s."""
    scale = 0.5 if half else 1.0
    a = Laurent({1: scale})
    b = Laurent({3: -scale})
    return param_cosh_seed(a, b, scale * mu if half else mu)


# -- pointwise Wronskians ----------------------------------------------------

def _derivative_matrix(fs: list[ExpPoly], x, t, extra: int = 0) -> np.ndarray:
    """Rows: x-derivative orders 0..N-1+extra, columns: the functions."""
    n = len(fs)
    x = np.asarray(x, dtype=complex)
    t = np.asarray(t, dtype=complex)
    shape = np.broadcast_shapes(x.shape, t.shape)
    mat = np.zeros(shape + (n + extra, n), dtype=complex)
    for j, f in enumerate(fs):
        g = f
        for i in range(n + extra):
            mat[..., i, j] = g(x, t)
            g = g.diff("x")
    return mat


def wronskian(fs: list[ExpPoly], point: tuple[float, float], guard: float = 1e-13):
    """W_N = det[d^i/dx^i f_j] at the point, via LU with partial pivoting."""
    x, t = point
    mat = _derivative_matrix(list(fs), x, t)
    scale = np.max(np.abs(mat), axis=-2, keepdims=True)
    scale[scale == 0] = 1.0
    det = np.linalg.det(mat / scale) * np.prod(scale, axis=(-2, -1))
    det = complex(det) if det.ndim == 0 else det
    ref = np.prod(scale, axis=(-2, -1))
    if np.any(np.abs(det) < guard * np.abs(ref)):
        raise SingularWronskian(f"|W| below guard at {point}")
    return det


def wronskian_derivative_patterns(n: int, k: int) -> dict[tuple[int, ...], int]:
    """d^k/dx^k of an n-column Wronskian as integer-weighted determinants whose
    rows carry the returned derivative orders."""
    patterns = {tuple(range(n)): 1}
    for _ in range(k):
        nxt: dict[tuple[int, ...], int] = {}
        for orders, c in patterns.items():
            present = set(orders)
            for i, o in enumerate(orders):
                if o + 1 in present:
                    continue
                bumped = orders[:i] + (o + 1,) + orders[i + 1:]
                nxt[bumped] = nxt.get(bumped, 0) + c
        patterns = nxt
    return patterns


def wronskian_log_derivatives(fs: list[ExpPoly], x, t, max_order: int,
                              guard: float = 1e-13):
    """(W, mask, [d^k/dx^k ln W for k = 1..max_order]) on the broadcast grid.

    Uses the row-bump determinant identities for the Wronskian derivatives and
    a power-series logarithm for the ratios; columns are scaled per point to
    keep the determinants inside double-precision range.
    """
    n = len(fs)
    mat = _derivative_matrix(list(fs), x, t, extra=max_order)
    scale = np.max(np.abs(mat), axis=-2, keepdims=True)
    scale[scale == 0] = 1.0
    mat = mat / scale

    def det_of(orders: tuple[int, ...]) -> np.ndarray:
        return np.linalg.det(mat[..., orders, :])

    w0 = det_of(tuple(range(n)))
    big = np.max(np.abs(w0)) if w0.size else 0.0
    mask = np.abs(w0) < guard * max(big, 1e-300)
    safe = np.where(mask, 1.0, w0)

    ratios = []
    for k in range(1, max_order + 1):
        acc = np.zeros_like(w0)
        for orders, c in wronskian_derivative_patterns(n, k).items():
            acc = acc + c * det_of(orders)
        ratios.append(acc / safe)

    logds = log_derivatives_from_ratios(ratios)
    return w0, mask, logds


def log_derivatives_from_ratios(ratios: list[np.ndarray]) -> list[np.ndarray]:
    """Given r_k = W^(k)/W, return d^k/dx^k ln W for k = 1..K via the series log."""
    K = len(ratios)
    import math
    s = [None] + [ratios[k - 1] / math.factorial(k) for k in range(1, K + 1)]
    ell: list = [None] * (K + 1)
    for k in range(1, K + 1):
        acc = s[k]
        for j in range(1, k):
            acc = acc - (j / k) * ell[j] * s[k - j]
        ell[k] = acc
    return [ell[k] * math.factorial(k) for k in range(1, K + 1)]


def det_exppoly(matrix: list[list[ExpPoly]], prune: float = 1e-12) -> ExpPoly:
    """Exact symbolic determinant of a matrix of ExpPolys (minor expansion,
    memoized on the free-column set).  Cancellations between permutation
    products happen in the coefficient algebra, which keeps later pointwise
    evaluation stable even where the columns are nearly parallel."""
    n = len(matrix)
    cache: dict[frozenset, ExpPoly] = {}

    def minor(cols: frozenset) -> ExpPoly:
        if cols in cache:
            return cache[cols]
        row = n - len(cols)
        if len(cols) == 1:
            (j,) = cols
            out = matrix[row][j]
        else:
            out = ExpPoly.zero()
            for rank, j in enumerate(sorted(cols)):
                entry = matrix[row][j]
                if entry.is_zero:
                    continue
                sub = minor(cols - {j})
                piece = entry * sub
                out = out + piece if rank % 2 == 0 else out - piece
        cache[cols] = out
        return out

    return minor(frozenset(range(n))).prune(prune)


def wronskian_exppoly(fs: list[ExpPoly], prune: float = 1e-12) -> ExpPoly:
    """The Wronskian in x of the given functions, as an exact ExpPoly."""
    n = len(fs)
    cols = []
    for f in fs:
        col = [f]
        for _ in range(n - 1):
            col.append(col[-1].diff("x"))
        cols.append(col)
    matrix = [[cols[j][i] for j in range(n)] for i in range(n)]
    return det_exppoly(matrix, prune)


def log_wronskian_dx2(fs: list[ExpPoly], point: tuple[float, float]):
    """d^2/dx^2 ln W_N at the point, from the determinant identities."""
    x, t = point
    w0, mask, logds = wronskian_log_derivatives(list(fs), x, t, 2)
    if np.any(mask):
        raise SingularWronskian(f"|W| below guard at {point}")
    val = logds[1]
    return complex(val) if np.ndim(val) == 0 else val
