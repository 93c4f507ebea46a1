"""Evaluable solution fields with exact spatial derivatives.

A Field evaluates u(x, t) on arrays and exposes exact x-derivatives where the
construction permits (rational exponential-polynomial forms, Wronskian
log-derivative forms, Jacobi-elliptic forms).  Time derivatives fall back to
Richardson finite differences unless the representation gives them exactly;
the PDE residual oracle never uses these members, it re-differentiates raw
samples itself.
"""
from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .elliptic import jacobi_elliptic
from .exppoly import ExpPoly, log_derivatives_from_ratios, wronskian_derivative_patterns
from .numerics import FieldSamples, Grid, SINGULAR_GUARD, rolling_max


class Field:
    """Base class: complex scalar field on (x, t)."""

    def __call__(self, x, t):
        raise NotImplementedError

    def dx(self, x, t, order: int = 1):
        raise NotImplementedError

    def dt(self, x, t, order: int = 1):
        """Richardson finite-difference fallback in t."""
        dt = 1e-4
        stack = [np.asarray(self(x, t + k * dt)) for k in range(-4, 5)]
        c5 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
        if order != 1:
            raise NotImplementedError("only first t-derivatives are provided")
        d1 = sum(c * stack[4 + k] for k, c in zip(range(-2, 3), c5)) / dt
        d2 = sum(c * stack[4 + 2 * k] for k, c in zip(range(-2, 3), c5)) / (2 * dt)
        return (16.0 * d1 - d2) / 15.0

    def den(self, x, t):
        """Denominator magnitude used for singular masking, or None."""
        return None

    def mask_at(self, x, t, frac: float = SINGULAR_GUARD) -> np.ndarray:
        """True where the denominator is within `frac` of vanishing, judged
        against a local scale so exponentially growing denominators only get
        flagged near genuine zeros.  Residual oracles pass a wider `frac` to
        also exclude the strip where stencils straddle a singular curve."""
        d = self.den(x, t)
        if d is None:
            return np.zeros(np.broadcast_shapes(np.shape(x), np.shape(t)), dtype=bool)
        d = np.abs(np.asarray(d))
        if d.ndim == 0:
            return np.zeros((), dtype=bool)
        local = rolling_max(d, 12)
        return d < frac * np.maximum(local, 1e-300)

    def sample(self, grid: Grid) -> FieldSamples:
        x = grid.x
        values = np.stack([np.asarray(self(x, t)) for t in grid.t_values])
        mask = np.stack([self.mask_at(x, t) for t in grid.t_values])
        return FieldSamples(grid, values, mask)


class ExpRationalField(Field):
    """num / den^power with ExpPoly numerator and denominator; all derivatives exact."""

    def __init__(self, num: ExpPoly, den: ExpPoly | None = None, power: int = 1):
        self.num = num
        self.base = den if den is not None else ExpPoly.const(1.0)
        self.power = power if den is not None else 0
        self._dx_cache: list["ExpRationalField"] = []
        self._dt_cache: list["ExpRationalField"] = []

    def _derivative(self, var: str) -> "ExpRationalField":
        if self.power == 0:
            return ExpRationalField(self.num.diff(var))
        num = self.num.diff(var) * self.base - self.power * self.num * self.base.diff(var)
        return ExpRationalField(num.prune(), self.base, self.power + 1)

    def dx_field(self, order: int = 1) -> "ExpRationalField":
        while len(self._dx_cache) < order:
            prev = self._dx_cache[-1] if self._dx_cache else self
            self._dx_cache.append(prev._derivative("x"))
        return self._dx_cache[order - 1] if order else self

    def dt_field(self, order: int = 1) -> "ExpRationalField":
        while len(self._dt_cache) < order:
            prev = self._dt_cache[-1] if self._dt_cache else self
            self._dt_cache.append(prev._derivative("t"))
        return self._dt_cache[order - 1] if order else self

    def _dominant_exponent(self, x, t):
        """Pointwise max of Re(a x + b t) over the denominator terms, used to
        shift all exponents so den^power stays inside double range."""
        x = np.asarray(x, dtype=complex)
        t = np.asarray(t, dtype=complex)
        shape = np.broadcast_shapes(x.shape, t.shape)
        m = np.full(shape, -np.inf)
        for (px, pt, a, b), _ in self.base.terms.items():
            m = np.maximum(m, np.real(a * x + b * t))
        return np.where(np.isfinite(m), m, 0.0)

    def _eval_shifted(self, poly: ExpPoly, x, t, shift):
        x = np.asarray(x, dtype=complex)
        t = np.asarray(t, dtype=complex)
        out = np.zeros(np.broadcast_shapes(x.shape, t.shape, np.shape(shift)), dtype=complex)
        for (px, pt, a, b), c in poly.terms.items():
            term = np.exp(a * x + b * t - shift)
            if px:
                term = term * x ** px
            if pt:
                term = term * t ** pt
            out += c * term
        return out

    def __call__(self, x, t):
        if self.power == 0:
            return self.num(x, t)
        m = self._dominant_exponent(x, t)
        n = self._eval_shifted(self.num, x, t, self.power * m)
        d = self._eval_shifted(self.base, x, t, m)
        return n / d ** self.power

    def dx(self, x, t, order: int = 1):
        return self.dx_field(order)(x, t)

    def dt(self, x, t, order: int = 1):
        return self.dt_field(order)(x, t)

    def den(self, x, t):
        if self.power == 0:
            return None
        return self._eval_shifted(self.base, x, t, self._dominant_exponent(x, t))

    def conjugate_reflect(self, kappa: float = 1.0, reflect_x: bool = True,
                          reflect_t: bool = False) -> "ExpRationalField":
        """kappa * conj(u(+-x, +-t)) as a new exact rational field."""
        num = (kappa * self.num).conjugate().reflect(x=reflect_x, t=reflect_t)
        base = self.base.conjugate().reflect(x=reflect_x, t=reflect_t)
        return ExpRationalField(num, base, self.power)


class TauLogField(Field):
    """u = scale * d^2/dx^2 ln(tau) for an ExpPoly tau.

    Derivatives of any order are computed from the exact tau-derivative ratios
    tau^(k)/tau via the power-series logarithm, which stays well conditioned
    where the expanded rational-derivative numerators would cancel
    catastrophically.
    """

    def __init__(self, tau: ExpPoly, scale: float = 2.0):
        self.tau = tau
        self.scale = scale
        self._tau_derivs = [tau]

    def _tau_dx(self, k: int) -> ExpPoly:
        while len(self._tau_derivs) <= k:
            self._tau_derivs.append(self._tau_derivs[-1].diff("x"))
        return self._tau_derivs[k]

    def _dominant(self, x, t):
        x = np.asarray(x, dtype=complex)
        t = np.asarray(t, dtype=complex)
        m = np.full(np.broadcast_shapes(x.shape, t.shape), -np.inf)
        for (px, pt, a, b), _ in self.tau.terms.items():
            m = np.maximum(m, np.real(a * x + b * t))
        return np.where(np.isfinite(m), m, 0.0)

    @staticmethod
    def _eval_shifted(poly: ExpPoly, x, t, shift):
        x = np.asarray(x, dtype=complex)
        t = np.asarray(t, dtype=complex)
        out = np.zeros(np.broadcast_shapes(x.shape, t.shape, np.shape(shift)), dtype=complex)
        for (px, pt, a, b), c in poly.terms.items():
            term = np.exp(a * x + b * t - shift)
            if px:
                term = term * x ** px
            if pt:
                term = term * t ** pt
            out += c * term
        return out

    def _log_dx(self, x, t, upto: int) -> list[np.ndarray]:
        from .exppoly import log_derivatives_from_ratios
        shift = self._dominant(x, t)
        base = self._eval_shifted(self.tau, x, t, shift)
        safe = np.where(base == 0, 1.0, base)
        ratios = [self._eval_shifted(self._tau_dx(k), x, t, shift) / safe
                  for k in range(1, upto + 1)]
        return log_derivatives_from_ratios(ratios)

    def __call__(self, x, t):
        return self.scale * self._log_dx(x, t, 2)[1]

    def dx(self, x, t, order: int = 1):
        return self.scale * self._log_dx(x, t, order + 2)[order + 1]

    def dt(self, x, t, order: int = 1):
        if order != 1:
            return super().dt(x, t, order)
        # d/dt ln tau enters through the mixed series: use d/dt of the ratios
        shift = self._dominant(x, t)
        base = self._eval_shifted(self.tau, x, t, shift)
        safe = np.where(base == 0, 1.0, base)
        tau_t = self.tau.diff("t")
        tau_xt = tau_t.diff("x")
        tau_xxt = tau_xt.diff("x")
        r1 = self._eval_shifted(self._tau_dx(1), x, t, shift) / safe
        r2 = self._eval_shifted(self._tau_dx(2), x, t, shift) / safe
        s0 = self._eval_shifted(tau_t, x, t, shift) / safe
        s1 = self._eval_shifted(tau_xt, x, t, shift) / safe
        s2 = self._eval_shifted(tau_xxt, x, t, shift) / safe
        # d/dt [ (ln tau)'' ] = s2 - 2 r1 s1 + (2 r1^2 - r2) s0
        return self.scale * (s2 - 2.0 * r1 * s1 + (2.0 * r1 ** 2 - r2) * s0)

    def den(self, x, t):
        return self._eval_shifted(self.tau, x, t, self._dominant(x, t))


def log2_from_tau(tau: ExpPoly, scale: float = 2.0) -> TauLogField:
    """scale * d^2/dx^2 ln(tau) with stable exact derivatives of any order."""
    return TauLogField(tau, scale)


class WronskianLogField(Field):
    """c * d^2/dx^2 ln W(f_1..f_n) with exact x-derivatives from row-bump
    determinant identities (column-scaled per point for overflow safety)."""

    def __init__(self, columns: Sequence[ExpPoly], scale: float = 2.0, guard: float = 1e-12):
        self.columns = list(columns)
        self.scale = scale
        self.guard = guard
        self._col_derivs: list[list[ExpPoly]] = [[f] for f in self.columns]

    def _col(self, j: int, order: int) -> ExpPoly:
        col = self._col_derivs[j]
        while len(col) <= order:
            col.append(col[-1].diff("x"))
        return col[order]

    def _matrix(self, x, t, max_row: int) -> np.ndarray:
        n = len(self.columns)
        x = np.asarray(x, dtype=complex)
        t = np.asarray(t, dtype=complex)
        shape = np.broadcast_shapes(x.shape, t.shape)
        mat = np.zeros(shape + (max_row, n), dtype=complex)
        for j in range(n):
            for i in range(max_row):
                mat[..., i, j] = self._col(j, i)(x, t)
        return mat

    def _log_derivs(self, x, t, upto: int) -> tuple[np.ndarray, list[np.ndarray]]:
        n = len(self.columns)
        mat = self._matrix(x, t, n + upto)
        scale = np.max(np.abs(mat), axis=-2, keepdims=True)
        scale[scale == 0] = 1.0
        mat = mat / scale
        w0 = np.linalg.det(mat[..., :n, :])
        big = np.max(np.abs(w0)) if w0.size else 0.0
        mask = np.abs(w0) < self.guard * max(big, 1e-300)
        safe = np.where(mask, 1.0, w0)
        ratios = []
        for k in range(1, upto + 1):
            acc = np.zeros_like(w0)
            for orders, c in wronskian_derivative_patterns(n, k).items():
                acc = acc + c * np.linalg.det(mat[..., orders, :])
            ratios.append(acc / safe)
        return mask, log_derivatives_from_ratios(ratios)

    def __call__(self, x, t):
        mask, logds = self._log_derivs(x, t, 2)
        return np.where(mask, np.nan, self.scale * logds[1])

    def dx(self, x, t, order: int = 1):
        mask, logds = self._log_derivs(x, t, 2 + order)
        return np.where(mask, np.nan, self.scale * logds[1 + order])

    def den(self, x, t):
        n = len(self.columns)
        mat = self._matrix(x, t, n)
        scale = np.max(np.abs(mat), axis=-2, keepdims=True)
        scale[scale == 0] = 1.0
        return np.linalg.det(mat / scale)


class CallableField(Field):
    """Field from closures: value plus optional exact derivative closures."""

    def __init__(self, fn: Callable, dxs: Sequence[Callable] = (), den_fn: Callable | None = None):
        self.fn = fn
        self.dxs = list(dxs)
        self.den_fn = den_fn

    def __call__(self, x, t):
        return self.fn(np.asarray(x), t)

    def dx(self, x, t, order: int = 1):
        if order <= len(self.dxs):
            return self.dxs[order - 1](np.asarray(x), t)
        raise NotImplementedError(f"no exact x-derivative of order {order}")

    def den(self, x, t):
        if self.den_fn is None:
            return None
        return self.den_fn(np.asarray(x), t)


class JacobiExprField(Field):
    """coeff * prod of sn^i cn^j dn^k at argument (px*x + pt*t + shift).

    Differentiation is done in the (sn, cn, dn) polynomial ring, so every
    derivative order is exact.
    """

    def __init__(self, mono: dict[tuple[int, int, int], complex], m: float,
                 px: float, pt: float, shift: complex = 0.0):
        self.mono = dict(mono)
        self.m = m
        self.px = px
        self.pt = pt
        self.shift = shift

    def _diff_mono(self, mono: dict) -> dict:
        out: dict[tuple[int, int, int], complex] = {}

        def add(key, val):
            out[key] = out.get(key, 0j) + val

        for (i, j, k), c in mono.items():
            if i:
                add((i - 1, j + 1, k + 1), c * i)
            if j:
                add((i + 1, j - 1, k + 1), -c * j)
            if k:
                add((i + 1, j + 1, k - 1), -self.m * c * k)
        return {k: v for k, v in out.items() if v != 0}

    def _eval_mono(self, mono: dict, u: np.ndarray) -> np.ndarray:
        sn, cn, dn, _ = jacobi_elliptic(u, self.m)
        out = np.zeros_like(np.asarray(u, dtype=complex))
        for (i, j, k), c in mono.items():
            out = out + c * sn ** i * cn ** j * dn ** k
        return out

    def _arg(self, x, t):
        return self.px * np.asarray(x, dtype=float) + self.pt * t + self.shift

    def __call__(self, x, t):
        return self._eval_mono(self.mono, np.real(self._arg(x, t)))

    def dx(self, x, t, order: int = 1):
        mono = self.mono
        for _ in range(order):
            mono = self._diff_mono(mono)
        return self.px ** order * self._eval_mono(mono, np.real(self._arg(x, t)))

    def dt(self, x, t, order: int = 1):
        mono = self.mono
        for _ in range(order):
            mono = self._diff_mono(mono)
        return self.pt ** order * self._eval_mono(mono, np.real(self._arg(x, t)))


class TransformField(Field):
    """kappa * [conj] u(+-x, +-t) for an arbitrary base field."""

    def __init__(self, base: Field, kappa: complex = 1.0, conj: bool = False,
                 reflect_x: bool = False, reflect_t: bool = False):
        self.base = base
        self.kappa = kappa
        self.conj = conj
        self.rx = reflect_x
        self.rt = reflect_t

    def _args(self, x, t):
        x = -np.asarray(x) if self.rx else np.asarray(x)
        t = -t if self.rt else t
        return x, t

    def _post(self, v):
        return self.kappa * (np.conj(v) if self.conj else v)

    def __call__(self, x, t):
        xa, ta = self._args(x, t)
        return self._post(self.base(xa, ta))

    def dx(self, x, t, order: int = 1):
        xa, ta = self._args(x, t)
        sign = (-1.0) ** order if self.rx else 1.0
        return sign * self._post(self.base.dx(xa, ta, order))

    def den(self, x, t):
        xa, ta = self._args(x, t)
        d = self.base.den(xa, ta)
        return d


class SumField(Field):
    def __init__(self, parts: Sequence[Field], weights: Sequence[complex] | None = None):
        self.parts = list(parts)
        self.weights = list(weights) if weights is not None else [1.0] * len(self.parts)

    def __call__(self, x, t):
        return sum(w * p(x, t) for p, w in zip(self.parts, self.weights))

    def dx(self, x, t, order: int = 1):
        return sum(w * p.dx(x, t, order) for p, w in zip(self.parts, self.weights))


class ShiftedField(Field):
    """u(x - x_shift, t)."""

    def __init__(self, base: Field, x_shift: float):
        self.base = base
        self.x_shift = x_shift

    def __call__(self, x, t):
        return self.base(np.asarray(x) - self.x_shift, t)

    def dx(self, x, t, order: int = 1):
        return self.base.dx(np.asarray(x) - self.x_shift, t, order)


class MiuraField(Field):
    """KdV field 4 v^2 +- 2i v_x built from an mKdV field with exact derivatives."""

    def __init__(self, v: Field, sign: int = 1):
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        self.v = v
        self.sign = sign

    def _vd(self, x, t, k):
        return self.v(x, t) if k == 0 else self.v.dx(x, t, k)

    def __call__(self, x, t):
        return 4.0 * self._vd(x, t, 0) ** 2 + 2j * self.sign * self._vd(x, t, 1)

    def dx(self, x, t, order: int = 1):
        acc = 2j * self.sign * self._vd(x, t, order + 1)
        for k in range(order + 1):
            acc = acc + 4.0 * math.comb(order, k) * self._vd(x, t, k) * self._vd(x, t, order - k)
        return acc

    def den(self, x, t):
        return self.v.den(x, t)
