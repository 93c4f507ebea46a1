"""Differential polynomials in a field and its conjugate.

A monomial is a product of factors u^(j) (j-th x-derivative) and conj(u)^(j),
with an integer power that may be negative for the underived field itself.
Charge-density recursions are built symbolically here and then evaluated on
arrays of exact derivatives, so no finite differences enter the charges.
"""
from __future__ import annotations

import numpy as np

# variable id: (derivative_order, conj_flag); monomial: tuple of ((var, power)),
# sorted; value: complex coefficient
Var = tuple[int, int]
Monomial = tuple[tuple[Var, int], ...]


def _normalize(factors: dict[Var, int]) -> Monomial:
    return tuple(sorted((v, p) for v, p in factors.items() if p != 0))


class DiffPoly:
    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, complex] | None = None):
        self.terms = {m: complex(c) for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def field(cls, order: int = 0, conj: bool = False, power: int = 1) -> "DiffPoly":
        return cls({_normalize({(order, int(conj)): power}): 1.0})

    @classmethod
    def const(cls, c: complex) -> "DiffPoly":
        return cls({(): c})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "DiffPoly") -> "DiffPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0j) + c
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
        return DiffPoly(out)

    def __neg__(self) -> "DiffPoly":
        return DiffPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "DiffPoly") -> "DiffPoly":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, DiffPoly):
            return DiffPoly({m: c * other for m, c in self.terms.items()})
        out: dict[Monomial, complex] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                factors = dict(m1)
                for v, p in m2:
                    factors[v] = factors.get(v, 0) + p
                m = _normalize(factors)
                out[m] = out.get(m, 0j) + c1 * c2
        return DiffPoly(out)

    __rmul__ = __mul__

    def diff(self) -> "DiffPoly":
        out: dict[Monomial, complex] = {}
        for m, c in self.terms.items():
            for i, (var, p) in enumerate(m):
                factors = dict(m)
                factors[var] = p - 1
                bumped = (var[0] + 1, var[1])
                factors[bumped] = factors.get(bumped, 0) + 1
                key = _normalize(factors)
                out[key] = out.get(key, 0j) + c * p
        return DiffPoly({m: c for m, c in out.items() if c != 0})

    def max_order(self) -> int:
        orders = [v[0] for m in self.terms for v, _ in m]
        return max(orders, default=0)

    def needs_conjugate(self) -> bool:
        return any(v[1] for m in self.terms for v, _ in m)

    def evaluate(self, derivs: list[np.ndarray], conj_derivs: list[np.ndarray] | None = None) -> np.ndarray:
        """Evaluate on arrays: derivs[j] = u^(j), conj_derivs[j] = conj(u)^(j)."""
        shape = derivs[0].shape
        out = np.zeros(shape, dtype=complex)
        for m, c in self.terms.items():
            term = np.full(shape, c, dtype=complex)
            for (order, conj), p in m:
                base = conj_derivs[order] if conj else derivs[order]
                term = term * base ** p
            out += term
        return out
