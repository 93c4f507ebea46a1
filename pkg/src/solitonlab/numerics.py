"""Grids, finite-difference oracles, quadrature and peak tracking.

Everything here deliberately avoids the exact-calculus route: residuals are
measured with 4th-order central stencils plus one Richardson step, so they
form an independent check on the closed-form constructions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import InsufficientGrid, NoPeak, NonDecaying

DEFAULT_XMAX = 20.0
DEFAULT_NX = 2001
WIDE_XMAX = 80.0
WIDE_NX = 4001
SINGULAR_GUARD = 1e-10


@dataclass(frozen=True)
class Grid:
    """Uniform x-grid together with the time slices of interest."""

    x0: float = -DEFAULT_XMAX
    x1: float = DEFAULT_XMAX
    nx: int = DEFAULT_NX
    t_values: tuple[float, ...] = (0.0,)

    def __post_init__(self):
        if self.x1 <= self.x0:
            raise ValueError("x1 must exceed x0")
        if self.nx < 16:
            raise ValueError("nx must be at least 16")
        object.__setattr__(self, "t_values", tuple(float(t) for t in self.t_values))

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x0, self.x1, self.nx)

    @property
    def h(self) -> float:
        return (self.x1 - self.x0) / (self.nx - 1)

    def with_times(self, t_values: Sequence[float]) -> "Grid":
        return Grid(self.x0, self.x1, self.nx, tuple(t_values))


def default_grid(t_values: Sequence[float] = (0.0,), wide: bool = False) -> Grid:
    if wide:
        return Grid(-WIDE_XMAX, WIDE_XMAX, WIDE_NX, tuple(t_values))
    return Grid(-DEFAULT_XMAX, DEFAULT_XMAX, DEFAULT_NX, tuple(t_values))


@dataclass
class FieldSamples:
    """Values of a field on a grid with a mask marking near-singular points."""

    grid: Grid
    values: np.ndarray          # shape (nt, nx) or (ncomp, nt, nx)
    mask: np.ndarray = field(default=None)  # True where the point is unusable

    def __post_init__(self):
        if self.mask is None:
            shape = self.values.shape[-2:]
            self.mask = np.zeros(shape, dtype=bool)

    @property
    def masked_fraction(self) -> float:
        return float(np.mean(self.mask))


# -- finite differences ------------------------------------------------------

_STENCILS = {
    1: (np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0, 2),
    2: (np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0, 2),
    3: (np.array([1.0, -8.0, 13.0, 0.0, -13.0, 8.0, -1.0]) / 8.0, 3),
    4: (np.array([-1.0, 12.0, -39.0, 56.0, -39.0, 12.0, -1.0]) / 6.0, 3),
}


def _apply_stencil(values: np.ndarray, coeffs: np.ndarray, half: int, step: int,
                   spacing: float, order: int, axis: int) -> np.ndarray:
    n = values.shape[axis]
    width = half * step
    if n <= 2 * width:
        raise InsufficientGrid("stencil exceeds grid bounds")
    out = np.zeros_like(np.take(values, range(width, n - width), axis=axis))
    for k, c in enumerate(coeffs):
        if c == 0.0:
            continue
        offset = (k - half) * step
        sl = [slice(None)] * values.ndim
        sl[axis] = slice(width + offset, n - width + offset)
        out = out + c * values[tuple(sl)]
    return out / (step * spacing) ** order


def fd_derivative(values: np.ndarray, spacing: float, order: int, axis: int = -1,
                  richardson: bool = True) -> np.ndarray:
    """4th-order central derivative, optionally with one Richardson step.

    The returned array is shorter along `axis` by the stencil width; use
    `fd_margin` to know how many points are consumed on each side.
    """
    coeffs, half = _STENCILS[order]
    d1 = _apply_stencil(values, coeffs, half, 1, spacing, order, axis)
    if not richardson:
        return d1
    d2 = _apply_stencil(values, coeffs, half, 2, spacing, order, axis)
    margin = half  # trim d1 to the d2 footprint
    sl = [slice(None)] * d1.ndim
    sl[axis] = slice(margin, d1.shape[axis] - margin)
    d1 = d1[tuple(sl)]
    return (16.0 * d1 - d2) / 15.0


def fd_margin(order: int, richardson: bool = True) -> int:
    half = _STENCILS[order][1]
    return 2 * half if richardson else half


def rolling_max(values: np.ndarray, half_window: int, axis: int = -1) -> np.ndarray:
    """Running maximum over a centered window (edge-clamped)."""
    out = np.asarray(values).copy()
    for k in range(1, half_window + 1):
        shifted = np.roll(values, k, axis=axis)
        sl = [slice(None)] * out.ndim
        sl[axis] = slice(0, k)
        shifted[tuple(sl)] = np.take(values, 0, axis=axis)[..., None] if out.ndim > 1 else values[0]
        out = np.maximum(out, shifted)
        shifted = np.roll(values, -k, axis=axis)
        sl[axis] = slice(-k, None)
        shifted[tuple(sl)] = np.take(values, -1, axis=axis)[..., None] if out.ndim > 1 else values[-1]
        out = np.maximum(out, shifted)
    return out


def dilate_mask(mask: np.ndarray, width: int, axis: int = -1) -> np.ndarray:
    """Extend True regions by `width` points along the axis."""
    return rolling_max(mask.astype(float), width, axis=axis) > 0.5


_D1_8 = np.array([3.0, -32.0, 168.0, -672.0, 0.0, 672.0, -168.0, 32.0, -3.0]) / 840.0


def fd_d1_order8(values: np.ndarray, spacing: float, axis: int = -1) -> np.ndarray:
    """8th-order first derivative on the full grid (zero-padded edges).

    Edge points are filled with the nearest interior value; callers integrate
    decaying quantities, so the affected window carries no weight.
    """
    out = np.zeros_like(values)
    n = values.shape[axis]
    if n <= 8:
        raise InsufficientGrid("grid too small for the 8th-order stencil")
    inner = _apply_stencil(values, _D1_8, 4, 1, spacing, 1, axis)
    sl = [slice(None)] * values.ndim
    sl[axis] = slice(4, n - 4)
    out[tuple(sl)] = inner
    return out


# -- residual oracle ---------------------------------------------------------

@dataclass
class ResidualReport:
    value: float
    masked_fraction: float
    pointwise: np.ndarray | None = None

    def __float__(self) -> float:
        return self.value


def _time_stencil(t: float, dt: float) -> np.ndarray:
    return t + dt * np.arange(-4, 5)


def sample_with_time_stencil(evaluate: Callable[[np.ndarray, float], np.ndarray],
                             grid: Grid, t: float, dt: float) -> np.ndarray:
    """Stack evaluations on the 9-slice time stencil around t: shape (9, nx)."""
    x = grid.x
    return np.stack([np.asarray(evaluate(x, tk)) for tk in _time_stencil(t, dt)])


def normalized_residual(term_arrays: Sequence[np.ndarray], mask: np.ndarray | None = None) -> ResidualReport:
    """max over unmasked points of |sum of terms| / (1 + max |term|)."""
    total = sum(term_arrays)
    scale = np.max(np.stack([np.abs(tm) for tm in term_arrays]), axis=0)
    point = np.abs(total) / (1.0 + scale)
    if mask is not None:
        point = np.where(mask, 0.0, point)
        frac = float(np.mean(mask))
    else:
        frac = 0.0
    return ResidualReport(float(np.max(point)), frac, point)


class DerivativeTable:
    """Finite-difference x/t derivatives of one field on a time-stencil sample.

    `u(dx, dt)` returns the derivative trimmed to a common interior footprint
    of `x_margin` points per side, so different orders can be combined.
    """

    def __init__(self, stacked: np.ndarray, h: float, dt: float,
                 x_margin: int = 6, mask: np.ndarray | None = None):
        self.stacked = stacked
        self.h = h
        self.dt = dt
        self.x_margin = x_margin
        nx = stacked.shape[-1]
        self._sl = slice(x_margin, nx - x_margin)
        self.mask = None if mask is None else np.asarray(mask)[..., self._sl]
        self._cache: dict[tuple[int, int], np.ndarray] = {}

    def u(self, dx_order: int = 0, dt_order: int = 0) -> np.ndarray:
        key = (dx_order, dt_order)
        if key in self._cache:
            return self._cache[key]
        arr = self.stacked
        if dt_order:
            arr = fd_derivative(arr, self.dt, dt_order, axis=0)[0]
        else:
            arr = arr[arr.shape[0] // 2]
        if dx_order:
            pad = self.x_margin - fd_margin(dx_order)
            if pad < 0:
                raise InsufficientGrid("x margin too small for this derivative order")
            arr = fd_derivative(arr, self.h, dx_order, axis=-1)
            if pad:
                arr = arr[..., pad: arr.shape[-1] - pad]
        else:
            arr = arr[..., self._sl]
        self._cache[key] = arr
        return arr


def derivative_table(evaluate: Callable[[np.ndarray, float], np.ndarray], grid: Grid,
                     t: float, dt: float = 2e-3, mask: np.ndarray | None = None) -> DerivativeTable:
    stacked = sample_with_time_stencil(evaluate, grid, t, dt)
    return DerivativeTable(stacked, grid.h, dt, mask=mask)


# -- governing equations ------------------------------------------------------

def kdv_residual_terms(d: DerivativeTable) -> list[np.ndarray]:
    u = d.u()
    return [d.u(0, 1), 6.0 * u * d.u(1), d.u(3)]


def mkdv_residual_terms(d: DerivativeTable) -> list[np.ndarray]:
    v = d.u()
    return [d.u(0, 1), 24.0 * v * v * d.u(1), d.u(3)]


def sg_residual_terms(d: DerivativeTable) -> list[np.ndarray]:
    return [d.u(1, 1), -np.sin(d.u())]


def hirota_residual_terms(d: DerivativeTable, alpha: float, beta: float,
                          kappa: float = -1.0) -> list[np.ndarray]:
    q = d.u()
    qa = np.abs(q) ** 2
    return [1j * d.u(0, 1),
            alpha * (d.u(2) - 2.0 * kappa * qa * q),
            1j * beta * (d.u(3) - 6.0 * kappa * qa * d.u(1))]


def akns_pair_residual_terms(dq: DerivativeTable, dr: DerivativeTable,
                             alpha: complex, beta: complex) -> tuple[list[np.ndarray], list[np.ndarray]]:
    q, r = dq.u(), dr.u()
    eq1 = [dq.u(0, 1), -1j * alpha * dq.u(2), 2j * alpha * q * q * r,
           beta * (dq.u(3) - 6.0 * q * r * dq.u(1))]
    eq2 = [dr.u(0, 1), 1j * alpha * dr.u(2), -2j * alpha * q * r * r,
           beta * (dr.u(3) - 6.0 * q * r * dr.u(1))]
    return eq1, eq2


def tdse_residual_terms(d: DerivativeTable, potential: np.ndarray,
                        kinetic: float | np.ndarray = 1.0) -> list[np.ndarray]:
    """i psi_t - (-kinetic * psi_xx + V * psi)."""
    return [1j * d.u(0, 1), np.asarray(kinetic) * d.u(2), -potential * d.u()]


EQUATIONS = {
    "kdv": kdv_residual_terms,
    "mkdv": mkdv_residual_terms,
    "sg": sg_residual_terms,
}


def pde_residual(evaluate: Callable[[np.ndarray, float], np.ndarray], equation: str,
                 grid: Grid, mask_fn: Callable[[np.ndarray, float], np.ndarray] | None = None,
                 dt: float = 2e-3, **kwargs) -> ResidualReport:
    """Normalized sup-norm residual of a governing PDE over the grid times."""
    if equation in EQUATIONS:
        terms_fn = EQUATIONS[equation]
    elif equation == "hirota":
        terms_fn = lambda d: hirota_residual_terms(d, **kwargs)
    else:
        raise ValueError(f"unknown equation {equation!r}")
    worst = ResidualReport(0.0, 0.0)
    for t in grid.t_values:
        d = derivative_table(evaluate, grid, t, dt=dt)
        terms = terms_fn(d)
        n = min(tm.shape[-1] for tm in terms)
        terms = [tm[..., (tm.shape[-1] - n) // 2: (tm.shape[-1] - n) // 2 + n] for tm in terms]
        mask = None
        if mask_fn is not None:
            full = dilate_mask(np.asarray(mask_fn(grid.x, t)), 32)
            lo = (full.shape[-1] - n) // 2
            mask = full[..., lo: lo + n]
        rep = normalized_residual(terms, mask)
        if rep.value > worst.value:
            worst = rep
    return worst


# -- quadrature ---------------------------------------------------------------

def simpson(y: np.ndarray, h: float, axis: int = -1) -> np.ndarray | complex:
    """Composite Simpson rule on a uniform grid (odd point count preferred)."""
    n = y.shape[axis]
    y = np.moveaxis(y, axis, -1)
    if n < 3:
        raise ValueError("need at least three samples")
    if n % 2 == 0:  # Simpson 3/8 on the final three intervals
        core = simpson(y[..., :-3], h, axis=-1) if n > 4 else 0.0
        tail = (3.0 * h / 8.0) * (y[..., -4] + 3.0 * y[..., -3] + 3.0 * y[..., -2] + y[..., -1])
        return core + tail
    weights = np.ones(n)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    return np.tensordot(y, weights, axes=([-1], [0])) * (h / 3.0)


def quadrature(samples: FieldSamples, t_index: int = 0, tail_tol: float = 1e-8):
    """Integrate one time slice over the grid, reporting the tail estimate."""
    y = samples.values[..., t_index, :] if samples.values.ndim == 3 else samples.values[t_index]
    mask = samples.mask[t_index] if samples.mask.ndim == 2 else samples.mask
    y = np.where(mask, 0.0, y)
    h = samples.grid.h
    tail = tail_estimate(y, h)
    if tail > tail_tol:
        raise NonDecaying(f"tail estimate {tail:.3g} exceeds budget {tail_tol:.3g}")
    return simpson(y, h)


def tail_estimate(y: np.ndarray, h: float) -> float:
    """Crude bound on the mass outside the grid from the edge decay rate."""
    edge = max(np.max(np.abs(y[..., :3])), np.max(np.abs(y[..., -3:])))
    if edge == 0.0 or edge < 1e-12 * np.max(np.abs(y)):
        return 0.0  # edge already at the evaluation noise floor
    inner = max(np.max(np.abs(y[..., 3:6])), np.max(np.abs(y[..., -6:-3])))
    if inner <= edge:  # not decaying at the boundary
        return float(edge * 1e6)
    rate = np.log(inner / edge) / (3 * h)
    return float(edge / rate)


def integrate_profile(y: np.ndarray, h: float, tail_tol: float = 1e-8):
    tail = tail_estimate(y, h)
    if tail > tail_tol:
        raise NonDecaying(f"tail estimate {tail:.3g} exceeds budget {tail_tol:.3g}")
    return simpson(y, h)


# -- peak tracking -------------------------------------------------------------

def _local_maxima(y: np.ndarray, prominence: float) -> np.ndarray:
    interior = (y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:])
    idx = np.flatnonzero(interior) + 1
    if idx.size == 0:
        return idx
    floor = y.max() * prominence
    return idx[y[idx] >= floor]


def refine_peak(x: np.ndarray, y: np.ndarray, i: int) -> tuple[float, float]:
    """Quadratic interpolation through (i-1, i, i+1)."""
    if i <= 0 or i >= len(x) - 1:
        return float(x[i]), float(y[i])
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0:
        return float(x[i]), float(y[i])
    delta = 0.5 * (y0 - y2) / denom
    h = x[1] - x[0]
    xp = x[i] + delta * h
    yp = y1 - 0.25 * (y0 - y2) * delta
    return float(xp), float(yp)


def track_peak(samples: FieldSamples, t_index: int = 0, side: str = "global",
               reduce: Callable[[np.ndarray], np.ndarray] = np.abs,
               prominence: float = 0.1) -> tuple[float, float]:
    """Locate a peak of reduce(values) at one time slice, refined quadratically.

    side: 'global' for the argmax, 'left'/'right' for the outermost local
    maximum above the prominence floor.
    """
    vals = samples.values[t_index] if samples.values.ndim == 2 else samples.values
    y = np.asarray(reduce(vals), dtype=float)
    mask = samples.mask[t_index] if samples.mask.ndim == 2 else samples.mask
    y = np.where(mask, -np.inf, y)
    x = samples.grid.x
    if not np.any(np.isfinite(y)):
        raise NoPeak("all samples masked")
    if side == "global":
        i = int(np.argmax(y))
    else:
        idx = _local_maxima(np.where(np.isfinite(y), y, -np.inf), prominence)
        if idx.size == 0:
            raise NoPeak("no unmasked local maximum")
        i = int(idx[0]) if side == "left" else int(idx[-1])
    return refine_peak(x, np.where(np.isfinite(y), y, y[np.isfinite(y)].min()), i)


def local_maxima_positions(samples: FieldSamples, t_index: int = 0,
                           reduce: Callable[[np.ndarray], np.ndarray] = np.abs,
                           prominence: float = 0.1) -> list[tuple[float, float]]:
    vals = samples.values[t_index] if samples.values.ndim == 2 else samples.values
    y = np.asarray(reduce(vals), dtype=float)
    x = samples.grid.x
    idx = _local_maxima(y, prominence)
    if idx.size == 0:
        raise NoPeak("no local maxima")
    return [refine_peak(x, y, int(i)) for i in idx]
