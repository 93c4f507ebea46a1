"""Jacobi elliptic functions and elliptic integrals.

sn/cn/dn/am are evaluated with the descending arithmetic-geometric-mean
(Landen) recursion; K via the AGM, E by quadrature.  Parameter convention is
m = k^2 throughout.
"""
from __future__ import annotations

import numpy as np

_AGM_TOL = 1e-15
_MAX_LEVELS = 12


def agm(a: float, b: float) -> float:
    while abs(a - b) > _AGM_TOL * abs(a):
        a, b = 0.5 * (a + b), np.sqrt(a * b)
    return 0.5 * (a + b)


def elliptic_K(m: float) -> float:
    """Complete elliptic integral of the first kind, K(m) with m = k^2."""
    if m < 0 or m >= 1:
        raise ValueError("m must lie in [0, 1)")
    return float(np.pi / (2.0 * agm(1.0, np.sqrt(1.0 - m))))


def elliptic_E_inc(phi, m: float):
    """Incomplete elliptic integral of the second kind E(phi, m) by quadrature."""
    phi = np.asarray(phi, dtype=float)
    n = 2001
    theta = np.linspace(0.0, 1.0, n)[:, None] * phi.reshape(1, -1)
    integrand = np.sqrt(np.clip(1.0 - m * np.sin(theta) ** 2, 0.0, None))
    weights = np.ones(n)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    h = phi.reshape(-1) / (n - 1)
    out = (weights @ integrand) * h / 3.0
    return out.reshape(phi.shape) if phi.shape else float(out[0])


def elliptic_E(m: float) -> float:
    """Complete elliptic integral of the second kind."""
    return float(elliptic_E_inc(np.pi / 2.0, m))


def _sn_cn_dn_core(u: np.ndarray, m: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Descending Landen/AGM evaluation for array u, scalar m in [0, 1]."""
    if m == 0.0:
        return np.sin(u), np.cos(u), np.ones_like(u)
    if m == 1.0:
        sech = 1.0 / np.cosh(u)
        return np.tanh(u), sech, sech
    a = [1.0]
    b = [np.sqrt(1.0 - m)]
    c = [np.sqrt(m)]
    while abs(c[-1]) > _AGM_TOL and len(a) < _MAX_LEVELS:
        an, bn = a[-1], b[-1]
        a.append(0.5 * (an + bn))
        b.append(np.sqrt(an * bn))
        c.append(0.5 * (an - bn))
    n = len(a) - 1
    phi = (2.0 ** n) * a[n] * u
    for k in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(np.clip(c[k] / a[k] * np.sin(phi), -1.0, 1.0)))
    sn = np.sin(phi)
    cn = np.cos(phi)
    dn = np.sqrt(np.clip(1.0 - m * sn ** 2, 0.0, None))
    return sn, cn, dn


def jacobi_elliptic(u, m: float) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(sn, cn, dn, am) at real u for parameter m in [0, 1].

    am is returned continuous (unwrapped across quarter periods).
    """
    if not 0.0 <= m <= 1.0:
        raise ValueError("m must lie in [0, 1]")
    u = np.asarray(u, dtype=float)
    if m == 1.0:
        sn, cn, dn = _sn_cn_dn_core(u, m)
        return sn, cn, dn, np.arcsin(np.tanh(u))
    K = elliptic_K(m) if m > 0 else np.pi / 2.0
    # reduce to the fundamental band [-K, K] where am = arcsin(sn)
    cycles = np.floor((u + K) / (2.0 * K))
    ur = u - 2.0 * K * cycles
    sn_r, cn_r, dn_r = _sn_cn_dn_core(ur, m)
    parity = 1.0 - 2.0 * (np.asarray(cycles, dtype=int) % 2)  # sn, cn flip sign each half period
    sn = parity * sn_r
    cn = parity * cn_r
    dn = dn_r
    am = cycles * np.pi + np.arcsin(np.clip(sn_r, -1.0, 1.0))
    return sn, cn, dn, am
