"""Jacobi elliptic functions: identities, limits, and an independent oracle."""
import numpy as np
import pytest
from scipy import special

from solitonlab.elliptic import elliptic_E, elliptic_E_inc, elliptic_K, jacobi_elliptic

RNG = np.random.default_rng(3)


def test_K_degenerate_value():
    assert abs(elliptic_K(0.0) - np.pi / 2) < 1e-15


def test_K_against_scipy():
    for m in (0.1, 0.5, 0.9, 0.999):
        assert abs(elliptic_K(m) - special.ellipk(m)) < 1e-12


def test_E_against_scipy():
    for m in (0.0, 0.3, 0.8):
        assert abs(elliptic_E(m) - special.ellipe(m)) < 1e-10
    # incomplete, against scipy's ellipeinc
    assert abs(elliptic_E_inc(1.1, 0.4) - special.ellipeinc(1.1, 0.4)) < 1e-10


@pytest.mark.parametrize("u", [0.3, 1.0])
def test_m_to_one_closed_forms(u):
    sn, cn, dn, _ = jacobi_elliptic(u, 1.0)
    assert abs(sn - np.tanh(u)) < 1e-10
    assert abs(dn - 1.0 / np.cosh(u)) < 1e-10


def test_identity_suite_random():
    u = RNG.uniform(-8, 8, size=100)
    m = RNG.uniform(0, 1, size=100)
    for ui, mi in zip(u, m):
        sn, cn, dn, _ = jacobi_elliptic(ui, float(mi))
        assert abs(sn ** 2 + cn ** 2 - 1.0) < 1e-12
        assert abs(dn ** 2 + mi * sn ** 2 - 1.0) < 1e-12


def test_against_scipy_ellipj():
    u = np.linspace(-6, 6, 41)
    for m in (0.2, 0.7, 0.95):
        sn, cn, dn, _ = jacobi_elliptic(u, m)
        s2, c2, d2, _ = special.ellipj(u, m)
        assert np.max(np.abs(sn - s2)) < 1e-9
        assert np.max(np.abs(cn - c2)) < 1e-9
        assert np.max(np.abs(dn - d2)) < 1e-9


def test_amplitude_is_continuous_and_consistent():
    u = np.linspace(-15, 15, 2001)
    m = 0.6
    sn, _, _, am = jacobi_elliptic(u, m)
    assert np.max(np.abs(np.sin(am) - sn)) < 1e-10
    assert np.max(np.abs(np.diff(am))) < 0.1  # no branch jumps
