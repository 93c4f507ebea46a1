"""Exact exponential-polynomial calculus: derivatives, Wronskians, parameters."""
import numpy as np
import pytest

from solitonlab.errors import NonPolynomialParameter, SingularWronskian
from solitonlab.exppoly import (
    ExpPoly, Laurent, cosh_seed, exp_seed, jordan_seeds, kdv_schroedinger_seed,
    log_wronskian_dx2, param_cosh_seed, param_diff, param_exp_seed, wronskian,
)

RNG = np.random.default_rng(11)


def fd_param(fn, s, h=1e-5):
    return (fn(s - 2 * h) - 8 * fn(s - h) + 8 * fn(s + h) - fn(s + 2 * h)) / (12 * h)


def test_basic_derivatives():
    f = exp_seed(0.7, -0.343)  # e^{0.7 x - 0.343 t}
    assert np.allclose(f.diff("x")(1.3, 0.2), 0.7 * f(1.3, 0.2))
    assert np.allclose(f.diff("t")(1.3, 0.2), -0.343 * f(1.3, 0.2))


def test_cancellation_gives_empty_expression():
    f = exp_seed(1.0, 2.0) + ExpPoly.term(3.0, px=2)
    g = f - f
    assert g.is_zero


def test_product_and_polynomial_powers():
    f = ExpPoly.term(1.0, px=1) * ExpPoly.term(2.0, px=2, a=1.0)
    ((px, pt, a, b), c), = f.terms.items()
    assert (px, pt, a, b, c) == (3, 0, 1.0 + 0j, 0j, 2.0 + 0j)


def test_conjugate_and_reflect():
    f = ExpPoly.term(1 + 2j, px=1, a=0.5 + 0.3j, b=-1j)
    x, t = 0.37, -0.8
    assert np.allclose(f.conjugate()(x, t), np.conj(f(x, t)))
    assert np.allclose(f.reflect(x=True)(x, t), f(-x, t))
    assert np.allclose(f.reflect(t=True)(x, t), f(x, -t))


def test_param_diff_exponential_prefactor():
    # d/ds of e^{(s x - s^3 t)/2} = (x - 3 s^2 t)/2 * e^{...}
    a = Laurent({1: 0.5})
    b = Laurent({3: -0.5})
    seed = param_exp_seed(a, b)
    d = param_diff(seed, 1, 0.9)
    x, t = 1.1, 0.4
    base = np.exp(0.5 * (0.9 * x - 0.9 ** 3 * t))
    assert np.allclose(d(x, t), 0.5 * (x - 3 * 0.9 ** 2 * t) * base)


@pytest.mark.parametrize("order", [1, 2, 3])
def test_param_diff_matches_finite_difference(order):
    seed = kdv_schroedinger_seed(mu=0.3 + 0.2j)
    pts = [(-1.2, 0.3), (0.0, 0.0), (2.1, -0.7), (0.5, 1.5), (-3.0, 0.1)]
    for x, t in pts:
        def fn(s, x=x, t=t, k=order - 1):
            return param_diff(seed, k, s)(x, t)
        exact = param_diff(seed, order, 0.8)(x, t)
        approx = fd_param(fn, 0.8)
        assert abs(exact - approx) < 1e-8 * max(1.0, abs(exact))


def test_param_and_space_derivatives_commute():
    seed = kdv_schroedinger_seed(mu=0.1j)
    a = seed.diff_param().diff_x().at(0.7)
    b = seed.diff_x().diff_param().at(0.7)
    x = np.linspace(-2, 2, 7)
    assert np.allclose(a(x, 0.3), b(x, 0.3))


def test_laurent_exponent_must_be_integer():
    with pytest.raises(NonPolynomialParameter):
        Laurent({0.5: 1.0})


def test_wronskian_basics():
    f = cosh_seed(0.5, -0.125)
    assert np.allclose(wronskian([f], (0.3, 0.1)), f(0.3, 0.1))
    w = wronskian([exp_seed(1.0, 0.0), exp_seed(2.0, 0.0)], (0.0, 0.0))
    assert abs(w - 1.0) < 1e-14


def test_wronskian_antisymmetry():
    f = exp_seed(0.9, -0.2)
    g = cosh_seed(0.55, -0.3, 0.2)
    w_fg = wronskian([f, g], (0.7, -0.3))
    w_gf = wronskian([g, f], (0.7, -0.3))
    assert abs(w_fg + w_gf) < 1e-12 * abs(w_fg)


def test_singular_wronskian_guard():
    f = exp_seed(1.0, 0.0)
    with pytest.raises(SingularWronskian):
        wronskian([f, f], (0.0, 0.0))


def test_log_wronskian_dx2_against_fd():
    fs = [cosh_seed(0.55, -0.55 ** 3 / 4, 0.1), cosh_seed(0.4, -0.4 ** 3 / 4, -0.2)]
    x0, t0 = 0.9, 0.35
    exact = log_wronskian_dx2(fs, (x0, t0))
    h = 1e-3
    samples = [np.log(np.abs(wronskian(fs, (x0 + k * h, t0)))) for k in range(-2, 3)]
    fd = (-samples[0] + 16 * samples[1] - 30 * samples[2] + 16 * samples[3] - samples[4]) / (12 * h * h)
    assert abs(exact - fd) < 1e-6


def test_jordan_seed_tower_sizes():
    seeds = jordan_seeds(kdv_schroedinger_seed(0.5j), 4, 1.0)
    assert len(seeds) == 4
    # successive parameter derivatives acquire one more polynomial power
    max_px = [max(k[0] for k in s.terms) for s in seeds]
    assert max_px == [0, 1, 2, 3]
