"""Cayley-algebra laws, PT maps and representation conversions."""
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from solitonlab.algebra import (
    ALGEBRAS, BICOMPLEX, COMPLEX, COQUATERNION, HYPERBOLIC, OCTONION, QUATERNION, REAL,
    ComplexRep, MCNumber, basis, complex_rep, from_idempotent, hyperbolic_exp,
    hyperbolic_polar, mul, pt_map, to_idempotent,
)
from solitonlab.errors import AlgebraMismatch, DegenerateImaginary, LightCone, UnsupportedSymmetry

RNG = np.random.default_rng(7)


def random_number(alg, rng=RNG):
    return MCNumber(alg, rng.normal(size=alg.dim))


# ---------------------------------------------------------------- table laws

@pytest.mark.parametrize("tag", list(ALGEBRAS))
def test_identity_element(tag):
    alg = ALGEBRAS[tag]
    x = random_number(alg)
    assert mul(alg.unit(0), x).allclose(x)
    assert mul(x, alg.unit(0)).allclose(x)


@pytest.mark.parametrize("tag", list(ALGEBRAS))
def test_distributivity_exhaustive_on_basis(tag):
    alg = ALGEBRAS[tag]
    c = random_number(alg)
    for a in basis(alg):
        for b in basis(alg):
            left = mul(a + b, c)
            right = mul(a, c) + mul(b, c)
            assert left.allclose(right, tol=1e-12)
            left = mul(c, a + b)
            right = mul(c, a) + mul(c, b)
            assert left.allclose(right, tol=1e-12)


def test_bicomplex_cayley_table():
    one, i, j, k = basis(BICOMPLEX)
    assert mul(i, i) == -one and mul(j, j) == -one and mul(k, k) == one
    assert mul(i, j) == k and mul(j, i) == k
    assert mul(i, k) == -j and mul(k, i) == -j
    assert mul(j, k) == -i and mul(k, j) == -i


def test_quaternion_cayley_table():
    one, i, j, k = basis(QUATERNION)
    assert mul(i, i) == -one and mul(j, j) == -one and mul(k, k) == -one
    assert mul(i, j) == k and mul(j, i) == -k
    assert mul(j, k) == i and mul(k, j) == -i
    assert mul(k, i) == j and mul(i, k) == -j


def test_coquaternion_cayley_table():
    one, i, j, k = basis(COQUATERNION)
    assert mul(i, i) == -one and mul(j, j) == one and mul(k, k) == one
    assert mul(i, j) == k and mul(j, i) == -k
    assert mul(j, k) == -i and mul(k, j) == i
    assert mul(k, i) == j and mul(i, k) == -j


def test_octonion_table_snapshot():
    # the full signed 8x8 table, transcribed entry by entry
    rows = [
        ["+0", "+1", "+2", "+3", "+4", "+5", "+6", "+7"],
        ["+1", "-0", "+3", "-2", "+5", "-4", "-7", "+6"],
        ["+2", "-3", "-0", "+1", "+6", "+7", "-4", "-5"],
        ["+3", "+2", "-1", "-0", "+7", "-6", "+5", "-4"],
        ["+4", "-5", "-6", "-7", "-0", "+1", "+2", "+3"],
        ["+5", "+4", "-7", "+6", "-1", "-0", "-3", "+2"],
        ["+6", "+7", "+4", "-5", "-2", "+3", "-0", "-1"],
        ["+7", "-6", "+5", "+4", "-3", "-2", "+1", "-0"],
    ]
    e = basis(OCTONION)
    for a in range(8):
        for b in range(8):
            entry = rows[a][b]
            sign = 1.0 if entry[0] == "+" else -1.0
            target = sign * e[int(entry[1])]
            assert mul(e[a], e[b]) == target, (a, b)


@pytest.mark.parametrize("tag", ["Quaternion", "Coquaternion"])
def test_associativity_exhaustive_on_basis(tag):
    alg = ALGEBRAS[tag]
    for a in basis(alg):
        for b in basis(alg):
            for c in basis(alg):
                assert mul(mul(a, b), c) == mul(a, mul(b, c))


def test_octonion_alternative_but_not_associative():
    for _ in range(20):
        x = random_number(OCTONION)
        y = random_number(OCTONION)
        assert mul(mul(x, x), y).allclose(mul(x, mul(x, y)), tol=1e-10)
        assert mul(y, mul(x, x)).allclose(mul(mul(y, x), x), tol=1e-10)
    e = basis(OCTONION)
    associator = mul(mul(e[1], e[2]), e[4]) - mul(e[1], mul(e[2], e[4]))
    assert associator.norm_sq > 1.0  # nonzero witness


def test_mixed_algebra_raises():
    with pytest.raises(AlgebraMismatch):
        mul(random_number(QUATERNION), random_number(BICOMPLEX))


# ---------------------------------------------------------------- PT maps

def test_pt_ij_signs():
    n = MCNumber(BICOMPLEX, (1.0, 2.0, 3.0, 4.0))
    assert pt_map("PT_ij", n) == MCNumber(BICOMPLEX, (1.0, -2.0, -3.0, 4.0))


@pytest.mark.parametrize("kind,tag", [
    ("PT_ij", "Bicomplex"), ("PT_ik", "Bicomplex"), ("PT_jk", "Bicomplex"),
    ("PT_ij", "Quaternion"), ("PT_full", "Quaternion"),
    ("PT_full", "Octonion"), ("PT_full", "Complex"), ("PT_full", "Hyperbolic"),
])
def test_pt_is_involution(kind, tag):
    alg = ALGEBRAS[tag]
    n = random_number(alg)
    assert pt_map(kind, pt_map(kind, n)).allclose(n)


@pytest.mark.parametrize("kind", ["PT_ij", "PT_ik", "PT_jk"])
@pytest.mark.parametrize("tag", ["Bicomplex", "Quaternion", "Coquaternion"])
def test_pt_preserves_cayley_table(kind, tag):
    alg = ALGEBRAS[tag]
    for a in basis(alg):
        for b in basis(alg):
            assert pt_map(kind, mul(a, b)) == mul(pt_map(kind, a), pt_map(kind, b))


def test_pt_invalid_combinations():
    with pytest.raises(UnsupportedSymmetry):
        pt_map("PT_ij", MCNumber(REAL, (1.0,)))
    with pytest.raises(UnsupportedSymmetry):
        pt_map("PT_ij", MCNumber(COMPLEX, (1.0, 0.0)))
    with pytest.raises(UnsupportedSymmetry):
        pt_map("PT_full", MCNumber(REAL, (1.0,)))


# ---------------------------------------------------------------- idempotent

def test_idempotent_units():
    one, _, _, k = basis(BICOMPLEX)
    e1 = 0.5 * (one + k)
    e2 = 0.5 * (one - k)
    assert mul(e1, e1) == e1
    assert mul(e2, e2) == e2
    assert mul(e1, e2).allclose(MCNumber(BICOMPLEX, (0, 0, 0, 0)))
    assert (e1 + e2) == one


def test_idempotent_worked_example():
    p = to_idempotent(MCNumber(BICOMPLEX, (1, 2, 3, 4)))
    assert p.v1 == 5 - 1j and p.v2 == -3 + 5j
    assert to_idempotent(MCNumber(BICOMPLEX, (1, 0, 0, 0))) == (
        to_idempotent(BICOMPLEX.from_scalar(1.0)))
    assert to_idempotent(BICOMPLEX.from_scalar(1.0)).v1 == 1.0 + 0j


@given(st.lists(st.floats(-1e3, 1e3), min_size=4, max_size=4))
def test_idempotent_round_trip(coeffs):
    n = MCNumber(BICOMPLEX, coeffs)
    assert from_idempotent(to_idempotent(n)).allclose(n, tol=1e-9)


def test_idempotent_multiplication_is_componentwise():
    for _ in range(100):
        a = random_number(BICOMPLEX)
        b = random_number(BICOMPLEX)
        pa, pb = to_idempotent(a), to_idempotent(b)
        prod = to_idempotent(mul(a, b))
        assert abs(prod.v1 - pa.v1 * pb.v1) < 1e-12
        assert abs(prod.v2 - pa.v2 * pb.v2) < 1e-12


# ---------------------------------------------------------------- complex rep

def test_quaternion_complex_rep_example():
    rep = complex_rep(MCNumber(QUATERNION, (1.0, 1.0, 1.0, 1.0)))
    assert rep.real_part == 1.0
    assert abs(rep.imag_magnitude - math.sqrt(3)) < 1e-15
    expected = (0.0,) + (1 / math.sqrt(3),) * 3
    assert np.allclose(rep.unit_direction, expected)


@pytest.mark.parametrize("tag", ["Quaternion", "Octonion"])
def test_direction_squares_to_minus_one(tag):
    alg = ALGEBRAS[tag]
    for _ in range(50):
        n = random_number(alg)
        rep = complex_rep(n)
        xi = MCNumber(alg, rep.unit_direction)
        assert mul(xi, xi).allclose(-alg.unit(0), tol=1e-12)


def test_coquaternion_direction_and_degenerate_boundary():
    n = MCNumber(COQUATERNION, (0.5, 2.0, 1.0, 0.5))
    rep = complex_rep(n)
    zeta = MCNumber(COQUATERNION, rep.unit_direction)
    assert mul(zeta, zeta).allclose(-COQUATERNION.unit(0), tol=1e-12)
    with pytest.raises(DegenerateImaginary):
        complex_rep(MCNumber(COQUATERNION, (0.3, 1.0, 1.0, 0.0)))


# ---------------------------------------------------------------- hyperbolic

def test_hyperbolic_polar_basics():
    assert hyperbolic_polar(MCNumber(HYPERBOLIC, (1.0, 0.0))) == (1.0, 0.0)
    w = MCNumber(HYPERBOLIC, (math.cosh(0.7), math.sinh(0.7)))
    rho, phi = hyperbolic_polar(w)
    assert abs(rho - 1.0) < 1e-14 and abs(phi - 0.7) < 1e-14
    rebuilt = rho * hyperbolic_exp(phi)
    assert rebuilt.allclose(w, tol=1e-14)
    with pytest.raises(LightCone):
        hyperbolic_polar(MCNumber(HYPERBOLIC, (1.0, 1.0)))


def test_hyperbolic_rotation_is_lorentz_boost():
    c, v = 1.0, 0.6
    gamma = 1.0 / math.sqrt(1 - v * v / (c * c))
    x, t = 1.3, 0.8
    zeta = MCNumber(HYPERBOLIC, (c * t, x))  # c*t + k*x
    phi = math.atanh(v / c)
    rotated = mul(zeta, hyperbolic_exp(-phi))
    t_prime = rotated.coeffs[0] / c
    x_prime = rotated.coeffs[1]
    assert abs(x_prime - gamma * (x - v * t)) < 1e-12
    assert abs(t_prime - gamma * (t - v * x / c ** 2)) < 1e-12
