"""Finite-difference residual oracle, quadrature and peak tracking."""
import numpy as np
import pytest

from solitonlab.errors import InsufficientGrid, NoPeak, NonDecaying
from solitonlab.exppoly import exp_seed
from solitonlab.fields import ExpRationalField, log2_from_tau
from solitonlab.numerics import (
    FieldSamples, Grid, default_grid, fd_derivative, integrate_profile, pde_residual,
    quadrature, simpson, track_peak,
)


def kdv_one_soliton(beta=1.0, mu=0.0):
    tau = 1.0 + exp_seed(beta, -beta ** 3, mu)
    return log2_from_tau(tau)


def test_grid_invariants():
    with pytest.raises(ValueError):
        Grid(0.0, -1.0, 100)
    with pytest.raises(ValueError):
        Grid(0.0, 1.0, 8)
    g = default_grid()
    assert abs(g.h - 0.02) < 1e-15


def test_fd_derivative_accuracy():
    x = np.linspace(-1, 1, 401)
    h = x[1] - x[0]
    y = np.sin(3 * x)
    d3 = fd_derivative(y, h, 3)
    lo = (len(x) - len(d3)) // 2
    assert np.max(np.abs(d3 + 27 * np.cos(3 * x[lo:lo + len(d3)]))) < 5e-8


def test_fd_insufficient_grid():
    with pytest.raises(InsufficientGrid):
        fd_derivative(np.ones(5), 0.1, 3)


def test_residual_exact_kdv_soliton():
    u = kdv_one_soliton()
    grid = default_grid(t_values=(0.0, 1.0))
    rep = pde_residual(lambda x, t: u(x, t), "kdv", grid)
    assert rep.value < 1e-6


def test_residual_zero_field():
    grid = default_grid()
    rep = pde_residual(lambda x, t: np.zeros_like(x, dtype=complex), "kdv", grid)
    assert rep.value == 0.0


def test_residual_detects_perturbation():
    u = kdv_one_soliton()
    grid = default_grid()
    rep = pde_residual(lambda x, t: 1.01 * u(x, t), "kdv", grid)
    assert rep.value > 1e-3


def test_quadrature_gaussian():
    grid = Grid(-10, 10, 2001)
    y = np.exp(-grid.x ** 2)[None, :]
    s = FieldSamples(grid, y)
    val = quadrature(s)
    assert abs(val - np.sqrt(np.pi)) < 1e-10


def test_quadrature_sech_squared():
    grid = Grid(-40, 40, 4001)
    y = (0.5 / np.cosh(grid.x / 2) ** 2)[None, :]
    val = quadrature(FieldSamples(grid, y))
    assert abs(val - 2.0) < 1e-8


def test_quadrature_zero_and_kdv_mass():
    grid = Grid(-40, 40, 4001)
    assert quadrature(FieldSamples(grid, np.zeros((1, grid.nx)))) == 0.0
    u = kdv_one_soliton(beta=1.0)
    mass = quadrature(u.sample(grid.with_times((0.0,))))
    assert abs(mass - 2.0) < 1e-8


def test_quadrature_non_decaying():
    grid = Grid(-10, 10, 201)
    with pytest.raises(NonDecaying):
        quadrature(FieldSamples(grid, np.ones((1, grid.nx))))


def test_simpson_even_point_count():
    x = np.linspace(0, 1, 100)
    assert abs(simpson(np.exp(x), x[1] - x[0]) - (np.e - 1)) < 1e-8


def test_track_peak_single_soliton():
    u = kdv_one_soliton(beta=1.0)
    grid = default_grid(t_values=(0.0,))
    x_peak, value = track_peak(u.sample(grid), reduce=lambda v: np.real(v))
    assert abs(x_peak) < 1e-4
    assert abs(value - 0.5) < 1e-6


def test_track_peak_refinement_accuracy():
    grid = Grid(-20, 20, 801)  # coarse grid, off-node maximum
    y = (1.0 / np.cosh(grid.x - 0.3142) ** 2)[None, :]
    x_peak, _ = track_peak(FieldSamples(grid, y))
    assert abs(x_peak - 0.3142) < 1e-4


def test_track_peak_symmetric_field_and_no_peak():
    grid = Grid(-20, 20, 801)
    y = (1.0 / np.cosh(grid.x) ** 2)[None, :]
    assert abs(track_peak(FieldSamples(grid, y))[0]) < 1e-10
    rising = np.exp(grid.x)[None, :]
    with pytest.raises(NoPeak):
        track_peak(FieldSamples(grid, rising), side="left")


def test_integrate_profile_tail_guard():
    grid = Grid(-10, 10, 501)
    with pytest.raises(NonDecaying):
        integrate_profile(np.cosh(grid.x * 0.0) + 1.0, grid.h)
