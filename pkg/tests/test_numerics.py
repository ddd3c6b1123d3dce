import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from gardner_hierarchy.diffpoly import DiffPoly
from gardner_hierarchy.numerics import (
    CompiledPoly,
    Grid,
    GridFunction,
    GridMismatch,
    derivative_jets,
    quadrature,
    sobolev_norm,
    spectral_derivative,
    write_csv,
)

from strategies import polys

GRID = Grid(20.0, 512)
GAUSS = GridFunction(GRID, np.exp(-GRID.x**2))


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid(1.0, 100)
    with pytest.raises(ValueError):
        Grid(0.0, 64)
    assert GRID.x[0] == -20.0 and GRID.x.size == 512
    assert GRID.xi_max == pytest.approx(math.pi / GRID.h)


def test_gridfunction_guards():
    with pytest.raises(ValueError):
        GridFunction(GRID, np.zeros(3))
    with pytest.raises(ValueError):
        GridFunction(GRID, np.full(512, np.nan))
    with pytest.raises(GridMismatch):
        GAUSS + GridFunction(Grid(10.0, 512), np.zeros(512))


def test_spectral_derivatives_of_gaussian():
    x = GRID.x
    g = np.exp(-x**2)
    exact = [g, -2 * x * g, (4 * x**2 - 2) * g, (-8 * x**3 + 12 * x) * g]
    jets = derivative_jets(GAUSS, 3)
    for j in range(4):
        # round-off grows with xi_max^j
        assert np.max(np.abs(jets[j] - exact[j])) < 1e-14 * GRID.xi_max**j
    assert np.allclose(spectral_derivative(GAUSS, 2).values, exact[2], atol=1e-12)


def test_quadrature_is_spectrally_accurate():
    assert quadrature(GAUSS) == pytest.approx(math.sqrt(math.pi), rel=1e-14)


@pytest.mark.parametrize("s", [0.0, 0.5, 1.0, 2.0, 3.5])
def test_sobolev_norm_of_gaussian(s):
    # |f_hat(xi)|^2 = pi exp(-xi^2 / 2); ||f||_s^2 = (1/2pi) int (1+xi^2)^s |f_hat|^2
    val, _ = integrate.quad(lambda xi: (1 + xi * xi) ** s * math.pi * math.exp(-xi * xi / 2), -np.inf, np.inf)
    assert sobolev_norm(GAUSS, s) == pytest.approx(math.sqrt(val / (2 * math.pi)), rel=1e-12)


def test_sobolev_norm_zero_is_l2():
    assert sobolev_norm(GAUSS, 0.0) ** 2 == pytest.approx(quadrature(GAUSS * GAUSS), rel=1e-13)
    with pytest.raises(ValueError):
        sobolev_norm(GAUSS, -1.0)


@settings(max_examples=60, deadline=None)
@given(polys(max_terms=5), st.floats(0.0, 1.0))
def test_compiled_poly_matches_direct_evaluation(p, mu):
    jets = derivative_jets(GridFunction(GRID, special.erf(GRID.x) * np.exp(-0.1 * GRID.x**2)), 3)
    direct = np.zeros(GRID.N)
    for m, c in p.items():
        term = float(c.re) * mu**m.mu_power * np.ones(GRID.N)
        for order, e in m.exps:
            term = term * jets[order] ** e
        direct += term
    assert np.allclose(CompiledPoly(p, mu)(jets), direct, rtol=1e-12, atol=1e-12)


def test_compiled_poly_guards():
    with pytest.raises(ValueError):
        CompiledPoly(DiffPoly.var(0, coeff=1j))
    with pytest.raises(ValueError):
        CompiledPoly(DiffPoly.var(3))([np.zeros(4)])


def test_write_csv_round_trips(tmp_path):
    path = tmp_path / "g.csv"
    write_csv(GAUSS, path)
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    assert np.array_equal(data[:, 0], GRID.x) and np.array_equal(data[:, 1], GAUSS.values)
