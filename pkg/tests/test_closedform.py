
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gardner_hierarchy.closedform import (
    Breather,
    BreatherParams,
    MKdVBreather,
    PeriodicBreather,
    PeriodicBreatherParams,
    Soliton,
    SolitonParams,
    breather_components,
    commensurability_solve,
)
from gardner_hierarchy.functionals import soliton_ode_residual
from gardner_hierarchy.numerics import Grid, derivative_jets, sample

GRID = Grid(40.0, 2048)
P = BreatherParams(1.0, 1.1, 0.3, 1, x1=0.4, x2=-0.7)


def _periodic(order=5):
    sol = commensurability_solve(1.0, 1.0 / 17.0)
    return PeriodicBreatherParams(sol.alpha, 1.0, 1.0 / 17.0, sol.m, order=order)


def _fd_time(sol, t, x):
    # fourth-order central difference; the step keeps the x-shift per step near 1e-3
    h = 1e-3 / max(1.0, max(abs(v) for v in sol.velocities()))
    return (-sol(t + 2 * h, x) + 8 * sol(t + h, x) - 8 * sol(t - h, x) + sol(t - 2 * h, x)) / (12 * h)


@pytest.mark.parametrize(
    "sol",
    [
        Breather(P),
        Breather(P.with_(n=2)),
        Soliton(SolitonParams(1.2, 0.3, 2, 0.5)),
        MKdVBreather(1.0, 1.1, 2, 0.3, -0.2),
        PeriodicBreather(_periodic(5)),
    ],
    ids=["breather1", "breather2", "soliton2", "mkdv2", "periodic5"],
)
def test_time_derivative_matches_finite_difference(sol, t=0.05):
    x = np.linspace(-8, 8, 161)
    fd = _fd_time(sol, t, x)
    exact = sol.time_derivative(t, x)
    assert np.max(np.abs(fd - exact)) < 1e-6 * max(1.0, np.max(np.abs(exact)))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_exact_jets_match_spectral(n):
    p = P.with_(n=n)
    jets = Breather(p).jet(0.1, GRID.x, 5)
    spectral = derivative_jets(sample(Breather(p), 0.1, GRID), 5)
    for k in range(6):
        assert np.max(np.abs(jets[k] - spectral[k])) < 1e-9 * max(1.0, np.max(np.abs(jets[k])))


def test_periodic_jets_match_spectral():
    p = _periodic(7)
    # one period is ~3.2 long; finer grids only amplify round-off by xi_max^k
    grid = Grid(p.period / 2, 64)
    jets = PeriodicBreather(p).jet(0.0, grid.x, 4)
    spectral = derivative_jets(sample(PeriodicBreather(p), 0.0, grid), 4)
    for k in range(5):
        assert np.max(np.abs(jets[k] - spectral[k])) < 1e-10 * max(1.0, np.max(np.abs(jets[k])))


def test_periodic_breather_is_periodic():
    p = _periodic(5)
    x = np.linspace(-3, 3, 31)
    sol = PeriodicBreather(p)
    assert np.allclose(sol(0.2, x + p.period), sol(0.2, x), atol=1e-12)


def test_components_agree_with_tau_form():
    x = np.linspace(-10, 10, 201)
    comp = breather_components(P, 0.2, x)
    assert np.allclose(comp["H"] / comp["N"], Breather(P)(0.2, x), atol=1e-13)
    with pytest.raises(OverflowError):
        breather_components(P, 0.0, np.array([1e3]))


def test_far_field_is_finite_and_small():
    x = np.array([-1e4, -500.0, 500.0, 1e4])
    vals = Breather(P)(0.0, x)
    # with mu > 0 the right tail is Im(Psi_x/Psi) of a nearly real exponential: round-off only
    assert np.all(np.isfinite(vals)) and np.max(np.abs(vals)) < 1e-15
    assert np.all(np.isfinite(Breather(P).jet(0.0, x, 5)))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.3, 2.0), st.floats(0.3, 2.0), st.floats(-3.0, 3.0), st.integers(1, 3))
def test_phase_shift_is_translation(a, b, s, n):
    p = BreatherParams(a, b, 0.2, n)
    x = np.linspace(-6, 6, 61)
    shifted = Breather(p.with_(x1=s, x2=s))(0.3, x)
    assert np.allclose(shifted, Breather(p)(0.3, x + s), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.3, 2.0), st.floats(0.3, 2.0), st.integers(1, 4))
def test_zero_mu_is_mkdv_breather(a, b, n):
    x = np.linspace(-10, 10, 201)
    g = Breather(BreatherParams(a, b, 0.0, n))(0.1, x)
    m = MKdVBreather(a, b, n)(0.1, x)
    assert np.max(np.abs(g - m)) < 1e-12 * max(1.0, np.max(np.abs(m)))


@settings(max_examples=30, deadline=None)
@given(st.floats(0.3, 2.0), st.floats(0.0, 1.0))
def test_soliton_profile_ode(c, mu):
    grid = Grid(30.0, 1024)
    q = Soliton(SolitonParams(c, mu)).jet(0.0, grid.x, 2)
    assert soliton_ode_residual(q, c, mu).relative < 1e-12


def test_soliton_ode_with_first_power_of_c_fails():
    q = Soliton(SolitonParams(1.5, 0.2)).jet(0.0, GRID.x, 2)
    assert soliton_ode_residual(q, 1.5, 0.2, dispersion="c").relative > 1e-2


def test_parameter_validation():
    with pytest.raises(ValueError):
        BreatherParams(0.1, 0.1, 1.0)
    with pytest.raises(ValueError):
        BreatherParams(1.0, 1.0, -0.1)
    with pytest.raises(ValueError):
        SolitonParams(-1.0)
    p = _periodic()
    with pytest.raises(ValueError):
        PeriodicBreatherParams(p.alpha * 1.01, p.beta, p.k, p.m)
    with pytest.raises(ValueError):
        PeriodicBreatherParams(p.alpha, p.beta, p.k, p.m, order=9)


def test_soliton_speed_in_time_derivative():
    p = SolitonParams(0.9, 0.25, 3, 0.0)
    sol = Soliton(p)
    x = np.linspace(-5, 5, 51)
    # travelling wave: u(t, x) = u(0, x - speed t)
    assert np.allclose(sol(0.4, x), sol(0.0, x - p.speed * 0.4), atol=1e-13)
