import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gardner_hierarchy.closedform import Breather, BreatherParams, Soliton, SolitonParams
from gardner_hierarchy.functionals import (
    Residual,
    SpectralCoefficients,
    bilinear_form,
    conserved_quantities,
    critical_point_expansion,
    energy,
    mass,
    miura_residual,
    pde_residual,
    quadratic_form,
    universal_ode_residual,
    weak_bilinear_form,
)
from gardner_hierarchy.hierarchy import gardner_rhs, velocity_pair
from gardner_hierarchy.numerics import Grid, GridFunction, sample

GRID = Grid(40.0, 2048)
ALPHA, BETA, MU = 1.0, 1.1, 0.3
W = SpectralCoefficients(ALPHA, BETA)
B = sample(Breather(BreatherParams(ALPHA, BETA, MU, 1)), 0.0, GRID)


def _bump(x0, width, poly):
    s = (GRID.x - x0) / width
    return GridFunction(GRID, np.polyval(poly, s) * np.exp(-s * s))


bumps = st.builds(
    _bump,
    st.floats(-4, 4),
    st.floats(0.7, 2.0),
    st.lists(st.floats(-1, 1), min_size=1, max_size=3),
)


def test_residual_scale_floor():
    r = Residual(np.array([1e-3, -2e-3]), 1.0)
    assert r.relative == 2e-3 and r.passes(1e-2) and not r.passes(1e-3)


@pytest.mark.parametrize("n", [1, 2])
def test_pde_residual_two_routes(n):
    p = BreatherParams(ALPHA, BETA, MU, n)
    exact = pde_residual(gardner_rhs(n), Breather(p), 0.1, GRID, MU, "exact").relative
    spectral = pde_residual(gardner_rhs(n), Breather(p), 0.1, GRID, MU, "spectral").relative
    assert exact < 1e-12 and spectral < 1e-8


def test_pde_residual_rejects_wrong_flow():
    p = BreatherParams(ALPHA, BETA, MU, 1)
    # scale is the largest single term (~8e3 here); the true residual is ~1e-15
    assert pde_residual(gardner_rhs(2), Breather(p), 0.0, GRID, MU).relative > 1e-4
    with pytest.raises(ValueError):
        pde_residual(gardner_rhs(1), Breather(p), 0.0, GRID, MU, "finite")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_soliton_solves_flow(n):
    p = SolitonParams(1.1, 0.4, n)
    assert pde_residual(gardner_rhs(n), Soliton(p), 0.2, GRID, 0.4).relative < 1e-12


def test_universal_ode_rejects_wrong_frequencies():
    assert universal_ode_residual(B, MU, ALPHA, BETA).relative < 1e-9
    assert universal_ode_residual(B, MU, ALPHA * 1.1, BETA).relative > 1e-3


@settings(max_examples=30, deadline=None)
@given(st.floats(0.4, 1.5), st.floats(0.4, 1.5), st.floats(0.0, 0.5), st.floats(-1.0, 1.0), st.floats(-5, 5))
def test_miura_identity(a, b, mu, t, x0):
    assume(a * a + b * b - 4 * mu * mu > 0.05)
    p = BreatherParams(a, b, mu, 2, x2=x0)
    x = np.linspace(-10, 10, 201)
    assert miura_residual(p, t, x).relative < 1e-12


def test_miura_negative_control():
    p = BreatherParams(ALPHA, BETA, MU, 1)
    x = np.linspace(-10, 10, 201)
    assert miura_residual(p, 0.0, x, perturbation=0.05 * np.exp(-x * x)).relative > 1e-2


def test_conserved_quantities_along_exact_breather():
    gamma = velocity_pair(2, ALPHA, BETA, MU)[1]
    sol = Breather(BreatherParams(ALPHA, BETA, MU, 2, x2=-0.2 * gamma))
    qs = [conserved_quantities(sample(sol, t, GRID), MU, W) for t in (0.0, 0.2, 0.4)]
    for key in ("M", "E", "F", "H"):
        vals = [q[key] for q in qs]
        assert max(vals) - min(vals) < 1e-10 * abs(vals[0])


def test_soliton_mass_closed_form():
    # mu = 0: Q = c sech(c x), so M = (1/2) int Q^2 = c
    q = sample(Soliton(SolitonParams(1.3, 0.0)), 0.0, GRID)
    assert mass(q) == pytest.approx(1.3, rel=1e-13)
    # E = int Q_x^2/2 - Q^4/2 = c^3/3 - 2c^3/3
    assert energy(q, 0.0) == pytest.approx(-1.3**3 / 3, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(bumps, bumps)
def test_weak_form_matches_polarization(z1, z2):
    strong = bilinear_form(z1, z2, B, MU, ALPHA, BETA)
    weak = weak_bilinear_form(z1, z2, B, MU, ALPHA, BETA)
    scale = max(1.0, abs(quadratic_form(z1, B, MU, ALPHA, BETA)), abs(quadratic_form(z2, B, MU, ALPHA, BETA)))
    assert abs(strong - weak) < 1e-9 * scale


@settings(max_examples=15, deadline=None)
@given(bumps)
def test_critical_point(z):
    assume(z.sup() > 0.1)
    rep = critical_point_expansion(B, z, MU, W)
    assert abs(rep.first_variation) < 1e-7 * rep.z_norm
    assert abs(rep.first_variation_direct) < 1e-7 * rep.z_norm
    # local order at the two smallest eps: 3, or up to 4 where the cubic coefficient vanishes
    r0, r1 = rep.remainders[:2]
    order = np.log(abs(r1 / r0)) / np.log(rep.eps[1] / rep.eps[0])
    assert 2.9 < order < 4.1


def test_first_variation_two_routes_off_critical():
    profile = GridFunction(GRID, 1.5 / np.cosh(GRID.x))
    z = _bump(0.5, 1.0, [1.0, 0.3])
    rep = critical_point_expansion(profile, z, MU, W)
    assert abs(rep.first_variation) > 1e-2 * rep.z_norm
    assert rep.first_variation == pytest.approx(rep.first_variation_direct, rel=1e-8)
