import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from gardner_hierarchy.closedform import NoConvergence, commensurability_solve
from gardner_hierarchy.elliptic import DomainError, agm, elliptic_K, jacobi


def test_K_at_zero():
    assert abs(elliptic_K(0.0) - math.pi / 2) < 1e-15


def test_agm_known_value():
    # Gauss's constant
    assert agm(1.0, math.sqrt(2.0)) == pytest.approx(1.1981402347355922, rel=1e-15)


@settings(max_examples=100)
@given(st.floats(0.0, 0.999999))
def test_K_matches_scipy(r):
    assert elliptic_K(r) == pytest.approx(special.ellipk(r), rel=1e-13)


# scipy.special.ellipj is itself unreliable for 1 - r < 1e-9; mpmath covers that edge
@settings(max_examples=60)
@given(st.floats(0.0, 1.0 - 1e-6), st.floats(-50.0, 50.0))
def test_jacobi_matches_scipy(r, u):
    ours = jacobi(np.array([u]), r)[:3]
    ref = special.ellipj(u, r)[:3]
    for a, b in zip(ours, ref):
        assert abs(a[0] - b) < 1e-11


@pytest.mark.parametrize("r", [1.0 - 2.0**-53, 1.0 - 1e-12, 1.0 - 1e-8, 0.999])
def test_jacobi_near_one_matches_mpmath(r):
    mp.mp.dps = 40
    u = np.linspace(-50.0, 50.0, 41)
    ours = jacobi(u, r)[:3]
    for name, vals in zip(("sn", "cn", "dn"), ours):
        ref = np.array([float(mp.ellipfun(name, float(v), m=mp.mpf(r))) for v in u])
        assert np.max(np.abs(vals - ref)) < 1e-12


@settings(max_examples=60)
@given(st.floats(0.0, 1.0))
def test_jacobi_identities(r):
    u = np.linspace(-30, 30, 301)
    sn, cn, dn, nd = jacobi(u, r)
    assert np.max(np.abs(sn**2 + cn**2 - 1)) < 1e-12
    assert np.max(np.abs(dn**2 + r * sn**2 - 1)) < 1e-12
    assert np.max(np.abs(dn * nd - 1)) < 1e-12


def test_degenerate_parameters():
    u = np.linspace(-3, 3, 7)
    sn, cn, dn, _ = jacobi(u, 0.0)
    assert np.allclose(sn, np.sin(u)) and np.allclose(dn, 1.0)
    sn, cn, dn, _ = jacobi(u, 1.0)
    assert np.allclose(sn, np.tanh(u)) and np.allclose(dn, 1 / np.cosh(u))


def test_quarter_period():
    r = 0.3
    sn, cn, _, _ = jacobi(np.array([elliptic_K(r)]), r)
    assert abs(sn[0] - 1) < 1e-14 and abs(cn[0]) < 1e-7


def test_domain_errors():
    with pytest.raises(DomainError):
        elliptic_K(1.0)
    with pytest.raises(DomainError):
        elliptic_K(-0.1)
    with pytest.raises(DomainError):
        jacobi(0.0, 1.5)
    with pytest.raises(DomainError):
        commensurability_solve(1.0, 0.0)


def test_commensurability_reference_case():
    sol = commensurability_solve(1.0, 1.0 / 17.0)
    assert abs(sol.alpha - 2.0) < 1e-12
    assert abs(sol.m - 1.0 / 17.0) < 1e-12
    assert abs(4 * elliptic_K(1 / 17) / sol.alpha - 2 * elliptic_K(sol.m)) < 1e-12


def test_commensurability_has_no_root_for_large_k():
    with pytest.raises(NoConvergence):
        commensurability_solve(1.0, 0.1)


# a commensurate m exists only for k below roughly 0.0585
@settings(max_examples=20, deadline=None)
@given(st.floats(0.5, 2.0), st.floats(0.005, 0.058))
def test_commensurability_residuals(beta, k):
    sol = commensurability_solve(beta, k)
    assert all(abs(r) < 1e-12 for r in sol.residuals)
    assert sol.period == pytest.approx(2 * elliptic_K(sol.m) / beta, rel=1e-12)
