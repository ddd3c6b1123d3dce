import math

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from gardner_hierarchy.diffpoly import DiffPoly, NotExact, formal_integral, total_derivative, weight_check
from gardner_hierarchy.hierarchy import (
    MAX_N,
    ZeroParameter,
    gardner_rhs,
    lenard,
    mkdv_rhs,
    soliton_speed,
    velocity_pair,
)

from strategies import MU, U, X, to_sympy

V = sp.Function("v")


def _lenard_op_sympy(expr):
    v = V(X)
    return sp.diff(expr, X, 3) + 4 * v * sp.diff(expr, X) + 2 * sp.diff(v, X) * expr


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_lenard_recursion_sympy(n):
    lhs = sp.diff(to_sympy(lenard(n), V), X)
    rhs = _lenard_op_sympy(to_sympy(lenard(n - 1), V))
    assert sp.expand(lhs - rhs) == 0
    # no constant of integration
    assert all(m.exps for m in lenard(n))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gardner_flow_sympy(n):
    """Build -D(-i w_x + 2(mu+u) w), w = L_n[i u_x + (mu+u)^2], entirely in sympy."""
    u = U(X)
    arg = sp.I * sp.diff(u, X) + (MU + u) ** 2
    w = to_sympy(lenard(n), V).subs(V(X), arg).doit()
    full = sp.expand(-sp.diff(-sp.I * sp.diff(w, X) + 2 * (MU + u) * w, X))
    eqn = gardner_rhs(n)
    transport = eqn.transport.numerator / sp.Integer(eqn.transport.denominator)
    expected = to_sympy(eqn.rhs) - transport * MU ** (2 * n) * sp.diff(u, X)
    assert sp.expand(full - expected) == 0


def test_known_coefficients():
    assert [int(c) for c in gardner_rhs(1).a] == [1]
    assert [int(c) for c in gardner_rhs(2).a] == [10, 1]
    assert [int(c) for c in gardner_rhs(3).a] == [70, 14, 1]


def test_third_order_flow():
    eqn = gardner_rhs(1)
    u, ux, u3x = DiffPoly.var(0), DiffPoly.var(1), DiffPoly.var(3)
    mu = DiffPoly.mu()
    assert eqn.rhs == -(u3x + 6 * u**2 * ux + 12 * mu * u * ux)


@pytest.mark.parametrize("n", range(1, 6))
def test_structure(n):
    eqn = gardner_rhs(n)
    assert eqn.order == 2 * n + 1 and eqn.rhs.max_order == 2 * n + 1
    assert eqn.rhs.is_real()
    assert weight_check(eqn.rhs, 1, 2 * n + 2)
    assert mkdv_rhs(n).rhs == eqn.rhs.with_mu_zero()
    assert total_derivative(eqn.flux()) == -eqn.rhs
    assert eqn.linear_part() + eqn.nonlinear_part() == eqn.rhs


def _variational_derivative(density: DiffPoly) -> DiffPoly:
    """Euler operator sum_j (-D)^j d(density)/d u_j, via exact partial derivatives."""
    out = DiffPoly()
    for order in range(density.max_order + 1):
        partial = DiffPoly()
        for m, c in density.items():
            e = m.exponent(order)
            if e:
                partial = partial + DiffPoly({m.without(order): c * e})
        for _ in range(order):
            partial = -total_derivative(partial)
        out = out + partial
    return out


@pytest.mark.parametrize("n", range(1, 5))
def test_flows_conserve_mass_and_energy(n):
    u, ux = DiffPoly.var(0), DiffPoly.var(1)
    mu = DiffPoly.mu()
    F = gardner_rhs(n).rhs
    energy = ux**2 - 4 * mu * u**3 - u**4  # twice the energy density
    for density in (u, u**2, energy):
        formal_integral(_variational_derivative(density) * F)  # raises NotExact if not conserved


def test_non_conserved_density_detected():
    with pytest.raises(NotExact):
        formal_integral(_variational_derivative(DiffPoly.var(0, 3)) * gardner_rhs(1).rhs)


def test_index_bounds():
    with pytest.raises(ValueError):
        gardner_rhs(0)
    with pytest.raises(ValueError):
        gardner_rhs(MAX_N + 1)
    with pytest.raises(ZeroParameter):
        velocity_pair(1, 0.0, 1.0)


def test_velocity_pair_third_order():
    a, b = 1.3, 0.4
    assert velocity_pair(1, a, b) == pytest.approx((a * a - 3 * b * b, 3 * a * a - b * b), rel=1e-14)


@settings(max_examples=50)
@given(
    st.integers(1, 5),
    st.floats(0.2, 2.0),
    st.floats(0.2, 2.0),
    st.floats(0.0, 1.0),
    st.floats(0.5, 2.0),
)
def test_velocity_homogeneity(n, a, b, mu, lam):
    d1, g1 = velocity_pair(n, a, b, mu)
    d2, g2 = velocity_pair(n, lam * a, lam * b, lam * mu)
    scale = (a * a + b * b + mu * mu) ** n
    assert math.isclose(d2, lam ** (2 * n) * d1, abs_tol=1e-11 * lam ** (2 * n) * scale)
    assert math.isclose(g2, lam ** (2 * n) * g1, abs_tol=1e-11 * lam ** (2 * n) * scale)


@settings(max_examples=50)
@given(st.integers(1, 5), st.floats(0.1, 2.0), st.floats(0.0, 1.0))
def test_soliton_speed_is_breather_edge(n, c, mu):
    # envelope phase x + gamma t with alpha -> 0, beta = c is the soliton x - speed t
    gamma = velocity_pair(n, 1e-7, c, mu)[1]
    scale = (c * c + mu * mu) ** n
    assert math.isclose(-gamma, soliton_speed(n, c, mu), abs_tol=1e-9 * scale)
