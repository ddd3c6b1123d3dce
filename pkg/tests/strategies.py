"""Shared hypothesis strategies and a sympy bridge used as an independent oracle."""

from __future__ import annotations

import sympy as sp
from hypothesis import strategies as st

from gardner_hierarchy.diffpoly import Coeff, DiffMonomial, DiffPoly

X = sp.Symbol("x")
MU = sp.Symbol("mu")
U = sp.Function("u")


def monomials(max_order: int = 3, max_exp: int = 2, max_mu: int = 2):
    exps = st.dictionaries(st.integers(0, max_order), st.integers(1, max_exp), max_size=3)
    return st.builds(lambda k, e: DiffMonomial.of(k, e), st.integers(0, max_mu), exps)


def coefficients(gaussian: bool = False):
    part = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    if gaussian:
        return st.builds(Coeff, part, part)
    return st.builds(Coeff, part)


def polys(max_terms: int = 4, gaussian: bool = False, **kw):
    return st.dictionaries(monomials(**kw), coefficients(gaussian), max_size=max_terms).map(DiffPoly)


def to_sympy(p: DiffPoly, fn=U):
    """``u_{jx}`` becomes ``d^j u(x)/dx^j``; differentiation is then sympy's own."""
    out = sp.Integer(0)
    for m, c in p.items():
        term = (sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(c.im.numerator, c.im.denominator)) * MU**m.mu_power
        for order, e in m.exps:
            term *= (fn(X) if order == 0 else sp.diff(fn(X), X, order)) ** e
        out += term
    return out
