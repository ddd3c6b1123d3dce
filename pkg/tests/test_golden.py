from fractions import Fraction

import pytest
import sympy as sp

from gardner_hierarchy import golden as gd
from gardner_hierarchy.acceptance import DEFAULT_GOLDEN
from gardner_hierarchy.diffpoly import DiffPoly
from gardner_hierarchy.hierarchy import gardner_rhs, lenard, velocity_pair

G = gd.load_golden(DEFAULT_GOLDEN)
ALPHA, BETA, MU_S = sp.symbols("alpha beta mu", real=True)


def _name(var, order):
    return var if order == 0 else var + ("x" if order == 1 else "xx" if order == 2 else f"{order}x")


def _symbolic(p: DiffPoly, var: str):
    out = sp.Integer(0)
    for m, c in p.items():
        term = sp.Rational(c.re.numerator, c.re.denominator) * sp.Symbol("mu") ** m.mu_power
        for order, e in m.exps:
            term *= sp.Symbol(_name(var, order)) ** e
        out += term
    return out


def _texts():
    for family, var in (("lenard", "v"), ("gardner", "u"), ("mkdv", "u")):
        for n, entry in G[family].items():
            yield f"{family}_{n}", var, entry if isinstance(entry, str) else entry["text"]


@pytest.mark.parametrize("key,var,text", list(_texts()), ids=lambda v: v if isinstance(v, str) and len(v) < 12 else "")
def test_reader_matches_sympy(key, var, text):
    assert sp.expand(sp.sympify(" ".join(text.split())) - _symbolic(gd.expression_to_poly(text, var), var)) == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_lenard_exact(n):
    assert lenard(n) == gd.expression_to_poly(G["lenard"][n], "v")


def test_lenard_5_documented_difference():
    entry = G["lenard"][5]
    diff = lenard(5) - gd.expression_to_poly(entry["text"], "v")
    assert diff and diff == gd.expression_to_poly(entry["known_diff"], "v")


@pytest.mark.parametrize("family,n", [("gardner", 1), ("gardner", 2), ("gardner", 3), ("gardner", 5)] + [("mkdv", n) for n in range(2, 7)])
def test_printed_equation_exact(family, n):
    assert gd.compare_equation(G, family, n).exact


def test_gardner_9_documented_difference():
    diff = gd.compare_equation(G, "gardner", 4)
    assert not diff.exact and diff.documented


def _full_dispersion(n):
    eqn = gardner_rhs(n)
    coeffs = [eqn.transport] + list(eqn.a)
    z = BETA + sp.I * ALPHA
    return sp.expand(sum(sp.Rational(c.numerator, c.denominator) * z ** (2 * p + 1) * MU_S ** (2 * (n - p)) for p, c in enumerate(coeffs)))


@pytest.mark.parametrize("key,n", [("gardner_9", 4), ("gardner_11", 5)])
def test_high_order_velocity_normalization(key, n):
    entry = G["velocities"][key]
    re, im = _full_dispersion(n).as_real_imag()
    want = {"Im": im, "-Im": -im, "-Re": -re, "Re": re}
    names = {"alpha": ALPHA, "beta": BETA, "mu": MU_S}
    for which in ("delta", "gamma"):
        printed = sp.sympify(" ".join(entry[which].split()), locals=names)
        assert sp.expand(printed - want[entry["normalization"][which]]) == 0


@pytest.mark.parametrize("key,n", [("gardner_5", 2), ("gardner_7", 3), ("mkdv_5", 2), ("mkdv_7", 3), ("mkdv_11", 5)])
def test_low_order_velocities(key, n):
    mu = 0.0 if key.startswith("mkdv") else 0.37
    vals = dict(alpha=1.3, beta=0.7, mu=mu)
    printed = tuple(gd.printed_velocity(G, key, w, **vals) for w in ("delta", "gamma"))
    assert printed == pytest.approx(velocity_pair(n, 1.3, 0.7, mu), rel=1e-13)


def test_mkdv_9_correction_is_one_term():
    entry = G["velocities"]["mkdv_9"]
    names = {"alpha": ALPHA, "beta": BETA}
    verbatim = sp.sympify(entry["delta"], locals=names)
    fixed = sp.sympify(entry["corrected_delta"], locals=names)
    assert sp.expand(fixed - verbatim) == 84 * ALPHA**2 * BETA**6 - 84 * ALPHA**3 * BETA**6
    vals = dict(alpha=1.3, beta=0.7)
    assert gd.printed_velocity(G, "mkdv_9", "gamma", **vals) == pytest.approx(velocity_pair(4, 1.3, 0.7)[1], rel=1e-13)


def test_expression_errors():
    with pytest.raises(gd.ExpressionError):
        gd.evaluate_expression("x + 1", {})
    with pytest.raises(gd.ExpressionError):
        gd.evaluate_expression("2.5 * a", {"a": 1})
    with pytest.raises(gd.ExpressionError):
        gd.evaluate_expression("a ** -1", {"a": 2})
    with pytest.raises(gd.ExpressionError):
        gd.evaluate_expression("a +", {"a": 2})
    with pytest.raises(gd.ExpressionError):
        gd.evaluate_expression("f(a)", {"a": 2})


def test_exact_evaluation():
    assert gd.evaluate_expression("a**2 / 3 - 1", {"a": Fraction(3, 2)}) == Fraction(-1, 4)
