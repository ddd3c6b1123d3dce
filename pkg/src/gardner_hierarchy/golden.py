"""Reading transcribed printed equations and comparing them with generated ones.

Printed forms are stored as arithmetic expressions in ``u, ux, uxx, u3x, ...``
(or ``v, ...``) and ``mu``. They are read with :mod:`ast` into exact
:class:`DiffPoly` values, so factored forms such as ``(mu + u)**9`` expand
without any floating point.
"""

from __future__ import annotations

import ast
import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable

import yaml

from .diffpoly import DiffPoly, total_derivative
from .hierarchy import HierarchyEquation, gardner_rhs, mkdv_rhs

__all__ = [
    "ExpressionError",
    "evaluate_expression",
    "expression_to_poly",
    "load_golden",
    "printed_lhs",
    "generated_lhs",
    "EquationDiff",
    "compare_equation",
    "printed_velocity",
]

_BINOPS: dict[type, Callable] = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


class ExpressionError(ValueError):
    pass


def evaluate_expression(text: str, names: dict[str, object]):
    """Evaluate ``+ - * / **``, integer literals and the given names.

    Integer literals become :class:`Fraction`, so the result is exact
    whenever the bound values are.
    """

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise ExpressionError(f"unknown name {node.id!r}")
            return names[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            val = walk(node.operand)
            return -val if isinstance(node.op, ast.USub) else val
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(right, Fraction) and right.denominator == 1 and right >= 0):
                    raise ExpressionError("only nonnegative integer powers are supported")
                right = int(right)
            return _BINOPS[type(node.op)](left, right)
        raise ExpressionError(f"unsupported syntax: {ast.dump(node)}")

    try:
        tree = ast.parse(" ".join(text.split()), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(str(exc)) from exc
    return walk(tree)


_NAME_RE = re.compile(r"^(?P<var>[a-z])(?:(?P<x>x{1,2})|(?P<k>\d+)x)?$")


def _poly_names(text: str, var: str) -> dict[str, DiffPoly]:
    names: dict[str, DiffPoly] = {"mu": DiffPoly.mu()}
    for token in set(re.findall(r"[A-Za-z_][A-Za-z_0-9]*", text)):
        m = _NAME_RE.match(token)
        if m and m.group("var") == var:
            order = len(m.group("x")) if m.group("x") else int(m.group("k") or 0)
            names[token] = DiffPoly.var(order)
    return names


def expression_to_poly(text: str, var: str = "u") -> DiffPoly:
    out = evaluate_expression(text, _poly_names(text, var))
    return out if isinstance(out, DiffPoly) else DiffPoly.const(out)


def load_golden(path: str | Path) -> dict:
    with open(path) as fh:
        return yaml.safe_load(fh)


def _entry_text(entry) -> str:
    return entry if isinstance(entry, str) else entry["text"]


def printed_lhs(entry) -> DiffPoly:
    """The printed equation as ``u_t + lhs = 0``."""
    poly = expression_to_poly(_entry_text(entry))
    if isinstance(entry, dict) and entry.get("form") == "flux":
        poly = total_derivative(poly)
    return poly


def generated_lhs(eqn: HierarchyEquation, with_transport: bool = False) -> DiffPoly:
    lhs = -eqn.rhs
    if with_transport and not eqn.mkdv:
        lhs = lhs + DiffPoly.mu(2 * eqn.n) * DiffPoly.var(1) * eqn.transport
    return lhs


@dataclass(frozen=True)
class EquationDiff:
    family: str
    n: int
    generated_minus_printed: DiffPoly
    expected: DiffPoly

    @property
    def exact(self) -> bool:
        return not self.generated_minus_printed

    @property
    def documented(self) -> bool:
        """Generated and printed differ by exactly the recorded typo."""
        return self.generated_minus_printed == self.expected

    def text(self) -> str:
        return self.generated_minus_printed.to_text()


def compare_equation(golden: dict, family: str, n: int) -> EquationDiff:
    entry = golden[family][n]
    eqn = gardner_rhs(n) if family == "gardner" else mkdv_rhs(n)
    transport = isinstance(entry, dict) and bool(entry.get("transport"))
    diff = generated_lhs(eqn, with_transport=transport) - printed_lhs(entry)
    expected = DiffPoly()
    if isinstance(entry, dict) and "known_diff_flux" in entry:
        expected = total_derivative(expression_to_poly(entry["known_diff_flux"]))
    return EquationDiff(family, n, diff, expected)


def printed_velocity(golden: dict, key: str, which: str, **values: float) -> float:
    """Numerical value of a printed velocity expression."""
    entry = golden["velocities"][key] if key in golden["velocities"] else golden["periodic_velocities"][int(key)]
    text = entry[which]
    names = {k: float(v) for k, v in values.items()}
    return float(evaluate_expression(text, names))
