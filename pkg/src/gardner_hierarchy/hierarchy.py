"""Gardner and mKdV flows generated by the Lenard recursion."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from .diffpoly import (
    Coeff,
    DiffMonomial,
    DiffPoly,
    formal_integral,
    substitute_argument,
    total_derivative,
    weight_check,
)

__all__ = [
    "HierarchyEquation",
    "RealnessViolation",
    "ZeroParameter",
    "MAX_N",
    "lenard",
    "lenard_operator",
    "gardner_rhs",
    "mkdv_rhs",
    "velocity_pair",
    "soliton_speed",
    "miura_argument",
]

MAX_N = 8


class RealnessViolation(ArithmeticError):
    """The assembled flow kept an imaginary coefficient."""


class ZeroParameter(ValueError):
    pass


@dataclass(frozen=True)
class HierarchyEquation:
    """The flow ``u_t = rhs`` of order ``2n+1``.

    ``a[p-1]`` is the coefficient of ``mu^(2(n-p)) u_{(2p+1)x}`` in the
    equation written as ``u_t + (...) = 0``; ``transport`` is the removed
    coefficient of ``mu^(2n) u_x`` in that same layout.
    """

    n: int
    rhs: DiffPoly
    a: tuple[Fraction, ...]
    transport: Fraction
    mkdv: bool = False

    @property
    def order(self) -> int:
        return 2 * self.n + 1

    def linear_part(self) -> DiffPoly:
        """Monomials ``mu^k * u_{jx}`` (degree one in u)."""
        return DiffPoly({m: c for m, c in self.rhs.items() if m.is_linear()})

    def nonlinear_part(self) -> DiffPoly:
        return DiffPoly({m: c for m, c in self.rhs.items() if not m.is_linear()})

    def flux(self) -> DiffPoly:
        """``P`` with ``u_t + D_x P = 0`` (zero constant term)."""
        return formal_integral(-self.rhs)


_lock = threading.Lock()
_lenard_memo: dict[int, DiffPoly] = {0: DiffPoly.const(Fraction(1, 2))}
_gardner_memo: dict[int, HierarchyEquation] = {}


def lenard_operator(p: DiffPoly) -> DiffPoly:
    """Apply ``D^3 + 4 v D + 2 v_x`` to ``p`` (written in v)."""
    v = DiffPoly.var(0)
    vx = DiffPoly.var(1)
    dp = total_derivative(p)
    d3p = total_derivative(total_derivative(dp))
    return d3p + 4 * v * dp + 2 * vx * p


def lenard(n: int) -> DiffPoly:
    """``L_n[v]``, with ``L_0 = 1/2`` and ``D L_{n+1} = (D^3 + 4vD + 2v_x) L_n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    cached = _lenard_memo.get(n)
    if cached is not None:
        return cached
    prev = lenard(n - 1)
    result = formal_integral(lenard_operator(prev))
    with _lock:
        return _lenard_memo.setdefault(n, result)


def miura_argument() -> DiffPoly:
    """``i u_x + (mu + u)^2``."""
    u = DiffPoly.var(0)
    mu = DiffPoly.mu()
    return DiffPoly.var(1, coeff=Coeff(0, 1)) + (mu + u) ** 2


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"hierarchy index must be a positive integer, got {n!r}")
    if n > MAX_N:
        raise ValueError(f"hierarchy index capped at {MAX_N}, got {n}")


def gardner_rhs(n: int) -> HierarchyEquation:
    """Generate the (2n+1)th-order focusing Gardner flow.

    Computes ``F = -D(-i w_x + 2(mu+u) w)`` with ``w = L_n[i u_x + (mu+u)^2]``
    and subtracts the constant-coefficient transport term ``mu^(2n) u_x``
    (a Galilean moving frame).  Any other linear term of even order, or an
    imaginary leftover, is a generation error.
    """
    _check_n(n)
    cached = _gardner_memo.get(n)
    if cached is not None:
        return cached

    u = DiffPoly.var(0)
    mu = DiffPoly.mu()
    w = substitute_argument(lenard(n), miura_argument())
    inner = DiffPoly.const(Coeff(0, -1)) * total_derivative(w) + 2 * (mu + u) * w
    full = -total_derivative(inner)

    imag = full.imag_part()
    if imag:
        raise RealnessViolation(f"imaginary residue in n={n} flow: {imag.to_text()}")

    transport_mono = DiffMonomial(2 * n, ((1, 1),))
    transport = -full[transport_mono].re
    rhs = full.real_part() - DiffPoly({transport_mono: full[transport_mono]})

    for m, c in rhs.items():
        if m.is_linear() and m.exps[0][0] % 2 == 0:
            raise RealnessViolation(f"unexpected dissipative linear term {m} in n={n}")
    if not weight_check(rhs, 1, 2 * n + 2):
        raise ArithmeticError(f"n={n} flow is not weight-homogeneous")

    a = []
    for p in range(1, n + 1):
        c = rhs[DiffMonomial(2 * (n - p), ((2 * p + 1, 1),))]
        a.append(-c.re)
    eqn = HierarchyEquation(n=n, rhs=rhs, a=tuple(a), transport=transport)
    with _lock:
        return _gardner_memo.setdefault(n, eqn)


def mkdv_rhs(n: int) -> HierarchyEquation:
    """The (2n+1)th-order focusing mKdV flow (``mu = 0``)."""
    g = gardner_rhs(n)
    return HierarchyEquation(n=n, rhs=g.rhs.with_mu_zero(), a=g.a, transport=g.transport, mkdv=True)


def _dispersion_sum(n: int, alpha: float, beta: float, mu: float) -> complex:
    a = gardner_rhs(n).a
    z = complex(beta, alpha)
    return sum(float(a[p - 1]) * z ** (2 * p + 1) * mu ** (2 * (n - p)) for p in range(1, n + 1))


def velocity_pair(n: int, alpha: float, beta: float, mu: float = 0.0) -> tuple[float, float]:
    """Breather velocities ``(delta, gamma)`` for the phases ``x + delta t`` and ``x + gamma t``."""
    if alpha == 0 or beta == 0:
        raise ZeroParameter("alpha and beta must be nonzero")
    s = _dispersion_sum(n, alpha, beta, mu)
    return -s.imag / alpha, -s.real / beta


def soliton_speed(n: int, c: float, mu: float = 0.0) -> float:
    """``sum_p a_{p,n} c^(2p) mu^(2(n-p))``."""
    if c <= 0:
        raise ValueError("soliton parameter c must be positive")
    a = gardner_rhs(n).a
    return sum(float(a[p - 1]) * c ** (2 * p) * mu ** (2 * (n - p)) for p in range(1, n + 1))
