"""Closed-form solitons, breathers and periodic breathers.

Every breather here has the shape ``B = 2 d/dx arctan(G/F) = 2 Im(Psi_x / Psi)``
with ``Psi = F + iG``.  Exact x-derivatives of any order are obtained from
the Leibniz rule applied to ``N = |Psi|^2`` and ``H = 2 Im(Psi_x conj(Psi))``:

    B^(k) = (H^(k) - sum_{j<k} C(k,j) B^(j) N^(k-j)) / N

All of ``Psi``'s jets at a point may be multiplied by a common positive
factor (``exp(-|theta_2|)`` for the hyperbolic part) without changing ``B``,
which is how overflow is avoided far from the core.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from math import comb

import numpy as np
from scipy.optimize import brentq

from .elliptic import DomainError, elliptic_K, jacobi
from .hierarchy import soliton_speed, velocity_pair

__all__ = [
    "DegenerateDenominator",
    "NoConvergence",
    "DomainError",
    "SolitonParams",
    "BreatherParams",
    "PeriodicBreatherParams",
    "Soliton",
    "Breather",
    "MKdVBreather",
    "PeriodicBreather",
    "soliton_eval",
    "breather_eval",
    "breather_components",
    "mkdv_breather_eval",
    "periodic_velocities",
    "commensurability_solve",
    "periodic_breather_eval",
    "elliptic_K",
    "jacobi",
]

MIN_DISCRIMINANT = 1e-10


class DegenerateDenominator(ArithmeticError):
    """A breather denominator vanished or turned negative."""


class NoConvergence(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# parameter bundles


@dataclass(frozen=True)
class SolitonParams:
    c: float
    mu: float = 0.0
    n: int = 1
    x0: float = 0.0

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"soliton parameter c must be positive, got {self.c!r}")
        if self.mu < 0:
            raise ValueError("mu must be nonnegative")

    @cached_property
    def speed(self) -> float:
        return soliton_speed(self.n, self.c, self.mu)


@dataclass(frozen=True)
class BreatherParams:
    alpha: float
    beta: float
    mu: float = 0.0
    n: int = 1
    x1: float = 0.0
    x2: float = 0.0

    def __post_init__(self):
        if self.alpha == 0 or self.beta == 0:
            raise ValueError("alpha and beta must be nonzero")
        if self.mu < 0:
            raise ValueError("breathers require mu >= 0")
        if self.discriminant < MIN_DISCRIMINANT:
            raise ValueError(
                f"alpha^2 + beta^2 - 4 mu^2 = {self.discriminant:.3e} is not positive enough"
            )

    @property
    def discriminant(self) -> float:
        return self.alpha**2 + self.beta**2 - 4.0 * self.mu**2

    @cached_property
    def a1(self) -> float:
        a, b = self.alpha, self.beta
        return b * math.sqrt(a * a + b * b) / (a * math.sqrt(self.discriminant))

    @cached_property
    def a2(self) -> float:
        return 2.0 * self.beta * self.mu / self.discriminant

    @cached_property
    def a3(self) -> float:
        a, b = self.alpha, self.beta
        return 2.0 * b * self.mu / (a * math.sqrt(self.discriminant) * math.sqrt(a * a + b * b))

    @cached_property
    def velocities(self) -> tuple[float, float]:
        """``(delta, gamma)`` for the current level ``n``."""
        return velocity_pair(self.n, self.alpha, self.beta, self.mu)

    def with_(self, **changes) -> "BreatherParams":
        kw = dict(alpha=self.alpha, beta=self.beta, mu=self.mu, n=self.n, x1=self.x1, x2=self.x2)
        kw.update(changes)
        return BreatherParams(**kw)


@dataclass(frozen=True)
class PeriodicBreatherParams:
    """Periodic mKdV breather data.  ``k`` and ``m`` are elliptic *parameters*."""

    alpha: float
    beta: float
    k: float
    m: float
    x1: float = 0.0
    x2: float = 0.0
    order: int = 5
    tol: float = field(default=1e-12, repr=False, compare=False)

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("alpha and beta must be positive")
        if self.order not in (3, 5, 7):
            raise ValueError(f"periodic breathers are available for order 3, 5, 7, got {self.order}")
        if not (0.0 <= self.k < 1.0 and 0.0 <= self.m < 1.0):
            raise DomainError("k and m must lie in [0, 1)")
        r1, r2 = self.commensurability_residuals()
        if abs(r1) > self.tol or abs(r2) > self.tol:
            raise ValueError(f"commensurability violated: residuals {r1:.3e}, {r2:.3e}")

    def commensurability_residuals(self) -> tuple[float, float]:
        ratio = (self.beta / self.alpha) ** 4 - self.k / (1.0 - self.m)
        periods = elliptic_K(self.k) - self.alpha / (2.0 * self.beta) * elliptic_K(self.m)
        return ratio, periods

    @property
    def period(self) -> float:
        return 4.0 * elliptic_K(self.k) / self.alpha

    @cached_property
    def velocities(self) -> tuple[float, float]:
        return periodic_velocities(self.order, self.alpha, self.beta, self.k, self.m)


# ---------------------------------------------------------------------------
# generic "complex tau" machinery


def _ratio_jets(H: list, N: list, order: int) -> list:
    """Derivatives ``B^(0..order)`` of ``B = H/N`` from jets of ``H`` and ``N``."""
    out = []
    for k in range(order + 1):
        acc = H[k].copy()
        for j in range(k):
            acc -= comb(k, j) * out[j] * N[k - j]
        out.append(acc / N[0])
    return out


def _tau_jets(psi: list, order: int) -> tuple[list, list]:
    """Jets of ``N = |psi|^2`` and ``H = 2 Im(psi' conj psi)`` up to ``order``.

    ``psi`` must carry derivatives ``0..order+1``.
    """
    conj = [np.conj(p) for p in psi]
    N, H = [], []
    for k in range(order + 1):
        nk = sum(comb(k, j) * (psi[j] * conj[k - j]).real for j in range(k + 1))
        hk = sum(comb(k, j) * (psi[j + 1] * conj[k - j]).imag for j in range(k + 1))
        N.append(nk)
        H.append(2.0 * hk)
    return N, H


class _TauSolution:
    """Base for solutions ``2 Im(Psi_x/Psi)`` with two phases ``y1``, ``y2``."""

    def velocities(self) -> tuple[float, float]:
        raise NotImplementedError

    def _psi(self, t, x, order: int):
        """Return ``(jets, psi_y1, psi_xy1)``; ``jets`` are x-derivatives ``0..order+1``."""
        raise NotImplementedError

    def _denominator_check(self, N0):
        if np.any(~(N0 > 0)):
            raise DegenerateDenominator("breather denominator is not positive")

    def jet(self, t: float, x, order: int = 0) -> np.ndarray:
        """Stack of ``d^k B/dx^k`` for ``k = 0..order`` (shape ``(order+1, len(x))``)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        psi, _, _ = self._psi(t, x, order)
        N, H = _tau_jets(psi, order)
        self._denominator_check(N[0])
        return np.array(_ratio_jets(H, N, order))

    def __call__(self, t: float, x) -> np.ndarray:
        return self.jet(t, x, 0)[0]

    def y1_derivative(self, t: float, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        psi, p1, px1 = self._psi(t, x, 0)
        z = psi[0]
        return 2.0 * (px1 / z - psi[1] * p1 / (z * z)).imag

    def time_derivative(self, t: float, x) -> np.ndarray:
        """Analytic ``dB/dt = delta dB/dy1 + gamma dB/dy2``."""
        delta, gamma = self.velocities()
        bx = self.jet(t, x, 1)[1]
        by1 = self.y1_derivative(t, x)
        return gamma * bx + (delta - gamma) * by1


def _shift_trig(theta, k: int):
    """``(sin, cos)`` of ``theta + k pi/2`` without losing accuracy."""
    s, c = np.sin(theta), np.cos(theta)
    return [(s, c), (c, -s), (-s, -c), (-c, s)][k % 4]


def _scaled_hyperbolic(theta):
    """``(cosh, sinh, exp) * exp(-|theta|)``."""
    e2 = np.exp(-2.0 * np.abs(theta))
    ch = 0.5 * (1.0 + e2)
    sh = 0.5 * np.sign(theta) * (1.0 - e2)
    ex = np.exp(theta - np.abs(theta))
    return ch, sh, ex, np.exp(-np.abs(theta))


class Breather(_TauSolution):
    """Gardner-hierarchy breather ``B_mu`` (reduces to mKdV at ``mu = 0``).

    ``F = cosh(th2) - a3 (alpha cos th1 - beta sin th1)`` and
    ``G = a1 sin th1 - a2 exp(th2)`` with ``th1 = alpha y1``, ``th2 = beta y2``.
    """

    def __init__(self, p: BreatherParams):
        self.p = p

    def velocities(self):
        return self.p.velocities

    def phases(self, t: float, x):
        delta, gamma = self.p.velocities
        th1 = self.p.alpha * (x + delta * t + self.p.x1)
        th2 = self.p.beta * (x + gamma * t + self.p.x2)
        return th1, th2

    def _psi(self, t, x, order):
        p = self.p
        a, b = p.alpha, p.beta
        th1, th2 = self.phases(t, x)
        ch, sh, ex, sigma = _scaled_hyperbolic(th2)
        jets = []
        for k in range(order + 2):
            s, c = _shift_trig(th1, k)
            ak, bk = a**k, b**k
            hyp = ch if k % 2 == 0 else sh
            F = bk * hyp + sigma * ak * p.a3 * (b * s - a * c)
            G = sigma * ak * p.a1 * s - bk * p.a2 * ex
            jets.append(F + 1j * G)
        # y1-only part: P(th1) = a3 (beta sin - alpha cos) + i a1 sin
        s1, c1 = _shift_trig(th1, 1)
        s2, c2 = _shift_trig(th1, 2)
        p1 = sigma * a * (p.a3 * (b * s1 - a * c1) + 1j * p.a1 * s1)
        p2 = sigma * a * a * (p.a3 * (b * s2 - a * c2) + 1j * p.a1 * s2)
        return jets, p1, p2


class MKdVBreather:
    """mKdV-hierarchy breather ``2 d/dx arctan((beta/alpha) sin(alpha y1)/cosh(beta y2))``.

    Written out directly (no tau machinery) so it can serve as an
    independent check of :class:`Breather` at small ``mu``.
    """

    def __init__(self, alpha: float, beta: float, n: int = 1, x1: float = 0.0, x2: float = 0.0):
        if alpha == 0 or beta == 0:
            raise ValueError("alpha and beta must be nonzero")
        self.alpha, self.beta, self.n, self.x1, self.x2 = alpha, beta, n, x1, x2
        z = complex(beta, alpha) ** (2 * n + 1)
        self._vel = (-z.imag / alpha, -z.real / beta)

    def velocities(self):
        return self._vel

    def _parts(self, t, x):
        a, b = self.alpha, self.beta
        delta, gamma = self._vel
        th1 = a * (np.asarray(x, dtype=float) + delta * t + self.x1)
        th2 = b * (np.asarray(x, dtype=float) + gamma * t + self.x2)
        s, c = np.sin(th1), np.cos(th1)
        ch, sh, _, sigma = _scaled_hyperbolic(th2)
        r = b / a
        num = c * ch - r * s * sh  # scaled by sigma
        den = ch * ch + (r * s * sigma) ** 2  # scaled by sigma^2
        return th1, th2, s, c, ch, sh, sigma, r, num, den

    def __call__(self, t: float, x) -> np.ndarray:
        *_, sigma, r, num, den = self._parts(t, x)
        return 2.0 * self.beta * num * sigma / den

    def time_derivative(self, t: float, x) -> np.ndarray:
        a, b = self.alpha, self.beta
        _, _, s, c, ch, sh, sigma, r, num, den = self._parts(t, x)
        # all pieces below are in units of sigma (num) and sigma^2 (den)
        num1 = (-s * ch - r * c * sh)
        den1 = 2.0 * r * r * s * c * sigma * sigma
        num2 = (c * sh - r * s * ch)
        den2 = 2.0 * ch * sh
        by1 = a * 2.0 * b * sigma * (num1 * den - num * den1) / (den * den)
        by2 = b * 2.0 * b * sigma * (num2 * den - num * den2) / (den * den)
        delta, gamma = self._vel
        return delta * by1 + gamma * by2


class Soliton:
    """``Q(z) = c^2 / (2 mu + sqrt(4 mu^2 + c^2) cosh(c z))``, ``z = x - v t - x0``."""

    def __init__(self, p: SolitonParams):
        self.p = p

    def velocities(self):
        return (-self.p.speed, -self.p.speed)

    def jet(self, t: float, x, order: int = 0) -> np.ndarray:
        c, mu = self.p.c, self.p.mu
        x = np.atleast_1d(np.asarray(x, dtype=float))
        z = x - self.p.speed * t - self.p.x0
        ch, sh, _, sigma = _scaled_hyperbolic(c * z)
        root = math.sqrt(4.0 * mu * mu + c * c)
        # Q * D = c^2 with D = 2 mu + root cosh(cz); everything scaled by sigma
        D = [2.0 * mu * sigma + root * ch]
        for k in range(1, order + 1):
            D.append(root * c**k * (ch if k % 2 == 0 else sh))
        rhs = [c * c * sigma] + [np.zeros_like(z)] * order
        return np.array(_ratio_jets(rhs, D, order))

    def __call__(self, t: float, x) -> np.ndarray:
        return self.jet(t, x, 0)[0]

    def time_derivative(self, t: float, x) -> np.ndarray:
        return -self.p.speed * self.jet(t, x, 1)[1]


# ---------------------------------------------------------------------------
# Jacobi jets and periodic breathers


def _jacobi_poly_jets(order: int, param: float, which: str) -> list[dict]:
    """d^j/du^j of sn or dn as polynomials in (sn, cn, dn), j = 0..order."""
    start = {(1, 0, 0): 1.0} if which == "sn" else {(0, 0, 1): 1.0}
    jets = [start]
    for _ in range(order):
        prev, nxt = jets[-1], {}
        for (i, j, k), coef in prev.items():
            # sn' = cn dn, cn' = -sn dn, dn' = -param sn cn
            if i:
                key = (i - 1, j + 1, k + 1)
                nxt[key] = nxt.get(key, 0.0) + coef * i
            if j:
                key = (i + 1, j - 1, k + 1)
                nxt[key] = nxt.get(key, 0.0) - coef * j
            if k:
                key = (i + 1, j + 1, k - 1)
                nxt[key] = nxt.get(key, 0.0) - coef * k * param
        jets.append({key: v for key, v in nxt.items() if v != 0.0})
    return jets


def _eval_jacobi_jets(u, param: float, order: int, which: str) -> list[np.ndarray]:
    sn, cn, dn, _ = jacobi(u, param)
    out = []
    for poly in _jacobi_poly_jets(order, param, which):
        acc = np.zeros_like(sn)
        for (i, j, k), coef in poly.items():
            acc = acc + coef * sn**i * cn**j * dn**k
        out.append(acc)
    return out


class PeriodicBreather(_TauSolution):
    """``2 d/dx arctan((beta/alpha) sn(alpha y1, k) dn(beta y2, m))``.

    ``1/nd = dn``; ``Psi = 1 + i S D`` with ``S = (beta/alpha) sn`` and ``D = dn``.
    """

    def __init__(self, p: PeriodicBreatherParams):
        self.p = p

    def velocities(self):
        return self.p.velocities

    def _psi(self, t, x, order):
        p = self.p
        delta, gamma = p.velocities
        u1 = p.alpha * (x + delta * t + p.x1)
        u2 = p.beta * (x + gamma * t + p.x2)
        S = _eval_jacobi_jets(u1, p.k, order + 2, "sn")
        D = _eval_jacobi_jets(u2, p.m, order + 2, "dn")
        r = p.beta / p.alpha
        S = [r * p.alpha**j * s for j, s in enumerate(S)]
        D = [p.beta**j * d for j, d in enumerate(D)]
        jets = [np.ones_like(u1) + 0j]
        for k in range(1, order + 2):
            jets.append(np.zeros_like(u1) + 0j)
        for k in range(order + 2):
            prod = sum(comb(k, j) * S[j] * D[k - j] for j in range(k + 1))
            jets[k] = jets[k] + 1j * prod
        p1 = 1j * S[1] * D[0]
        p2 = 1j * (S[2] * D[0] + S[1] * D[1])
        return jets, p1, p2


def periodic_velocities(order: int, alpha: float, beta: float, k: float, m: float) -> tuple[float, float]:
    """Velocities ``(delta, gamma)`` of the periodic mKdV breathers of order 3, 5, 7."""
    a2, b2 = alpha * alpha, beta * beta
    a4, b4 = a2 * a2, b2 * b2
    a6, b6 = a4 * a2, b4 * b2
    if order == 3:
        return a2 * (1 + k) + 3 * b2 * (m - 2), 3 * a2 * (1 + k) + b2 * (m - 2)
    if order == 5:
        delta = (
            -a4 * (k * k - 26 * k + 1)
            + 10 * a2 * b2 * (1 + k) * (2 - m)
            - 5 * b4 * (m * m - 16 * m + 16)
        )
        gamma = (
            -b4 * (m * m + 24 * m - 24)
            + 10 * a2 * b2 * (1 + k) * (2 - m)
            - 5 * a4 * (k * k + 14 * k + 1)
        )
        return delta, gamma
    if order == 7:
        delta = (
            a6 * (k**3 + 135 * k * k + 135 * k + 1)
            + 21 * a4 * b2 * (-2 + k * k * (m - 2) + m + 2 * k * (7 * m - 6))
            + 7 * a2 * b4 * (1 + k) * (5 * m * m - 24 * m + 24)
            + 7 * b6 * (m**3 - 2 * m * m + 48 * m - 48)
        )
        gamma = (
            -b6 * (-(m**3) - 254 * m * m - 2256 * m + 2512)
            + 7 * a2 * b4 * (1 + k) * (3 * m * m + 88 * m - 88)
            + 7 * a4 * b2 * (5 * (k * k + 1) * (m - 2) + k * (70 * m + 292))
            + 7 * a6 * (k**3 + 135 * k * k + 135 * k + 1)
        )
        return delta, gamma
    raise ValueError(f"order must be 3, 5 or 7, got {order}")


@dataclass(frozen=True)
class CommensurateSolution:
    alpha: float
    m: float
    period: float
    residuals: tuple[float, float]


def commensurability_solve(beta: float, k: float, xtol: float = 1e-15) -> CommensurateSolution:
    """Find ``(alpha, m)`` with ``beta^4/alpha^4 = k/(1-m)`` and ``K(k) = alpha/(2 beta) K(m)``.

    The first condition fixes ``alpha`` in terms of ``m``; the second is a
    scalar equation in ``m`` solved by bracketing on ``(0, 1)``.
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    if not 0.0 < k < 1.0:
        raise DomainError(f"k must lie in the open interval (0, 1), got {k!r}")
    Kk = elliptic_K(k)

    def g(m):
        return 0.5 * ((1.0 - m) / k) ** 0.25 * elliptic_K(m) - Kk

    # g -> -K(k) as m -> 1; scan for the first sign change from the left
    grid = np.concatenate([[0.0], 1.0 - np.logspace(-0.01, -15, 400)])
    values = [g(m) for m in grid]
    lo = hi = None
    for i in range(len(grid) - 1):
        if values[i] > 0 >= values[i + 1]:
            lo, hi = grid[i], grid[i + 1]
            break
    if lo is None:
        raise NoConvergence(f"no commensurate m in (0,1) for k={k!r}: g(0)={values[0]:.3e}")
    m = brentq(g, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
    alpha = beta * ((1.0 - m) / k) ** 0.25
    L1 = 4.0 * Kk / alpha
    L2 = 2.0 * elliptic_K(m) / beta
    res = ((beta / alpha) ** 4 - k / (1.0 - m), Kk - alpha / (2.0 * beta) * elliptic_K(m))
    if abs(L1 - L2) > 1e-12 * max(1.0, abs(L1)):
        raise NoConvergence(f"period mismatch {L1!r} vs {L2!r}")
    return CommensurateSolution(alpha=alpha, m=m, period=L1, residuals=res)


# ---------------------------------------------------------------------------
# functional entry points


def soliton_eval(p: SolitonParams, t: float, x) -> np.ndarray:
    return Soliton(p)(t, x)


def breather_eval(p: BreatherParams, t: float, x) -> np.ndarray:
    return Breather(p)(t, x)


def mkdv_breather_eval(alpha, beta, n, x1, x2, t, x) -> np.ndarray:
    return MKdVBreather(alpha, beta, n, x1, x2)(t, x)


def periodic_breather_eval(p: PeriodicBreatherParams, t: float, x) -> np.ndarray:
    return PeriodicBreather(p)(t, x)


def breather_components(p: BreatherParams, t: float, x) -> dict[str, np.ndarray]:
    """``H, N`` and their x-derivatives up to fourth order, term by term.

    These are the expanded trigonometric/hyperbolic forms with
    ``s = sin(alpha y1)``, ``c = cos(alpha y1)``, ``E = exp(beta y2)``.
    They are evaluated without rescaling, so they overflow once
    ``|beta y2|`` exceeds roughly 350; use :class:`Breather` for values.
    """
    al, be = p.alpha, p.beta
    a1, a2, a3 = p.a1, p.a2, p.a3
    th1, th2 = Breather(p).phases(t, np.asarray(x, dtype=float))
    if np.any(np.abs(th2) > 350):
        raise OverflowError("breather_components evaluated too far from the core")
    s, c = np.sin(th1), np.cos(th1)
    ch, sh, E = np.cosh(th2), np.sinh(th2), np.exp(th2)
    K = a1**2 - al**2 * a3**2 + a3**2 * be**2
    ab2 = al**2 + be**2
    q4 = al**4 + be**4 - 6 * al**2 * be**2

    H = 2 * (
        -a3 * (al**2 * a1 + a2 * (be**2 - al**2) * E * s - 2 * al * a2 * be * E * c)
        + be * sh * (a2 * E - a1 * s)
        + ch * (al * a1 * c - a2 * be * E)
    )
    N = (a2 * E - a1 * s) ** 2 + (ch + a3 * be * s - a3 * al * c) ** 2
    N_x = (
        2 * al * K * s * c
        - 2 * al * a1 * a2 * E * c
        - 2 * a1 * a2 * be * E * s
        + 2 * a2**2 * be * E**2
        + 2 * al**2 * a3**2 * be * s**2
        - 2 * al**2 * a3**2 * be * c**2
        + 2 * al**2 * a3 * s * ch
        - 2 * al * a3 * be * c * sh
        + 2 * al * a3 * be * c * ch
        + 2 * a3 * be**2 * s * sh
        + 2 * be * sh * ch
    )
    N_xx = (
        8 * al**3 * a3**2 * be * s * c
        - 4 * al * a1 * a2 * be * E * c
        + 4 * a2**2 * be**2 * E**2
        + 2 * al**2 * K * c**2
        - 2 * al**2 * K * s**2
        - 2 * a3 * be * (al**2 - be**2) * s * ch
        + 4 * al * a3 * be**2 * c * sh
        + 4 * al**2 * a3 * be * s * sh
        + 2 * be**2 * ch**2
        + 2 * be**2 * sh**2
        + 2 * a1 * a2 * (al**2 - be**2) * E * s
        + 2 * al * a3 * (al**2 - be**2) * c * ch
    )
    N_3x = (
        -8 * al**3 * K * s * c
        + 8 * a2**2 * be**3 * E**2
        + 2 * a1 * a2 * al * (al**2 - 3 * be**2) * E * c
        + 8 * al**4 * a3**2 * be * c**2
        - 8 * al**4 * a3**2 * be * s**2
        + 8 * be**3 * sh * ch
        - 2 * al**2 * a3 * (al**2 - 3 * be**2) * s * ch
        - 2 * be**2 * a3 * (3 * al**2 - be**2) * s * sh
        + 2 * a1 * a2 * be * (3 * al**2 - be**2) * E * s
        - 2 * al * a3 * be * (al**2 - 3 * be**2) * c * ch
        + 2 * a3 * al * be * (3 * al**2 - be**2) * c * sh
    )
    N_4x = (
        -32 * al**5 * a3**2 * be * c * s
        + 8 * al * a1 * a2 * be * (al**2 - be**2) * E * c
        - 2 * a1 * a2 * q4 * E * s
        + 16 * a2**2 * be**4 * E**2
        + 8 * be**4 * sh**2
        + 8 * al**4 * K * s**2
        + 8 * be**4 * ch**2
        - 2 * al * a3 * q4 * c * ch
        - 8 * al * a3 * be**2 * (al**2 - be**2) * c * sh
        - 8 * al**4 * K * c**2
        + 2 * a3 * be * q4 * s * ch
        - 8 * al**2 * a3 * (al**2 - be**2) * s * be * sh
    )
    H_x = 2 * ab2 * (a2 * a3 * al * E * c - a1 * ch * s - a2 * a3 * be * E * s)
    H_xx = -2 * ab2 * (al * a1 * ch * c + a1 * be * sh * s + a2 * a3 * ab2 * E * s)
    H_3x = (
        2 * a1 * (al**4 - be**4) * ch * s
        - 4 * a1 * al * be * ab2 * sh * c
        - 2 * a2 * a3 * be * ab2**2 * E * s
        - 2 * a2 * a3 * al * ab2**2 * E * c
    )
    H_4x = (
        2 * a1 * al * (al**4 - 2 * al**2 * be**2 - 3 * be**4) * ch * c
        - 4 * a2 * a3 * al * be * ab2**2 * E * c
        + 2 * a1 * be * (3 * al**4 + 2 * al**2 * be**2 - be**4) * sh * s
        + 2 * a2 * a3 * (al**6 + al**4 * be**2 - al**2 * be**4 - be**6) * E * s
    )
    return {
        "H": H, "N": N, "N_x": N_x, "N_xx": N_xx, "H_x": H_x, "H_xx": H_xx,
        "H_3x": H_3x, "H_4x": H_4x, "N_3x": N_3x, "N_4x": N_4x,
    }
