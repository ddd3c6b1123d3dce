"""Conserved functionals, the universal fourth-order ODE and related residuals."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .closedform import BreatherParams, breather_components
from .hierarchy import HierarchyEquation
from .numerics import (
    ExactSolution,
    Grid,
    GridFunction,
    derivative_jets,
    evaluate_poly,
    quadrature,
    sample,
    sobolev_norm,
)

__all__ = [
    "SpectralCoefficients",
    "Residual",
    "mass",
    "energy",
    "higher_energy",
    "lyapunov",
    "conserved_quantities",
    "universal_ode_terms",
    "universal_ode_residual",
    "soliton_ode_residual",
    "miura_residual",
    "pde_residual",
    "linearized_apply",
    "quadratic_form",
    "bilinear_form",
    "weak_bilinear_form",
    "CriticalPointReport",
    "critical_point_expansion",
]


@dataclass(frozen=True)
class SpectralCoefficients:
    """Weights of the Lyapunov functional for a breather with frequencies ``alpha, beta``."""

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha == 0 or self.beta == 0:
            raise ValueError("alpha and beta must be nonzero")

    @property
    def energy_weight(self) -> float:
        return 2.0 * (self.beta**2 - self.alpha**2)

    @property
    def mass_weight(self) -> float:
        return (self.alpha**2 + self.beta**2) ** 2


@dataclass(frozen=True)
class Residual:
    """A pointwise residual with the scale it is judged against.

    ``scale`` is ``max(1, largest sup-norm among the individual terms)`` so
    neither cancellation between large terms nor tiny amplitudes can
    produce a misleading verdict.
    """

    field: np.ndarray
    scale: float
    h: float = 1.0

    @property
    def inf(self) -> float:
        return float(np.max(np.abs(self.field))) if self.field.size else 0.0

    @property
    def l2(self) -> float:
        return math.sqrt(self.h * float(np.sum(self.field**2)))

    @property
    def relative(self) -> float:
        return self.inf / self.scale

    def passes(self, tol: float) -> bool:
        return self.relative < tol

    def summary(self) -> dict:
        return {"residual_inf": self.inf, "residual_l2": self.l2, "scale": self.scale, "relative": self.relative}


def _scale(terms: Sequence[np.ndarray]) -> float:
    return max([1.0] + [float(np.max(np.abs(t))) for t in terms])


# ---------------------------------------------------------------------------
# conserved quantities


def mass(f: GridFunction) -> float:
    return 0.5 * quadrature(f * f)


def energy(f: GridFunction, mu: float) -> float:
    u = f.values
    ux = derivative_jets(f, 1)[1]
    return quadrature(GridFunction(f.grid, 0.5 * ux**2 - 2.0 * mu * u**3 - 0.5 * u**4))


def higher_energy(f: GridFunction, mu: float) -> float:
    u, ux, uxx = derivative_jets(f, 2)
    dens = (
        0.5 * uxx**2
        - 10.0 * mu * u * ux**2
        + 10.0 * mu**2 * u**4
        - 5.0 * u**2 * ux**2
        + 6.0 * mu * u**5
        + u**6
    )
    return quadrature(GridFunction(f.grid, dens))


def lyapunov(f: GridFunction, mu: float, w: SpectralCoefficients) -> float:
    return higher_energy(f, mu) + w.energy_weight * energy(f, mu) + w.mass_weight * mass(f)


def conserved_quantities(f: GridFunction, mu: float, w: SpectralCoefficients) -> dict[str, float]:
    M, E, F = mass(f), energy(f, mu), higher_energy(f, mu)
    return {"M": M, "E": E, "F": F, "H": F + w.energy_weight * E + w.mass_weight * M}


# ---------------------------------------------------------------------------
# ODE residuals


def _jets_of(B, order: int) -> np.ndarray:
    if isinstance(B, GridFunction):
        return derivative_jets(B, order)
    jets = np.asarray(B, dtype=float)
    if jets.shape[0] <= order:
        raise ValueError(f"need derivatives up to order {order}")
    return jets


def universal_ode_terms(jets: Sequence[np.ndarray], mu: float, alpha: float, beta: float) -> list[np.ndarray]:
    """The individual terms of the fourth-order breather ODE."""
    B, Bx, Bxx, _, B4 = jets[:5]
    a2, b2 = alpha * alpha, beta * beta
    return [
        B4,
        2.0 * (a2 - b2) * Bxx,
        2.0 * (a2 - b2) * 6.0 * mu * B**2,
        2.0 * (a2 - b2) * 2.0 * B**3,
        (a2 + b2) ** 2 * B,
        10.0 * B**2 * Bxx,
        10.0 * B * Bx**2,
        6.0 * B**5,
        10.0 * mu * Bx**2,
        20.0 * mu * B * Bxx,
        40.0 * mu**2 * B**3,
        30.0 * mu * B**4,
    ]


def universal_ode_residual(B, mu: float, alpha: float, beta: float, h: float = 1.0) -> Residual:
    """Residual of the n-independent fourth-order ODE satisfied by every breather.

    ``B`` is either a :class:`GridFunction` (spectral derivatives) or a
    stack of exact jets ``[B, B_x, ..., B_4x]``.
    """
    if isinstance(B, GridFunction):
        h = B.grid.h
    terms = universal_ode_terms(_jets_of(B, 4), mu, alpha, beta)
    return Residual(np.sum(terms, axis=0), _scale(terms), h)


def soliton_ode_residual(Q, c: float, mu: float, dispersion: str = "c2", h: float = 1.0) -> Residual:
    """``Q'' - k Q + 6 mu Q^2 + 2 Q^3`` with ``k = c^2`` (default) or ``k = c``."""
    if dispersion not in ("c2", "c"):
        raise ValueError("dispersion must be 'c2' or 'c'")
    if isinstance(Q, GridFunction):
        h = Q.grid.h
    q, _, qxx = _jets_of(Q, 2)[:3]
    k = c * c if dispersion == "c2" else c
    terms = [qxx, -k * q, 6.0 * mu * q**2, 2.0 * q**3]
    return Residual(np.sum(terms, axis=0), _scale(terms), h)


def miura_residual(p: BreatherParams, t: float, x, perturbation=None) -> Residual:
    """``u^2 - (log N)_xx + 2 mu u`` with ``u = H/N`` (+ optional perturbation).

    For the unperturbed breather this is ``(H^2 + N_x^2 - N_xx N + 2 mu H N)/N^2``,
    built from the expanded component formulas.
    """
    comp = breather_components(p, t, x)
    H, N, Nx, Nxx = comp["H"], comp["N"], comp["N_x"], comp["N_xx"]
    if perturbation is None:
        terms = [H**2 / N**2, Nx**2 / N**2, -Nxx / N, 2.0 * p.mu * H / N]
    else:
        u = H / N + np.asarray(perturbation, dtype=float)
        terms = [u**2, Nx**2 / N**2, -Nxx / N, 2.0 * p.mu * u]
    return Residual(np.sum(terms, axis=0), _scale(terms))


def pde_residual(
    eqn: HierarchyEquation,
    solution: ExactSolution,
    t: float,
    grid: Grid,
    mu: float,
    derivatives: str = "exact",
    noise_floor: float | None = None,
) -> Residual:
    """``u_t - F[u]`` for a closed-form solution on ``grid``.

    ``derivatives="exact"`` takes the x-jets from the closed form itself
    (Leibniz route); ``"spectral"`` differentiates the samples.  The time
    derivative is always analytic.
    """
    if derivatives == "exact":
        jets = solution.jet(t, grid.x, eqn.order)
    elif derivatives == "spectral":
        jets = derivative_jets(sample(solution, t, grid), eqn.order, noise_floor)
    else:
        raise ValueError("derivatives must be 'exact' or 'spectral'")
    ut = solution.time_derivative(t, grid.x)
    terms = [ut]
    for mono, coeff in eqn.rhs.items():
        piece = float(coeff.re) * mu**mono.mu_power
        for order, e in mono.exps:
            piece = piece * jets[order] ** e
        terms.append(np.broadcast_to(piece, ut.shape))
    field = ut - evaluate_poly(eqn.rhs, jets, mu)
    return Residual(field, _scale(terms), grid.h)


# ---------------------------------------------------------------------------
# second variation


def _linearized_coefficients(Bj, mu, alpha, beta):
    B, Bx = Bj[0], Bj[1]
    w = 2.0 * (beta**2 - alpha**2)
    c2 = 20.0 * mu * B + 10.0 * B**2 - w
    c1 = -20.0 * (mu * Bx + B * Bx)
    c0 = (
        -10.0 * Bx**2
        + 120.0 * mu**2 * B**2
        + 120.0 * mu * B**3
        + 30.0 * B**4
        - w * (12.0 * mu * B + 6.0 * B**2)
        + (alpha**2 + beta**2) ** 2
    )
    return c2, c1, c0


def linearized_apply(B: GridFunction, z: GridFunction, mu: float, alpha: float, beta: float) -> GridFunction:
    """``L[z] = z_4x + c2 z_xx + c1 z_x + c0 z`` with breather-dependent coefficients."""
    if B.grid != z.grid:
        raise ValueError("B and z must share a grid")
    c2, c1, c0 = _linearized_coefficients(derivative_jets(B, 1), mu, alpha, beta)
    zj = derivative_jets(z, 4)
    return GridFunction(z.grid, zj[4] + c2 * zj[2] + c1 * zj[1] + c0 * zj[0])


def quadratic_form(z: GridFunction, B: GridFunction, mu: float, alpha: float, beta: float) -> float:
    return quadrature(z * linearized_apply(B, z, mu, alpha, beta))


def bilinear_form(z1, z2, B, mu, alpha, beta) -> float:
    """Polarization of :func:`quadratic_form`."""
    return 0.25 * (
        quadratic_form(z1 + z2, B, mu, alpha, beta) - quadratic_form(z1 - z2, B, mu, alpha, beta)
    )


def weak_bilinear_form(z1, z2, B, mu, alpha, beta) -> float:
    """Integrated-by-parts form ``int z1'' z2'' - c2 z1' z2' + (c0 - c1') z1 z2``.

    Uses ``c1 = -c2'``, which holds for the coefficients above; it is
    computed independently of :func:`quadratic_form` and must match its
    polarization.
    """
    Bj = derivative_jets(B, 2)
    c2, c1, c0 = _linearized_coefficients(Bj, mu, alpha, beta)
    c1x = derivative_jets(GridFunction(B.grid, c1), 1)[1]
    a = derivative_jets(z1, 2)
    b = derivative_jets(z2, 2)
    dens = a[2] * b[2] - c2 * a[1] * b[1] + (c0 - c1x) * a[0] * b[0]
    return quadrature(GridFunction(B.grid, dens))


@dataclass(frozen=True)
class CriticalPointReport:
    eps: tuple[float, ...]
    remainders: tuple[float, ...]
    slope: float
    first_variation: float
    first_variation_direct: float
    z_norm: float
    quadratic: float

    def as_dict(self) -> dict:
        return asdict(self)


def critical_point_expansion(
    B: GridFunction,
    z: GridFunction,
    mu: float,
    w: SpectralCoefficients,
    eps_list: Sequence[float] = (1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1),
) -> CriticalPointReport:
    """Expansion of the Lyapunov functional around ``B`` in direction ``z``.

    ``remainders[i] = H[B + e z] - H[B] - e^2 Q[z]/2``; at a critical point
    these scale like ``e^3``.  ``first_variation`` is the directional
    derivative from a symmetric five-point stencil at the smallest ``e``;
    ``first_variation_direct`` is ``int G(B) z`` with ``G`` the ODE residual.
    """
    alpha, beta = w.alpha, w.beta
    eps = np.array(sorted(eps_list), dtype=float)
    H0 = lyapunov(B, mu, w)
    Q = quadratic_form(z, B, mu, alpha, beta)

    def Hs(e):
        return lyapunov(B + e * z, mu, w)

    rem = np.array([Hs(e) - H0 - 0.5 * e * e * Q for e in eps])
    mask = np.abs(rem) > 0
    slope = float(np.polyfit(np.log(eps[mask]), np.log(np.abs(rem[mask])), 1)[0]) if mask.sum() >= 2 else float("nan")

    e = eps[0]
    fv = (-Hs(2 * e) + 8 * Hs(e) - 8 * Hs(-e) + Hs(-2 * e)) / (12 * e)
    G = universal_ode_residual(B, mu, alpha, beta).field
    direct = quadrature(GridFunction(B.grid, G * z.values))
    return CriticalPointReport(
        eps=tuple(float(v) for v in eps),
        remainders=tuple(float(v) for v in rem),
        slope=slope,
        first_variation=float(fv),
        first_variation_direct=float(direct),
        z_norm=sobolev_norm(z, 2.0),
        quadratic=float(Q),
    )
