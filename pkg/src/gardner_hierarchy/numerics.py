"""Uniform periodic grids, Fourier differentiation, quadrature and H^s norms."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np

from .diffpoly import DiffPoly
from .hierarchy import HierarchyEquation

__all__ = [
    "Grid",
    "GridFunction",
    "GridMismatch",
    "ExactSolution",
    "spectral_derivative",
    "derivative_jets",
    "quadrature",
    "sobolev_norm",
    "CompiledPoly",
    "evaluate_poly",
    "rhs_eval",
    "sample",
    "time_derivative",
    "write_csv",
]


class GridMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    """``N`` equispaced points on ``[-L, L)``."""

    L: float
    N: int

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("half width L must be positive")
        if self.N < 16 or self.N & (self.N - 1):
            raise ValueError(f"N must be a power of two >= 16, got {self.N}")

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.N

    @cached_property
    def x(self) -> np.ndarray:
        x = -self.L + self.h * np.arange(self.N)
        x.flags.writeable = False
        return x

    @cached_property
    def xi(self) -> np.ndarray:
        """Angular wavenumbers in FFT order."""
        xi = 2.0 * np.pi * np.fft.fftfreq(self.N, d=self.h)
        xi.flags.writeable = False
        return xi

    @property
    def xi_max(self) -> float:
        return math.pi / self.h


@dataclass(frozen=True, eq=False)
class GridFunction:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.grid.N,):
            raise ValueError(f"expected {self.grid.N} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid function has non-finite samples")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, grid: Grid, fn) -> "GridFunction":
        return cls(grid, fn(grid.x))

    def _other(self, other):
        if isinstance(other, GridFunction):
            if other.grid != self.grid:
                raise GridMismatch("grid functions live on different grids")
            return other.values
        return other

    def __add__(self, other):
        return GridFunction(self.grid, self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return GridFunction(self.grid, self.values - self._other(other))

    def __mul__(self, other):
        return GridFunction(self.grid, self.values * self._other(other))

    __rmul__ = __mul__

    def __neg__(self):
        return GridFunction(self.grid, -self.values)

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))


class ExactSolution(Protocol):
    def __call__(self, t: float, x) -> np.ndarray: ...

    def time_derivative(self, t: float, x) -> np.ndarray: ...


def _symbol(grid: Grid, order: int) -> np.ndarray:
    sym = (1j * grid.xi) ** order
    if order % 2 == 1:
        sym[grid.N // 2] = 0.0
    return sym


def _filtered_fft(values: np.ndarray, noise_floor: float | None) -> np.ndarray:
    fhat = np.fft.fft(values)
    if noise_floor:
        amp = np.abs(fhat)
        fhat[amp < noise_floor * amp.max()] = 0.0
    return fhat


def spectral_derivative(f: GridFunction, order: int, noise_floor: float | None = None) -> GridFunction:
    """Apply the Fourier multiplier ``(i xi)^order``.

    ``noise_floor`` (relative to the largest Fourier amplitude) drops modes
    that only carry round-off; without it, very high orders amplify that
    round-off by ``xi_max^order``.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    if order == 0:
        return f
    fhat = _filtered_fft(f.values, noise_floor)
    return GridFunction(f.grid, np.fft.ifft(fhat * _symbol(f.grid, order)).real)


def derivative_jets(f: GridFunction, order: int, noise_floor: float | None = None) -> np.ndarray:
    """``[f, f_x, ..., f_{order x}]`` from one forward transform."""
    fhat = _filtered_fft(f.values, noise_floor)
    out = [np.asarray(f.values)]
    for j in range(1, order + 1):
        out.append(np.fft.ifft(fhat * _symbol(f.grid, j)).real)
    return np.array(out)


def quadrature(f: GridFunction) -> float:
    return float(f.grid.h * np.sum(f.values))


def sobolev_norm(f: GridFunction, s: float) -> float:
    """``sqrt(sum (1 + xi^2)^s |f_hat(xi)|^2)`` with the continuous-transform scaling.

    With ``F_k`` the raw DFT, ``int |f|^2 = (2L/N^2) sum |F_k|^2``; the weight
    is inserted mode by mode.
    """
    if s < 0:
        raise ValueError("s must be nonnegative")
    grid = f.grid
    fhat = np.fft.fft(f.values)
    weight = (1.0 + grid.xi**2) ** s
    return math.sqrt(2.0 * grid.L / grid.N**2 * float(np.sum(weight * np.abs(fhat) ** 2)))


def _ipow(base: np.ndarray, e: int) -> np.ndarray:
    out = base.copy()
    for _ in range(e - 1):
        out *= base
    return out


class CompiledPoly:
    """A real differential polynomial with ``mu`` fixed, ready for repeated evaluation."""

    def __init__(self, poly: DiffPoly, mu: float = 0.0):
        if not poly.is_real():
            raise ValueError("only real differential polynomials can be evaluated")
        self.max_order = poly.max_order
        terms = []
        for mono, coeff in poly.items():
            c = float(coeff.re) * mu**mono.mu_power
            if c != 0.0:
                terms.append((c, mono.exps))
        self.terms = terms
        self.factors = sorted({f for _, exps in terms for f in exps})

    def __call__(self, jets: Sequence[np.ndarray]) -> np.ndarray:
        if self.max_order >= len(jets):
            raise ValueError(f"need derivatives up to order {self.max_order}, got {len(jets) - 1}")
        # integer powers by repeated products; ndarray ** int goes through pow()
        powers = {}
        for o, e in self.factors:
            base = np.asarray(jets[o], dtype=float)
            prev = powers.get((o, e - 1))
            powers[(o, e)] = base if e == 1 else (prev * base if prev is not None else _ipow(base, e))
        out = np.zeros_like(np.asarray(jets[0], dtype=float))
        for c, exps in self.terms:
            if not exps:
                out += c
                continue
            acc = c * powers[exps[0]]
            for f in exps[1:]:
                acc *= powers[f]
            out += acc
        return out


def evaluate_poly(poly: DiffPoly, jets: Sequence[np.ndarray], mu: float = 0.0) -> np.ndarray:
    """Evaluate a real differential polynomial given ``jets[j] = u_{jx}``."""
    return CompiledPoly(poly, mu)(jets)


def rhs_eval(
    eqn: HierarchyEquation,
    f: GridFunction,
    mu: float,
    jets: Sequence[np.ndarray] | None = None,
    noise_floor: float | None = None,
) -> GridFunction:
    """Numerical right-hand side of ``u_t = F[u]``.

    Derivatives are spectral unless exact ``jets`` are supplied.
    """
    if jets is None:
        jets = derivative_jets(f, eqn.order, noise_floor)
    return GridFunction(f.grid, evaluate_poly(eqn.rhs, jets, mu))


def sample(solution: ExactSolution, t: float, grid: Grid) -> GridFunction:
    return GridFunction(grid, solution(t, grid.x))


def time_derivative(solution: ExactSolution, t: float, grid: Grid) -> GridFunction:
    """Analytic time derivative of a closed-form solution on the grid."""
    return GridFunction(grid, solution.time_derivative(t, grid.x))


def write_csv(f: GridFunction, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "value"])
        for x, v in zip(f.grid.x, f.values):
            w.writerow([repr(float(x)), repr(float(v))])
