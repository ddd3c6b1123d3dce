"""Breather pairs that start close in H^s and separate at a fixed time.

The pair shares ``beta = alpha^(-2s)`` and has carriers
``alpha_{1,2} = alpha +- delta / (2 alpha^(2s))``. Because the envelope
velocities differ by ``O(delta alpha^(2n-1-2s))``, at time ``T`` the two
envelopes are many widths apart when ``s < (2n - 1)/4`` while the initial
distance stays ``O(delta)``.

Both members are exact solutions, so no PDE solve is involved. H^s norms
are translation invariant, so everything is evaluated in a window that
follows the midpoint of the two envelopes.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .closedform import Breather, BreatherParams
from .numerics import Grid, GridFunction, sobolev_norm

__all__ = [
    "GridTooSmall",
    "DeltaViolation",
    "IllposedConfig",
    "IllposedReport",
    "construct_pair",
    "default_time",
    "critical_index",
    "support_separation",
    "experiment_grid",
    "run_experiment",
    "sweep",
    "sweep_configs",
    "carrier_envelope_error",
    "MAX_POINTS",
    "DISJOINT_WIDTHS",
]

# largest grid run_experiment will allocate (2^22 doubles = 32 MB per field)
MAX_POINTS = 2**22
# envelope separation, in units of 1/beta, beyond which sech tails overlap below ~1e-10
DISJOINT_WIDTHS = 25.0
# tail allowance on each side of the pair, in units of 1/beta
TAIL_WIDTHS = 50.0
# resolved wavenumbers, as a multiple of the carrier; the third harmonic is ~(beta/alpha)^2 down
CARRIER_FACTOR = 4.0
_CHUNK = 2**18


class GridTooSmall(ValueError):
    """The box needed to hold both supports exceeds the allowed size."""


class DeltaViolation(ValueError):
    """``alpha^2 + beta^2 - 4 mu^2`` is not positive for a member of the pair."""


@dataclass(frozen=True)
class IllposedConfig:
    n: int
    s: float
    alpha: float
    delta_sep: float = 0.1
    mu: float = 0.0
    T: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if self.s < 0:
            raise ValueError("s must be nonnegative")
        if not self.delta_sep > 0:
            raise ValueError("delta_sep must be positive")
        if self.mu < 0:
            raise ValueError("mu must be nonnegative")
        if self.T is not None and self.T < 0:
            raise ValueError("T must be nonnegative")
        if not self.beta / self.alpha < 0.05:
            raise ValueError(
                f"need beta/alpha < 0.05 (carrier much faster than envelope), got {self.beta / self.alpha:.3g}"
            )

    @property
    def beta(self) -> float:
        return self.alpha ** (-2.0 * self.s)

    @property
    def time(self) -> float:
        return default_time(self) if self.T is None else self.T


def critical_index(n: int) -> float:
    return (2 * n - 1) / 4.0


def default_time(cfg: IllposedConfig, t_max: float = 100.0) -> float:
    """``T = 10 alpha^(4s - 2n + 1) / delta``, clipped at ``t_max``."""
    return min(10.0 * cfg.alpha ** (4.0 * cfg.s - 2 * cfg.n + 1) / cfg.delta_sep, t_max)


def construct_pair(cfg: IllposedConfig) -> tuple[BreatherParams, BreatherParams]:
    half = cfg.delta_sep / (2.0 * cfg.alpha ** (2.0 * cfg.s))
    out = []
    for a in (cfg.alpha + half, cfg.alpha - half):
        if a * a + cfg.beta**2 - 4.0 * cfg.mu**2 <= 1e-10:
            raise DeltaViolation(f"alpha = {a:.6g} is too small for mu = {cfg.mu:.6g}")
        out.append(BreatherParams(a, cfg.beta, cfg.mu, cfg.n))
    return out[0], out[1]


def support_separation(cfg: IllposedConfig, T: float | None = None) -> float:
    """Distance between the two envelope centres at time ``T``, in units of ``1/beta``."""
    T = cfg.time if T is None else T
    p1, p2 = construct_pair(cfg)
    return abs(p1.velocities[1] - p2.velocities[1]) * T * cfg.beta


def experiment_grid(cfg: IllposedConfig, T: float | None = None, max_points: int = MAX_POINTS) -> Grid:
    """Smallest power-of-two grid holding both supports and resolving the carriers."""
    T = cfg.time if T is None else T
    p1, _ = construct_pair(cfg)
    half_width = 0.5 * support_separation(cfg, T) / cfg.beta + TAIL_WIDTHS / cfg.beta
    xi_needed = CARRIER_FACTOR * p1.alpha
    N = 2 ** max(4, math.ceil(math.log2(2.0 * half_width * xi_needed / math.pi)))
    if N > max_points:
        raise GridTooSmall(
            f"holding both supports at T={T:.6g} needs N={N} > {max_points} points "
            f"(half width {half_width:.4g}, separation {support_separation(cfg, T):.4g} widths)"
        )
    return Grid(half_width, N)


def _comoving(p: BreatherParams, T: float, shift: float) -> BreatherParams:
    """Phases that make ``B(0, x')`` equal ``B(T, x' + shift)``.

    The carrier offset ``delta*T + shift`` can be ~1e8; it is reduced modulo
    the carrier period in exact rational arithmetic before rounding.
    """
    delta, gamma = p.velocities
    period = 2.0 * math.pi / p.alpha
    raw = Fraction(delta) * Fraction(T) + Fraction(shift)
    q = Fraction(period)
    x1 = float(raw - q * math.floor(raw / q))
    x2 = float(Fraction(gamma) * Fraction(T) + Fraction(shift))
    return p.with_(x1=x1, x2=x2)


def _sample(p: BreatherParams, grid: Grid) -> GridFunction:
    B = Breather(p)
    x = grid.x
    out = np.empty_like(x)
    for i in range(0, x.size, _CHUNK):
        out[i : i + _CHUNK] = B(0.0, x[i : i + _CHUNK])
    return GridFunction(grid, out)


@dataclass(frozen=True)
class IllposedReport:
    n: int
    s: float
    alpha: float
    beta: float
    delta_sep: float
    mu: float
    T: float
    alpha1: float
    alpha2: float
    separation_widths: float
    disjoint: bool
    critical_index: float
    L: float | None = None
    N: int | None = None
    norm1_0: float | None = None
    norm2_0: float | None = None
    norm1_T: float | None = None
    norm2_T: float | None = None
    d0: float | None = None
    dT: float | None = None
    ratio: float | None = None
    skipped: str | None = None

    def as_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)


def run_experiment(cfg: IllposedConfig, max_points: int = MAX_POINTS) -> IllposedReport:
    T = cfg.time
    p1, p2 = construct_pair(cfg)
    sep = support_separation(cfg, T)
    grid = experiment_grid(cfg, T, max_points)

    # centre the window on the envelope midpoint; at t=0 both sit at the origin
    g1, g2 = p1.velocities[1], p2.velocities[1]
    shift = -0.5 * (g1 + g2) * T
    u1_0, u2_0 = _sample(p1, grid), _sample(p2, grid)
    if T == 0:
        u1_T, u2_T = u1_0, u2_0
    else:
        u1_T, u2_T = _sample(_comoving(p1, T, shift), grid), _sample(_comoving(p2, T, shift), grid)

    tail = max(abs(u.values[0]) for u in (u1_0, u2_0, u1_T, u2_T))
    if tail > 1e-10:
        raise GridTooSmall(f"support reaches the box edge (|u| = {tail:.3g} at x = -L)")

    s = cfg.s
    d0 = sobolev_norm(u1_0 - u2_0, s)
    dT = sobolev_norm(u1_T - u2_T, s)
    return IllposedReport(
        n=cfg.n,
        s=s,
        alpha=cfg.alpha,
        beta=cfg.beta,
        delta_sep=cfg.delta_sep,
        mu=cfg.mu,
        T=T,
        alpha1=p1.alpha,
        alpha2=p2.alpha,
        separation_widths=sep,
        disjoint=sep >= DISJOINT_WIDTHS,
        critical_index=critical_index(cfg.n),
        L=grid.L,
        N=grid.N,
        norm1_0=sobolev_norm(u1_0, s),
        norm2_0=sobolev_norm(u2_0, s),
        norm1_T=sobolev_norm(u1_T, s),
        norm2_T=sobolev_norm(u2_T, s),
        d0=d0,
        dT=dT,
        ratio=dT / d0 if d0 > 0 else math.inf,
    )


def _separation_only(cfg: IllposedConfig, reason: str) -> IllposedReport:
    p1, p2 = construct_pair(cfg)
    sep = support_separation(cfg)
    return IllposedReport(
        n=cfg.n,
        s=cfg.s,
        alpha=cfg.alpha,
        beta=cfg.beta,
        delta_sep=cfg.delta_sep,
        mu=cfg.mu,
        T=cfg.time,
        alpha1=p1.alpha,
        alpha2=p2.alpha,
        separation_widths=sep,
        disjoint=sep >= DISJOINT_WIDTHS,
        critical_index=critical_index(cfg.n),
        skipped=reason,
    )


def _run_or_skip(cfg: IllposedConfig, max_points: int) -> IllposedReport:
    try:
        return run_experiment(cfg, max_points)
    except GridTooSmall as exc:
        return _separation_only(cfg, str(exc))


def sweep_configs(
    n: int, s_values: Iterable[float], alphas: Iterable[float], delta_sep: float = 0.1, mu: float = 0.0, T: float | None = None
) -> list[IllposedConfig]:
    """The (s, alpha) product; a common ``T`` makes separations comparable across alpha."""
    alphas = list(alphas)
    return [IllposedConfig(n, s, a, delta_sep, mu, T) for s in s_values for a in alphas]


def sweep(configs: Iterable[IllposedConfig], max_points: int = MAX_POINTS, threads: int | None = None) -> list[IllposedReport]:
    """Run independent experiments, at most ``GHL_THREADS`` at a time.

    Configurations whose grid would be too large are reported with the
    support separation only.
    """
    configs = list(configs)
    if threads is None:
        threads = int(os.environ.get("GHL_THREADS", "1"))
    threads = max(1, threads)
    if threads == 1:
        return [_run_or_skip(c, max_points) for c in configs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda c: _run_or_skip(c, max_points), configs))


def carrier_envelope_error(p: BreatherParams, t: float, x) -> float:
    """``sup |B - 2 beta cos(alpha (x + delta t)) sech(beta (x + gamma t))| / sup |B|``."""
    x = np.asarray(x, dtype=float)
    delta, gamma = p.velocities
    B = Breather(p)(t, x)
    z = np.abs(p.beta * (x + gamma * t + p.x2))
    sech = 2.0 * np.exp(-z) / (1.0 + np.exp(-2.0 * z))
    approx = 2.0 * p.beta * np.cos(p.alpha * (x + delta * t + p.x1)) * sech
    return float(np.max(np.abs(B - approx)) / np.max(np.abs(B)))
