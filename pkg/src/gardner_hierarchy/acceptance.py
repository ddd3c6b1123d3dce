"""The ten acceptance checks, shared by ``ghl suite`` and the test suite.

Each check returns a :class:`CriterionResult` carrying the numbers it was
judged on, so a failure can be read off the report without rerunning.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable

import numpy as np

from . import golden as gd
from .closedform import (
    Breather,
    BreatherParams,
    MKdVBreather,
    PeriodicBreather,
    PeriodicBreatherParams,
    Soliton,
    SolitonParams,
    commensurability_solve,
    periodic_velocities,
)
from .diffpoly import DiffPoly, total_derivative, weight_check
from .elliptic import elliptic_K, jacobi
from .evolve import EvolveConfig, conservation_drift, evolve
from .functionals import (
    SpectralCoefficients,
    conserved_quantities,
    critical_point_expansion,
    miura_residual,
    pde_residual,
    universal_ode_residual,
)
from .hierarchy import HierarchyEquation, gardner_rhs, lenard, lenard_operator, mkdv_rhs, velocity_pair
from .illposed import IllposedConfig, run_experiment, support_separation
from .numerics import Grid, GridFunction, sample

__all__ = ["CriterionResult", "CRITERIA", "run_criterion", "run_all", "DEFAULT_GOLDEN", "SEED"]

SEED = 20240611
DEFAULT_GOLDEN = Path(str(resources.files("gardner_hierarchy") / "data" / "printed_equations.yaml"))


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        summary = self.details.get("summary", "")
        return f"criterion {self.number:2d} [{verdict}] {self.title}: {summary} ({self.seconds:.1f}s)"

    def as_dict(self) -> dict:
        return {
            "number": self.number,
            "title": self.title,
            "passed": self.passed,
            "seconds": self.seconds,
            "details": self.details,
        }


def _rng(offset: int = 0) -> np.random.Generator:
    return np.random.default_rng(SEED + offset)


def _breather_samples(rng, count: int, n: int, t_span: float = 0.3, half_box: float = 15.0):
    """Admissible random breathers whose core stays within ``half_box`` over ``[0, t_span]``."""
    out = []
    while len(out) < count:
        a, b = rng.uniform(0.5, 1.5), rng.uniform(0.6, 1.5)
        mu = rng.uniform(0.05, 0.5)
        if a * a + b * b - 4 * mu * mu < 0.1:
            continue
        _, gamma = velocity_pair(n, a, b, mu)
        if abs(gamma) * t_span > 1.6 * half_box:
            continue
        # centre x = -gamma t - x2 sweeps symmetrically through the origin
        out.append(BreatherParams(a, b, mu, n, x1=rng.uniform(0, 2 * math.pi / a), x2=-0.5 * gamma * t_span))
    return out


def _rel(a: float, b: float, scale: float) -> float:
    return abs(a - b) / max(abs(b), scale)


def _printed_equation(golden: dict, family: str, n: int) -> HierarchyEquation:
    """The printed flow as a :class:`HierarchyEquation` (transport term removed)."""
    entry = golden[family][n]
    lhs = gd.printed_lhs(entry)
    eqn = gardner_rhs(n) if family == "gardner" else mkdv_rhs(n)
    if isinstance(entry, dict) and entry.get("transport"):
        lhs = lhs - DiffPoly.mu(2 * n) * DiffPoly.var(1) * eqn.transport
    return HierarchyEquation(n=n, rhs=-lhs, a=eqn.a, transport=eqn.transport, mkdv=eqn.mkdv)


# ---------------------------------------------------------------------------


def criterion_1(golden: dict) -> CriterionResult:
    d: dict = {}
    ok = True
    lenard_exact = [lenard(n) == gd.expression_to_poly(golden["lenard"][n], "v") for n in range(1, 5)]
    d["lenard_1_4_exact"] = lenard_exact
    ok &= all(lenard_exact)

    entry5 = golden["lenard"][5]
    printed5 = gd.expression_to_poly(entry5["text"], "v")
    diff5 = lenard(5) - printed5
    d["lenard_5_diff"] = diff5.to_text("v")
    d["lenard_5_diff_documented"] = diff5 == gd.expression_to_poly(entry5["known_diff"], "v")
    d["lenard_5_weight_10"] = weight_check(lenard(5), 2, 10)
    d["lenard_5_recursion"] = total_derivative(lenard(5)) == lenard_operator(lenard(4))
    d["printed_lenard_5_weight_10"] = weight_check(printed5, 2, 10)
    ok &= d["lenard_5_weight_10"] and d["lenard_5_recursion"] and d["lenard_5_diff_documented"]

    for family, ns in (("gardner", (1, 2, 3)), ("mkdv", (4, 5))):
        for n in ns:
            diff = gd.compare_equation(golden, family, n)
            d[f"{family}_{n}_exact"] = diff.exact
            ok &= diff.exact

    # Gardner 9th/11th: exact, or a documented diff that the residual test settles
    params = BreatherParams(1.0, 1.1, 0.3, 4, x2=0.0)
    grid = Grid(40.0, 2048)
    for n in (4, 5):
        diff = gd.compare_equation(golden, "gardner", n)
        d[f"gardner_{n}_exact"] = diff.exact
        if diff.exact:
            continue
        d[f"gardner_{n}_diff"] = diff.text()
        d[f"gardner_{n}_diff_documented"] = diff.documented
        p = params.with_(n=n)
        gen = pde_residual(gardner_rhs(n), Breather(p), 0.0, grid, p.mu).relative
        printed = pde_residual(_printed_equation(golden, "gardner", n), Breather(p), 0.0, grid, p.mu).relative
        d[f"gardner_{n}_residual_generated"] = gen
        d[f"gardner_{n}_residual_printed"] = printed
        ok &= diff.documented and gen < 1e-6 < printed

    if 6 in golden.get("mkdv", {}):
        d["mkdv_6_report_only_exact"] = gd.compare_equation(golden, "mkdv", 6).exact

    bad = [k for k, v in d.items() if v is False]
    d["summary"] = "all printed forms reproduced or typo-arbitrated" if ok else f"mismatch in {bad}"
    return CriterionResult(1, "hierarchy generation, exact", ok, d)


def _normalized_printed(golden: dict, key: str, n: int, a: float, b: float, mu: float) -> tuple[float, float]:
    """Printed high-order velocities brought to the (delta, gamma) of velocity_pair."""
    entry = golden["velocities"][key]
    vals = {"alpha": a, "beta": b, "mu": mu}
    delta_text = entry.get("corrected_delta", entry["delta"])
    dp = float(gd.evaluate_expression(delta_text, vals))
    gp = float(gd.evaluate_expression(entry["gamma"], vals))
    norm = entry.get("normalization")
    if norm is None:
        return dp, gp
    # printed value = +-Im S or -Re S with S including the transport term
    shift = float(gardner_rhs(n).transport) * mu ** (2 * n)
    sd = {"Im": -a, "-Im": a}[norm["delta"]]
    sg = {"-Re": b, "Re": -b}[norm["gamma"]]
    return dp / sd + shift, gp / sg + shift


def criterion_2(golden: dict) -> CriterionResult:
    d: dict = {}
    a2 = [int(c) for c in gardner_rhs(2).a]
    a3 = [int(c) for c in gardner_rhs(3).a]
    d["a_2"], d["a_3"] = a2, a3
    ok = a2 == golden["coefficients"][2] and a3 == golden["coefficients"][3]

    rng = _rng(2)
    worst = {}
    for key, n, mkdv in (("mkdv_9", 4, True), ("mkdv_11", 5, True), ("gardner_9", 4, False), ("gardner_11", 5, False)):
        err = 0.0
        count = 0
        while count < 100:
            a, b = rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0)
            mu = 0.0 if mkdv else rng.uniform(0.0, 1.0)
            if a * a + b * b - 4 * mu * mu <= 1e-3:
                continue
            count += 1
            scale = (a * a + b * b + mu * mu) ** n
            ours = velocity_pair(n, a, b, mu)
            theirs = _normalized_printed(golden, key, n, a, b, mu)
            err = max(err, _rel(ours[0], theirs[0], scale), _rel(ours[1], theirs[1], scale))
        worst[key] = err
        ok &= err < 1e-12
    d["max_relative_error"] = worst

    # the verbatim mKdV 9th delta (alpha^3 beta^6) is reported, not gated
    a, b = 1.3, 0.7
    printed = float(gd.evaluate_expression(golden["velocities"]["mkdv_9"]["delta"], {"alpha": a, "beta": b}))
    d["mkdv_9_delta_verbatim_error"] = _rel(velocity_pair(4, a, b)[0], printed, 1.0)
    d["summary"] = f"a_2={a2}, a_3={a3}, worst velocity error {max(worst.values()):.1e}"
    return CriterionResult(2, "coefficient extraction and velocities", ok, d)


def criterion_3() -> CriterionResult:
    d: dict = {}
    grid = Grid(40.0, 2048)
    rng = _rng(3)
    worst = {}
    for n in range(1, 6):
        for i in range(3):
            c, mu = rng.uniform(0.6, 1.4), rng.uniform(0.0, 0.5)
            v = SolitonParams(c, mu, n).speed
            p = SolitonParams(c, mu, n, x0=0.15 * v if abs(v) < 100 else 0.0)
            for t in (0.0, 0.3):
                r = pde_residual(gardner_rhs(n), Soliton(p), t, grid, mu).relative
                worst[f"soliton_n{n}"] = max(worst.get(f"soliton_n{n}", 0.0), r)
    for n in range(1, 5):
        for p in _breather_samples(rng, 3, n):
            for t in (0.0, 0.3):
                r = pde_residual(gardner_rhs(n), Breather(p), t, grid, p.mu).relative
                worst[f"breather_n{n}"] = max(worst.get(f"breather_n{n}", 0.0), r)
    sol = commensurability_solve(1.0, 1.0 / 17.0)
    pgrid = Grid(sol.period / 2.0, 1024)
    for order, n in ((5, 2), (7, 3)):
        pp = PeriodicBreatherParams(sol.alpha, 1.0, 1.0 / 17.0, sol.m, order=order)
        r = max(pde_residual(mkdv_rhs(n), PeriodicBreather(pp), t, pgrid, 0.0).relative for t in (0.0, 0.3))
        worst[f"periodic_order{order}"] = r
    # spectral cross-check on the same grid (reported; high orders hit round-off)
    p = BreatherParams(1.0, 1.1, 0.3, 1, x2=0.0)
    d["spectral_crosscheck"] = {
        f"breather_n{n}": pde_residual(gardner_rhs(n), Breather(p.with_(n=n)), 0.0, grid, p.mu, "spectral").relative
        for n in (1, 2)
    }
    d["max_relative"] = worst
    ok = all(v < 1e-6 for v in worst.values())
    d["summary"] = f"worst {max(worst, key=worst.get)} = {max(worst.values()):.1e}"
    return CriterionResult(3, "exact-solution residuals", ok, d)


def criterion_4() -> CriterionResult:
    d: dict = {}
    grid = Grid(40.0, 2048)
    alpha, beta, mu = 1.0, 1.1, 0.3
    res = {}
    for n in range(1, 5):
        B = Breather(BreatherParams(alpha, beta, mu, n))
        res[f"gardner_n{n}"] = universal_ode_residual(B.jet(0.0, grid.x, 4), mu, alpha, beta).relative
        res[f"gardner_n{n}_spectral"] = universal_ode_residual(sample(B, 0.0, grid), mu, alpha, beta).relative
    for n in range(1, 5):
        B0 = MKdVBreather(alpha, beta, n)
        res[f"mkdv_n{n}"] = universal_ode_residual(sample(B0, 0.3, grid), 0.0, alpha, beta).relative
    d["relative"] = res
    ok = all(v < 1e-7 for v in res.values())
    d["summary"] = f"worst {max(res.values()):.1e} over n=1..4 (exact and spectral), mKdV variant included"
    return CriterionResult(4, "universal fourth-order ODE", ok, d)


def criterion_5() -> CriterionResult:
    d: dict = {}
    rng = _rng(5)
    worst = 0.0
    for n in range(1, 5):
        for p in _breather_samples(rng, 1, n, t_span=1.0):
            ts = rng.uniform(0.0, 1.0, 1000)
            xs = rng.uniform(-15.0, 15.0, 1000)
            for t, x in zip(ts, xs):
                worst = max(worst, miura_residual(p, float(t), np.array([x])).relative)
    p = BreatherParams(1.0, 1.1, 0.3, 2)
    x = np.linspace(-10, 10, 1001)
    control = miura_residual(p, 0.0, x, perturbation=0.1 * np.exp(-x * x)).relative
    d["max_relative"], d["negative_control"] = worst, control
    ok = worst < 1e-9 and control > 1e-2
    d["summary"] = f"max {worst:.1e} on 4000 points, perturbed profile {control:.2e}"
    return CriterionResult(5, "Miura/Hirota identity", ok, d)


def criterion_6() -> CriterionResult:
    d: dict = {}
    grid = Grid(40.0, 2048)
    alpha, beta, mu = 1.0, 1.1, 0.3
    w = SpectralCoefficients(alpha, beta)
    times = np.linspace(0.0, 0.4, 5)
    exact_drift = {}
    for n in (1, 2):
        gamma = velocity_pair(n, alpha, beta, mu)[1]
        B = Breather(BreatherParams(alpha, beta, mu, n, x2=-0.2 * gamma))
        series = [conserved_quantities(sample(B, float(t), grid), mu, w) for t in times]
        for key in ("M", "E", "F", "H"):
            vals = np.array([s[key] for s in series])
            exact_drift[f"n{n}_{key}"] = float(np.max(np.abs(vals - vals[0])) / abs(vals[0]))
    d["exact_breather_drift"] = exact_drift
    ok = all(v < 1e-8 for v in exact_drift.values())

    egrid = Grid(120.0, 1024)
    a, b, m = 0.25, 0.25, 0.05
    ew = SpectralCoefficients(a, b)
    runs = {}
    for n in (1, 2):
        B = Breather(BreatherParams(a, b, m, n))
        u0 = sample(B, 0.0, egrid)
        cfg = EvolveConfig.auto(gardner_rhs(n), m, egrid, 1.0, u0)
        traj = evolve(cfg, u0)
        err = max(float(np.max(np.abs(cp.u.values - B(cp.t, egrid.x)))) for cp in traj)
        drift = conservation_drift(traj, m, ew)
        runs[f"n{n}"] = {"dt": cfg.dt, "steps": round(cfg.T / cfg.dt), "max_error": err, "drift": drift}
        ok &= err < 1e-6 and max(drift.values()) < 1e-8
    d["evolution"] = runs
    worst_err = max(r["max_error"] for r in runs.values())
    worst_drift = max(max(r["drift"].values()) for r in runs.values())
    d["summary"] = (
        f"exact drift {max(exact_drift.values()):.1e}; evolution error {worst_err:.1e}, drift {worst_drift:.1e}"
    )
    return CriterionResult(6, "conservation", ok, d)


def _random_direction(rng, grid: Grid) -> GridFunction:
    x = grid.x
    z = np.zeros_like(x)
    for _ in range(3):
        x0, width = rng.uniform(-4, 4), rng.uniform(0.7, 2.0)
        coeffs = rng.normal(size=3)
        s = (x - x0) / width
        z += (coeffs[0] + coeffs[1] * s + coeffs[2] * s * s) * np.exp(-s * s)
    return GridFunction(grid, z)


def criterion_7() -> CriterionResult:
    d: dict = {}
    grid = Grid(40.0, 2048)
    alpha, beta, mu = 1.0, 1.1, 0.3
    w = SpectralCoefficients(alpha, beta)
    B = sample(Breather(BreatherParams(alpha, beta, mu, 1)), 0.0, grid)
    rng = _rng(7)
    reports = [critical_point_expansion(B, _random_direction(rng, grid), mu, w) for _ in range(5)]
    fv = [abs(r.first_variation) / r.z_norm for r in reports]
    slopes = [r.slope for r in reports]
    control_profile = GridFunction(grid, 1.5 / np.cosh(grid.x))
    control = critical_point_expansion(control_profile, _random_direction(rng, grid), mu, w)
    d["first_variation_over_norm"] = fv
    d["first_variation_direct"] = [r.first_variation_direct for r in reports]
    d["slopes"] = slopes
    d["negative_control_first_variation_over_norm"] = abs(control.first_variation) / control.z_norm
    ok = max(fv) < 1e-6 and all(abs(s - 3.0) <= 0.1 for s in slopes) and d["negative_control_first_variation_over_norm"] > 1e-2
    d["summary"] = (
        f"max |dH|/|z| {max(fv):.1e}, slopes {min(slopes):.3f}..{max(slopes):.3f}, "
        f"control {d['negative_control_first_variation_over_norm']:.2f}"
    )
    return CriterionResult(7, "critical point expansion", ok, d)


# a common T for the whole sweep, so the envelope separation grows like alpha^(2n-1-4s)
ILLPOSED_T = 0.1


def criterion_8() -> CriterionResult:
    d: dict = {}
    reports = [run_experiment(IllposedConfig(2, 0.5, a, 0.1, 0.0, ILLPOSED_T)) for a in (20.0, 40.0, 80.0)]
    d["runs"] = [
        {k: r.as_dict()[k] for k in ("alpha", "T", "separation_widths", "d0", "dT", "ratio", "N")} for r in reports
    ]
    ratios = [r.ratio for r in reports]
    ok = all(r.d0 <= 0.5 for r in reports) and all(q >= 10 for q in ratios)
    ok &= all(b >= a for a, b in zip(ratios, ratios[1:]))
    # above the critical index the envelopes barely move apart
    d["above_threshold_separation_widths"] = [
        support_separation(IllposedConfig(2, 1.25, a, 0.1, 0.0, ILLPOSED_T)) for a in (20.0, 40.0, 80.0)
    ]
    d["note"] = "trend at desk scale (alpha in 20..80, fixed T), not the asymptotic limit"
    d["summary"] = (
        "ratios " + ", ".join(f"{q:.2f}" for q in ratios) + f" at alpha=20,40,80 (T={ILLPOSED_T}); "
        + "d0 " + ", ".join(f"{r.d0:.3f}" for r in reports) + "; trend only, not a limit"
    )
    return CriterionResult(8, "ill-posedness trend", ok, d)


def criterion_9() -> CriterionResult:
    d: dict = {}
    d["K0_error"] = abs(elliptic_K(0.0) - math.pi / 2)
    rng = _rng(9)
    worst = 0.0
    for _ in range(20):
        param = float(rng.uniform(0.0, 0.999))
        u = rng.uniform(-20, 20, 200)
        sn, cn, dn, nd = jacobi(u, param)
        worst = max(
            worst,
            float(np.max(np.abs(sn**2 + cn**2 - 1))),
            float(np.max(np.abs(dn**2 + param * sn**2 - 1))),
            float(np.max(np.abs(dn * nd - 1))),
        )
    d["jacobi_identity_error"] = worst
    sol = commensurability_solve(1.0, 1.0 / 17.0)
    d["alpha_error"] = abs(sol.alpha - 2.0)
    d["m_error"] = abs(sol.m - 1.0 / 17.0)
    L1 = 4.0 * elliptic_K(1.0 / 17.0) / sol.alpha
    L2 = 2.0 * elliptic_K(sol.m) / 1.0
    d["period_mismatch"] = abs(L1 - L2)
    ok = d["K0_error"] < 1e-14 and worst < 1e-12 and d["alpha_error"] < 1e-12 and d["m_error"] < 1e-12
    ok &= d["period_mismatch"] < 1e-12
    d["summary"] = (
        f"K(0) err {d['K0_error']:.0e}, identities {worst:.0e}, alpha err {d['alpha_error']:.0e}, "
        f"m err {d['m_error']:.0e}, periods {d['period_mismatch']:.0e}"
    )
    return CriterionResult(9, "elliptic layer", ok, d)


def criterion_10(golden: dict) -> CriterionResult:
    d: dict = {}
    # exact: substitute k=0, m=1 into the printed periodic velocities with rational alpha, beta
    exact = True
    for order, key in ((5, "mkdv_5"), (7, "mkdv_7")):
        for a, b in ((Fraction(3, 2), Fraction(2, 3)), (Fraction(1), Fraction(5, 7)), (Fraction(7, 3), Fraction(1, 4))):
            vals = {"alpha": a, "beta": b, "k": Fraction(0), "m": Fraction(1), "mu": Fraction(0)}
            for which in ("delta", "gamma"):
                per = gd.evaluate_expression(golden["periodic_velocities"][order][which], vals)
                non = gd.evaluate_expression(golden["velocities"][key][which], vals)
                exact &= per == non
    d["printed_exact_substitution"] = exact

    rng = _rng(10)
    worst = 0.0
    for _ in range(50):
        a, b = rng.uniform(0.3, 2.0), rng.uniform(0.3, 2.0)
        for order, n in ((5, 2), (7, 3)):
            per = periodic_velocities(order, a, b, 0.0, 1.0)
            non = velocity_pair(n, a, b, 0.0)
            scale = (a * a + b * b) ** n
            worst = max(worst, _rel(per[0], non[0], scale), _rel(per[1], non[1], scale))
    d["numeric_max_relative"] = worst

    x = np.linspace(-20, 20, 4001)
    limit = 0.0
    for n in range(1, 5):
        for t in (0.0, 0.2):
            g = Breather(BreatherParams(1.0, 1.1, 1e-6, n))(t, x)
            m = MKdVBreather(1.0, 1.1, n)(t, x)
            limit = max(limit, float(np.max(np.abs(g - m))))
    d["mu_to_zero_sup_difference"] = limit
    ok = exact and worst < 1e-14 and limit < 1e-4
    d["summary"] = f"exact substitution {exact}, numeric {worst:.0e}, mu=1e-6 vs mKdV {limit:.1e}"
    return CriterionResult(10, "degeneration chain", ok, d)


CRITERIA: dict[int, tuple[Callable, bool]] = {
    1: (criterion_1, True),
    2: (criterion_2, True),
    3: (criterion_3, False),
    4: (criterion_4, False),
    5: (criterion_5, False),
    6: (criterion_6, False),
    7: (criterion_7, False),
    8: (criterion_8, False),
    9: (criterion_9, False),
    10: (criterion_10, True),
}


def run_criterion(number: int, golden: dict | None = None) -> CriterionResult:
    fn, needs_golden = CRITERIA[number]
    start = time.perf_counter()
    if needs_golden:
        if golden is None:
            golden = gd.load_golden(DEFAULT_GOLDEN)
        result = fn(golden)
    else:
        result = fn()
    result.seconds = time.perf_counter() - start
    return result


def run_all(golden: dict | None = None, numbers=None) -> list[CriterionResult]:
    if golden is None and any(CRITERIA[k][1] for k in (numbers or CRITERIA)):
        golden = gd.load_golden(DEFAULT_GOLDEN)
    return [run_criterion(k, golden) for k in (numbers or sorted(CRITERIA))]
