"""Verification suites behind the `verify-all` command.

Each suite bundles the invariants of one module into seeded, deterministic
checks. A run writes one JSON report per suite, a delimited summary, a
coverage manifest mapping every invariant to the check that exercised it,
and (unless disabled) one rendered figure per suite.
"""

from __future__ import annotations

import sys
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import bol, bubble, meanfield, onsager, quadrature, rearrange
from .bubble import BubbleParams
from .profiles import RadialProfile, radial_grid
from .reporting import format_float, to_json_text

ALPHAS = (0.0, 0.25, 0.5, 0.75)


@dataclass
class SuiteConfig:
    seed: int = 7
    out_dir: Path = Path("reports")
    fmt: str = "csv"
    corpus_size: int = 500
    quadrature_tol: float = 1e-10
    figures: bool = True
    corpus_nodes: int = 1200

    def __post_init__(self) -> None:
        self.out_dir = Path(self.out_dir)
        if self.fmt not in ("csv", "json"):
            raise ValueError("format must be 'csv' or 'json'")


@dataclass
class CheckResult:
    check_id: str
    passed: bool
    detail: str
    worst: float
    report: dict | None = None


@dataclass
class Check:
    suite: str
    check_id: str
    description: str
    fn: Callable[[SuiteConfig, np.random.Generator], CheckResult]


CHECKS: list[Check] = []


def _register(suite: str, check_id: str, description: str):
    def wrap(fn):
        CHECKS.append(Check(suite, check_id, description, fn))
        return fn

    return wrap


def _result(check_id: str, passed: bool, detail: str, worst: float,
            report: dict | None = None) -> CheckResult:
    return CheckResult(check_id, bool(passed), detail, float(worst), report)


# ----------------------------------------------------------------- bubble

_LAMBDA_GRID = np.geomspace(0.3, 8.0, 10)
_RESIDUAL_ALPHAS = (0.0, 0.25, 0.5, 0.9)


@_register("bubble", "bubble/residual-analytic",
           "closed-form derivatives satisfy the defining equation to 1e-12")
def _check_residual_analytic(config, rng):
    worst = 0.0
    for lam in _LAMBDA_GRID:
        for alpha in _RESIDUAL_ALPHAS:
            worst = max(worst, bubble.bubble_residual(BubbleParams(lam, alpha)))
    return _result("bubble/residual-analytic", worst < 1e-12,
                   f"max scaled residual {worst:.3e}", worst)


@_register("bubble", "bubble/residual-fd",
           "4th-order finite differences reproduce the equation to 1e-6")
def _check_residual_fd(config, rng):
    nodes = radial_grid(1e-4, 10.0, 4000)
    worst = 0.0
    for lam in _LAMBDA_GRID:
        for alpha in _RESIDUAL_ALPHAS:
            worst = max(
                worst, bubble.bubble_residual(BubbleParams(lam, alpha), nodes, "fd")
            )
    return _result("bubble/residual-fd", worst < 1e-6,
                   f"max scaled fd residual {worst:.3e}", worst)


@_register("bubble", "bubble/mass-quadrature",
           "closed-form mass against adaptive quadrature (1e-10 smooth, 1e-6 singular)")
def _check_mass_quadrature(config, rng):
    worst_smooth = worst_singular = 0.0
    for lam in _LAMBDA_GRID:
        for alpha in _RESIDUAL_ALPHAS:
            p = BubbleParams(lam, alpha)
            closed = bubble.bubble_mass(p, 1.0)
            quad = quadrature.annulus_integral(
                rearrange.bubble_measure(p), 0.0, 1.0, config.quadrature_tol
            )
            rel = abs(quad - closed) / closed
            if alpha == 0.0:
                worst_smooth = max(worst_smooth, rel)
            else:
                worst_singular = max(worst_singular, rel)
    passed = worst_smooth < 1e-10 and worst_singular < 1e-6
    return _result("bubble/mass-quadrature", passed,
                   f"alpha=0 rel {worst_smooth:.3e}, singular rel {worst_singular:.3e}",
                   max(worst_smooth, worst_singular))


@_register("bubble", "bubble/mass-monotone-lambda",
           "mass is strictly increasing in the scale and bounded by the total")
def _check_mass_monotone(config, rng):
    ok = True
    for alpha in ALPHAS:
        for R in (0.5, 1.0, 2.0):
            lams = np.geomspace(0.05, 50.0, 100)
            masses = np.array([bubble.bubble_mass(BubbleParams(l, alpha), R) for l in lams])
            ok &= bool(np.all(np.diff(masses) > 0.0))
            ok &= bool(np.all(masses < bubble.total_mass(alpha)))
    return _result("bubble/mass-monotone-lambda", ok, "100-point grids, 12 cases", 0.0)


@_register("bubble", "bubble/pair-mass-sum",
           "paired-scale masses sum to 8*pi*(1-alpha); boundary values match")
def _check_pair_mass_sum(config, rng):
    worst_sum = worst_bnd = 0.0
    for lam in np.geomspace(0.1, 20.0, 10):
        for alpha in ALPHAS:
            for R in (0.5, 1.0, 2.0):
                lam2 = bubble.pair_lambda(lam, alpha, R)
                total = bubble.total_mass(alpha)
                s = (bubble.bubble_mass(BubbleParams(lam, alpha), R)
                     + bubble.bubble_mass(BubbleParams(lam2, alpha), R))
                worst_sum = max(worst_sum, abs(s - total) / total)
                b1 = bubble.eval_bubble(BubbleParams(lam, alpha), R)
                b2 = bubble.eval_bubble(BubbleParams(lam2, alpha), R)
                worst_bnd = max(worst_bnd, abs(b1 - b2))
    passed = worst_sum < 1e-10 and worst_bnd < 1e-12
    return _result("bubble/pair-mass-sum", passed,
                   f"120 triples: sum rel {worst_sum:.3e}, boundary {worst_bnd:.3e}",
                   worst_sum)


@_register("bubble", "bubble/bol-equality",
           "boundary root integral squared equals the mass form exactly on bubbles")
def _check_bol_equality_closed(config, rng):
    worst = 0.0
    for lam in np.geomspace(0.2, 10.0, 8):
        for alpha in ALPHAS:
            for R in (0.5, 1.0, 2.0):
                p = BubbleParams(lam, alpha)
                lhs = bubble.boundary_root_integral(p, R) ** 2
                m = bubble.bubble_mass(p, R)
                rhs = 0.5 * m * (bubble.total_mass(alpha) - m)
                worst = max(worst, abs(lhs - rhs) / lhs)
    return _result("bubble/bol-equality", worst < 1e-9,
                   f"max rel gap {worst:.3e}", worst)


@_register("bubble", "bubble/pair-ordering",
           "the larger paired scale dominates pointwise inside the matching circle")
def _check_pair_ordering(config, rng):
    ok = True
    r = np.geomspace(1e-4, 1.0, 200)[:-1]
    for lam in (0.5, 1.0, 2.0):
        for alpha in ALPHAS:
            lam2 = bubble.pair_lambda(lam, alpha, 1.0)
            lo, hi = min(lam, lam2), max(lam, lam2)
            diff = (bubble.eval_bubble(BubbleParams(hi, alpha), r)
                    - bubble.eval_bubble(BubbleParams(lo, alpha), r))
            ok &= bool(np.all(diff > 0.0))
    return _result("bubble/pair-ordering", ok, "pointwise on (0, R), 12 cases", 0.0)


# -------------------------------------------------------------- quadrature

@_register("quadrature", "quadrature/invert-round-trip",
           "invert_mass returns the tabulated radii at the tabulated masses")
def _check_invert_round_trip(config, rng):
    worst = 0.0
    radii = radial_grid(1e-3, 2.0, 60)
    densities = [
        rearrange.lebesgue_measure(),
        rearrange.bubble_measure(BubbleParams(2.0, 0.0)),
        rearrange.bubble_measure(BubbleParams(1.0, 0.5)),
    ]
    for w in densities:
        table = quadrature.cumulative_mass_table(w, radii, config.quadrature_tol)
        back = quadrature.invert_mass(table, table.masses)
        worst = max(worst, float(np.max(np.abs(back - radii) / radii)))
    return _result("quadrature/invert-round-trip", worst < 1e-9,
                   f"max rel radius error {worst:.3e}", worst)


@_register("quadrature", "quadrature/additivity",
           "annulus masses add across a split radius")
def _check_additivity(config, rng):
    worst = 0.0
    for w in (rearrange.bubble_measure(BubbleParams(2.0, 0.25)),
              rearrange.lebesgue_measure()):
        for (r0, r1, r2) in ((0.0, 0.3, 1.0), (0.1, 0.7, 2.5)):
            a = quadrature.annulus_integral(w, r0, r1, config.quadrature_tol)
            b = quadrature.annulus_integral(w, r1, r2, config.quadrature_tol)
            c = quadrature.annulus_integral(w, r0, r2, config.quadrature_tol)
            worst = max(worst, abs(a + b - c) / c)
    passed = worst < max(10.0 * config.quadrature_tol, 1e-12)
    return _result("quadrature/additivity", passed, f"max rel gap {worst:.3e}", worst)


@_register("quadrature", "quadrature/polynomial-exactness",
           "weighted polynomial densities integrate to their antiderivatives")
def _check_polynomial_exactness(config, rng):
    # d(r) = r^(2*alpha) p(r^2): the substituted integrand is polynomial in s
    worst = 0.0
    for alpha, coeffs in ((0.5, (1.0, -0.3, 0.02)), (0.25, (2.0, 0.5, 0.0))):
        a = 1.0 - alpha

        def density(r, c=coeffs):
            r2 = r * r
            return r ** (2.0 * alpha) * (c[0] + c[1] * r2 + c[2] * r2 * r2)

        w = quadrature.WeightedRadialDensity(alpha, density)
        R = 1.3
        # closed form: 2*pi int r^(1-2a)*r^(2a) p(r^2) dr = 2*pi int r p(r^2) dr
        c0, c1, c2 = coeffs
        closed = 2.0 * np.pi * (c0 * R**2 / 2 + c1 * R**4 / 4 + c2 * R**6 / 6)
        val = quadrature.annulus_integral(w, 0.0, R, config.quadrature_tol)
        worst = max(worst, abs(val - closed) / abs(closed))
    return _result("quadrature/polynomial-exactness", worst < 1e-12,
                   f"max rel error {worst:.3e}", worst)


# --------------------------------------------------------------- rearrange

def schwarz_oracle_profile(grid: rearrange.CellGrid2D) -> tuple[np.ndarray, np.ndarray]:
    """Brute-force cell sort: descending values with cumulative source masses."""
    phi = grid.phi.ravel()
    mass = grid.mass.ravel()
    keep = mass > 0.0
    phi, mass = phi[keep], mass[keep]
    order = np.argsort(-phi, kind="stable")
    return phi[order], np.cumsum(mass[order])


def _schwarz_case(n: int, target: BubbleParams):
    f = lambda x, y: 1.0 - np.hypot(x - 0.1003, y - 0.0707)
    grid = rearrange.CellGrid2D.from_function(f, n=n)
    pair = rearrange.MeasurePair(None, target)
    star = rearrange.rearrange_two_measures(grid, pair)
    report = rearrange.equimeasurability_report(grid, star, pair)
    return grid, star, report


@_register("rearrange", "rearrange/identity-transport",
           "source equal to target transports every node onto itself")
def _check_identity_transport(config, rng):
    p = BubbleParams(2.0, 0.0)
    nodes = radial_grid(1e-4, 1.0, 400)
    values = (bubble.eval_bubble(BubbleParams(4.0, 0.0), nodes)
              - bubble.eval_bubble(p, nodes))
    phi = RadialProfile(nodes, values, np.log(4.0))
    pair = rearrange.MeasurePair(rearrange.bubble_measure(p), p)
    star = rearrange.rearrange_two_measures(phi, pair)
    worst = max(float(np.max(np.abs(star.nodes - nodes) / nodes)),
                float(np.max(np.abs(star.values - values))))
    rep = rearrange.equimeasurability_report(phi, star, pair)
    passed = worst < 1e-9 and rep.passed
    return _result("rearrange/identity-transport", passed,
                   f"node error {worst:.3e}, equimeasurability {rep.deficit:.3e}",
                   worst, rep.to_dict())


@_register("rearrange", "rearrange/schwarz-oracle",
           "2-d transport agrees with the brute-force cell sort at one cell mass")
def _check_schwarz_oracle(config, rng):
    target = BubbleParams(2.0, 0.0)
    grid, star, report = _schwarz_case(64, target)
    phi_sorted, cum = schwarz_oracle_profile(grid)
    # library mass profile at the oracle's jump levels must match the oracle
    dist = rearrange.distribution_function(grid)
    worst = 0.0
    for k in range(0, phi_sorted.size, 37):
        t = phi_sorted[k]
        lib = float(np.asarray(dist(t)))
        oracle = float(cum[np.searchsorted(-phi_sorted, -t, side="right") - 1])
        worst = max(worst, abs(lib - oracle) / cum[-1])
    cell_mass = grid.mass.max() / cum[-1]
    passed = worst <= cell_mass and report.deficit < 2.0 / 64
    return _result("rearrange/schwarz-oracle", passed,
                   f"lib-vs-oracle {worst:.3e} (cell {cell_mass:.3e}), "
                   f"report {report.deficit:.3e}", worst, report.to_dict())


@_register("rearrange", "rearrange/monotone-output",
           "rearranged profiles are nonincreasing in radius")
def _check_monotone_output(config, rng):
    target = BubbleParams(2.0, 0.0)
    ok = True
    _, star, _ = _schwarz_case(32, target)
    ok &= bool(np.all(np.diff(star.values) <= 0.0))
    nodes = radial_grid(1e-3, 1.0, 300)
    for _ in range(5):
        c = rng.uniform(0.5, 2.0)
        values = np.cos(nodes * rng.uniform(1.0, 3.0)) - c * nodes
        phi = RadialProfile(nodes, values, float(values[0]))
        pair = rearrange.MeasurePair(rearrange.lebesgue_measure(), target)
        star = rearrange.rearrange_two_measures(phi, pair)
        ok &= bool(np.all(np.diff(star.values) <= 0.0))
    return _result("rearrange/monotone-output", ok, "2-d and 5 radial cases", 0.0)


@_register("rearrange", "rearrange/mass-conservation",
           "the rearranged support carries the whole source mass")
def _check_mass_conservation(config, rng):
    target = BubbleParams(2.0, 0.0)
    nodes = radial_grid(1e-3, 1.0, 300)
    phi = RadialProfile(nodes, 1.0 - nodes, 1.0)
    w = rearrange.lebesgue_measure()
    pair = rearrange.MeasurePair(w, target)
    star = rearrange.rearrange_two_measures(phi, pair)
    total_src = quadrature.annulus_integral(w, 0.0, float(nodes[-1]), 1e-12)
    total_star = bubble.bubble_mass(target, float(star.nodes[-1]))
    worst = abs(total_star - total_src) / total_src
    return _result("rearrange/mass-conservation", worst < 1e-9,
                   f"rel mass gap {worst:.3e}", worst)


@_register("rearrange", "rearrange/order-preservation",
           "pointwise-ordered inputs rearrange to pointwise-ordered outputs")
def _check_order_preservation(config, rng):
    target = BubbleParams(2.0, 0.0)
    nodes = radial_grid(1e-3, 1.0, 200)
    w = rearrange.lebesgue_measure()
    ok = True
    for _ in range(8):
        base = np.cos(nodes * rng.uniform(1.0, 4.0)) - rng.uniform(0.8, 1.5) * nodes
        bump = rng.uniform(0.0, 0.5, size=3)
        upper = base + bump[0] + bump[1] * np.exp(-((nodes - 0.5) ** 2) * 8.0)
        lo = rearrange.rearrange_two_measures(
            RadialProfile(nodes, base, float(base[0])),
            rearrange.MeasurePair(w, target))
        hi = rearrange.rearrange_two_measures(
            RadialProfile(nodes, upper, float(upper[0])),
            rearrange.MeasurePair(w, target))
        shared = np.geomspace(max(lo.r_min, hi.r_min), min(lo.r_max, hi.r_max), 150)
        ok &= bool(np.all(hi.value_at(shared) >= lo.value_at(shared) - 1e-9))
    return _result("rearrange/order-preservation", ok, "8 random ordered pairs", 0.0)


@_register("rearrange", "rearrange/first-order-decay",
           "2-d equimeasurability error decays at first order in the grid")
def _check_first_order_decay(config, rng):
    target = BubbleParams(2.0, 0.0)
    reports = {}
    for n in (32, 64, 128):
        _, _, report = _schwarz_case(n, target)
        reports[n] = report.deficit
    ok = all(reports[n] < 2.0 / n for n in reports)
    ratios = [reports[32] / reports[64], reports[64] / reports[128]]
    ok &= all(1.5 <= r <= 2.5 for r in ratios)
    return _result("rearrange/first-order-decay", ok,
                   f"errors {reports}, halving ratios {[round(r, 2) for r in ratios]}",
                   max(reports.values()))


@_register("rearrange", "rearrange/gradient-level",
           "level-by-level boundary gradients match in the equality configuration")
def _check_gradient_level(config, rng):
    p = BubbleParams(2.0, 0.0)
    pair = rearrange.MeasurePair(rearrange.bubble_measure(p), p)
    nodes = radial_grid(1e-4, 1.0, 4000)
    phi = RadialProfile(nodes, 1.0 - nodes, 1.0)
    rep = rearrange.gradient_level_check(phi, pair)
    shifted = RadialProfile(nodes, 3.0 - nodes, 3.0)
    rep2 = rearrange.gradient_level_check(shifted, pair)
    worst = max(abs(rep.deficit), abs(rep2.deficit))
    return _result("rearrange/gradient-level", worst < 1e-6,
                   f"worst signed gap {worst:.3e}", worst, rep.to_dict())


# --------------------------------------------------------------------- bol

def run_bol_corpus(config: SuiteConfig, rng: np.random.Generator):
    """Seeded interior and exterior corpora; returns per-profile summaries."""
    rows = []
    per_alpha = config.corpus_size
    for alpha in ALPHAS:
        for k in range(per_alpha):
            seed = int(rng.integers(0, 2**31))
            kind = ("equality", "shift", "subunit")[k % 3]
            if kind == "equality":
                adm = bol.generate_test_profile(seed=seed, alpha=alpha, mode="shift",
                                                c=0.0, n=config.corpus_nodes)
            elif kind == "shift":
                adm = bol.generate_test_profile(seed=seed, alpha=alpha, mode="shift",
                                                n=config.corpus_nodes)
            else:
                adm = bol.generate_test_profile(seed=seed, alpha=alpha,
                                                mode="subunit-curvature",
                                                n=config.corpus_nodes)
            rep = bol.bol_deficit_interior(adm)
            rows.append({"side": "interior", "alpha": alpha, "kind": kind,
                         "deficit": rep.deficit, "tolerance": rep.tolerance,
                         "verdict": rep.verdict})
            lam = bubble.critical_lambda(alpha, 1.0) * float(np.exp(rng.uniform(-1.2, 0.6)))
            c = 0.0 if kind == "equality" else float(rng.uniform(0.05, 0.8))
            prof, tail = bol.exterior_shift_profile(lam, alpha, 1.0, c,
                                                    n=config.corpus_nodes)
            repe = bol.bol_deficit_exterior(prof, alpha, tail_mass=tail)
            rows.append({"side": "exterior", "alpha": alpha, "kind": kind,
                         "deficit": repe.deficit, "tolerance": repe.tolerance,
                         "verdict": repe.verdict})
    return rows


@_register("bol", "bol/interior-corpus",
           "interior deficit >= -tolerance across the seeded admissible corpus")
def _check_interior_corpus(config, rng):
    rows = run_bol_corpus(config, rng)
    interior = [r for r in rows if r["side"] == "interior"]
    worst_int = min(r["deficit"] / r["tolerance"] for r in interior)
    _CORPUS_CACHE["rows"] = rows
    passed = worst_int >= -1.0 and not any(r["verdict"] == "fail" for r in interior)
    return _result("bol/interior-corpus", passed,
                   f"{len(interior)} profiles, worst deficit/tol {worst_int:.3f}",
                   worst_int)


_CORPUS_CACHE: dict = {}


@_register("bol", "bol/exterior-corpus",
           "exterior deficit <= +tolerance across the mirrored corpus")
def _check_exterior_corpus(config, rng):
    rows = _CORPUS_CACHE.get("rows") or run_bol_corpus(config, rng)
    exterior = [r for r in rows if r["side"] == "exterior"]
    worst = max(r["deficit"] / r["tolerance"] for r in exterior)
    passed = worst <= 1.0 and not any(r["verdict"] == "fail" for r in exterior)
    return _result("bol/exterior-corpus", passed,
                   f"{len(exterior)} profiles, worst deficit/tol {worst:.3f}", worst)


@_register("bol", "bol/equality-iff-bubble",
           "deficit within tolerance exactly on the bubble subfamily, both directions")
def _check_equality_iff(config, rng):
    rows = _CORPUS_CACHE.get("rows") or run_bol_corpus(config, rng)
    eq_bad = [r for r in rows if r["kind"] == "equality" and r["verdict"] != "equality"]
    ne_bad = [r for r in rows if r["kind"] != "equality"
              and abs(r["deficit"]) <= r["tolerance"]]
    passed = not eq_bad and not ne_bad
    return _result("bol/equality-iff-bubble", passed,
                   f"{len(eq_bad)} false equalities, {len(ne_bad)} missed strict cases",
                   float(len(eq_bad) + len(ne_bad)))


@_register("bol", "bol/shifted-closed-form",
           "shifted-bubble deficit matches (1/2) M0^2 e^c (e^c - 1)")
def _check_shifted_closed_form(config, rng):
    worst = 0.0
    for c in (0.05, 0.1, 0.5):
        adm = bol.generate_test_profile(seed=11, alpha=0.0, mode="shift",
                                        lam=2.0, c=c)
        rep = bol.bol_deficit_interior(adm)
        m0 = bubble.bubble_mass(BubbleParams(2.0, 0.0), 1.0)
        expected = 0.5 * m0**2 * np.exp(c) * (np.exp(c) - 1.0)
        worst = max(worst, abs(rep.deficit - expected) / expected)
    return _result("bol/shifted-closed-form", worst < 1e-6,
                   f"max rel gap {worst:.3e}", worst)


@_register("bol", "bol/mass-alternative",
           "boundary-matched admissible masses never land between the paired bubbles")
def _check_mass_alternative(config, rng):
    branches = {"low": 0, "high": 0, "between": 0}
    skipped = 0
    for k in range(200):
        seed = int(rng.integers(0, 2**31))
        alpha = ALPHAS[k % 4]
        lam_star = bubble.critical_lambda(alpha, 1.0)
        lam = lam_star * float(np.exp(rng.uniform(-1.5, -0.3)))
        if k % 2 == 0:
            adm = bol.generate_test_profile(seed=seed, alpha=alpha, mode="shift",
                                            lam=lam, c=0.0)
            branch = bol.mass_alternative(adm, lam)
        else:
            adm = bol.generate_test_profile(
                seed=seed, alpha=alpha, mode="subunit-curvature", lam=lam)
            boundary = adm.profile.values[-1]
            try:
                lam1, _ = bubble.lambdas_from_boundary(boundary, alpha, 1.0)
            except ValueError:
                # boundary value above every bubble's: no matched pair exists
                skipped += 1
                continue
            branch = bol.mass_alternative(adm, lam1, boundary_tol=1e-6)
        branches[branch] += 1
    passed = branches["between"] == 0 and skipped < 50
    return _result("bol/mass-alternative", passed,
                   f"branches {branches}, {skipped} unmatched draws",
                   float(branches["between"]))


@_register("bol", "bol/exterior-sandwich",
           "intermediate exterior profiles sit between the paired bubble masses")
def _check_sandwich(config, rng):
    ok = True
    for theta in (0.0, 0.25, 0.5, 0.75, 1.0):
        for alpha in (0.0, 0.5):
            prof, tail, l1, l2 = bol.exterior_between_profile(1.2, alpha, 1.0, theta)
            lo, up = bol.exterior_sandwich(prof, l1, l2, alpha, tail_mass=tail)
            ok &= lo.passed and up.passed
            if 0.0 < theta < 1.0:
                ok &= lo.deficit > lo.tolerance and up.deficit < -up.tolerance
    return _result("bol/exterior-sandwich", ok, "theta grid with strictness", 0.0)


@_register("bol", "bol/boundary-comparison",
           "equal-mass profiles sit above the bubble on the boundary circle")
def _check_boundary_comparison(config, rng):
    p = BubbleParams(2.0, 0.25)
    adm = bol.generate_test_profile(seed=3, alpha=0.25, mode="shift",
                                    lam=2.0, c=0.0)
    eq = bol.boundary_comparison(adm, 2.0)
    ok = eq.verdict == "equality"
    for seed in (5, 6, 7):
        gen = bol.generate_test_profile(seed=seed, alpha=0.25,
                                        mode="subunit-curvature")
        mass = gen.masses[-1]
        # match the bubble's mass to the generated profile's by scale choice
        lam_match = np.sqrt(8.0 * (mass / (bubble.total_mass(0.25) - mass)))
        rep = bol.boundary_comparison(gen, float(lam_match))
        ok &= rep.passed and rep.deficit > rep.tolerance
    return _result("bol/boundary-comparison", ok, "equality plus 3 strict cases", 0.0)


@_register("bol", "bol/covering-grid",
           "paired-bubble covering deficit vanishes; perturbed pairs are strict")
def _check_covering_grid(config, rng):
    worst = 0.0
    for lam in np.geomspace(0.2, 10.0, 10):
        for alpha in ALPHAS:
            for R in (0.5, 1.0, 2.0):
                lam2 = bubble.pair_lambda(lam, alpha, R)
                m1 = bubble.bubble_mass(BubbleParams(lam, alpha), R)
                m2 = bubble.bubble_mass(BubbleParams(lam2, alpha), R)
                rep = bol.covering_deficit(m1, m2, alpha)
                worst = max(worst, abs(rep.deficit) / rep.rhs)
                if rep.verdict != "equality":
                    return _result("bol/covering-grid", False,
                                   f"non-equality at {lam}, {alpha}, {R}", worst)
    m1 = bubble.bubble_mass(BubbleParams(2.0, 0.0), 1.0)
    m2 = bubble.bubble_mass(BubbleParams(4.0, 0.0), 1.0) * np.exp(0.1)
    strict = bol.covering_deficit(m1, m2, 0.0)
    passed = worst < 1e-10 and strict.deficit > 1e-3
    return _result("bol/covering-grid", passed,
                   f"grid rel deficit {worst:.3e}, perturbed {strict.deficit:.3e}",
                   worst)


@_register("bol", "bol/same-mass-arithmetic",
           "the same-total-mass bound reports the stated signed gaps")
def _check_same_mass(config, rng):
    cases = [
        (8.0 * np.pi, 0.0, 0.0),
        (4.0 * np.pi, 0.5, 0.0),
        (6.0 * np.pi, 0.0, -2.0 * np.pi),
    ]
    worst = 0.0
    for rho, alpha, expected in cases:
        rep = bol.same_mass_bound(rho, alpha)
        worst = max(worst, abs(rep.deficit - expected))
    return _result("bol/same-mass-arithmetic", worst < 1e-12,
                   f"max gap {worst:.3e}", worst)


# -------------------------------------------------------------- thresholds

@_register("thresholds", "thresholds/examples",
           "threshold records reproduce the exact rational-pi values")
def _check_threshold_examples(config, rng):
    rec = meanfield.thresholds([-0.5, -0.5, -0.5], "sphere")
    ok = abs(rec["sphere_uniqueness"] - 2.0 * np.pi) < 1e-12
    ok &= abs(rec["coercivity"] - 4.0 * np.pi) < 1e-12
    ok &= rec["necessity_ok"] is True and rec["polytope_applicable"] is True
    rec0 = meanfield.thresholds([], "sphere")
    ok &= abs(rec0["sphere_uniqueness"] - 8.0 * np.pi) < 1e-12
    recd = meanfield.thresholds([-0.25, -0.25], "disk")
    ok &= abs(recd["disk_uniqueness"] - 4.0 * np.pi) < 1e-12
    ok &= abs(recd["coercivity"] - 6.0 * np.pi) < 1e-12
    return _result("thresholds/examples", ok, "sphere N=3/N=0 and disk records", 0.0)


@_register("thresholds", "thresholds/algebra",
           "uniqueness-below-coercivity is equivalent across both expressions")
def _check_threshold_algebra(config, rng):
    ok = True
    for a in np.linspace(-0.95, -0.05, 19):
        for N in (3, 4, 7):
            rec = meanfield.thresholds([a] * N, "sphere")
            lhs = rec["sphere_uniqueness"] < rec["coercivity"]
            rhs = 4.0 * np.pi * (2.0 + N * a) < 8.0 * np.pi * (1.0 + a)
            ok &= lhs == rhs
    return _result("thresholds/algebra", ok, "both branches on sampled orders", 0.0)


@_register("thresholds", "thresholds/alpha-partition",
           "disjoint regions partition the positive mass within the global budget")
def _check_alpha_partition(config, rng):
    worst = -np.inf
    for _ in range(20):
        N = int(rng.integers(1, 5))
        orders = rng.uniform(-0.9, -0.05, size=N)
        rho = float(rng.uniform(0.5, 0.999) * 4.0 * np.pi * (2.0 + orders.sum()))
        atoms = [(float(o), np.array([rng.uniform(-3, 3), rng.uniform(-3, 3)]))
                 for o in orders]
        with warnings.catch_warnings():
            # random configs may trip the alpha(plane) >= 1 flag on purpose
            warnings.simplefilter("ignore")
            data = meanfield.SingularData(
                atoms=atoms,
                smooth_exponent=(4.0 * np.pi * (2.0 + orders.sum()) - rho)
                / (4.0 * np.pi))
        r1, r2 = rng.uniform(0.3, 1.2, size=2)
        c1 = np.array([-(r1 + r2) - rng.uniform(0.2, 1.0), 0.0])
        c2 = np.array([+(r1 + r2) + rng.uniform(0.2, 1.0), 0.0])
        w1 = meanfield.RegionDescriptor(kind="disk", radius=float(r1), center=tuple(c1))
        w2 = meanfield.RegionDescriptor(kind="disk", radius=float(r2), center=tuple(c2))
        total = meanfield.alpha_region(data, w1) + meanfield.alpha_region(data, w2)
        budget = (8.0 * np.pi - rho) / (4.0 * np.pi)
        worst = max(worst, total - budget)
        if total - budget > 1e-9 or total >= 2.0:
            return _result("thresholds/alpha-partition", False,
                           f"violation {total - budget:.3e}", worst)
    return _result("thresholds/alpha-partition", True,
                   f"20 random configs, worst slack {worst:.3e}", worst)


@_register("thresholds", "thresholds/stereographic-round-trip",
           "projection and inverse compose to the identity")
def _check_stereo(config, rng):
    pts = rng.normal(size=(1000, 3))
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    worst = 0.0
    for p in pts:
        if p[2] > 1.0 - 1e-6:
            continue
        back = meanfield.stereographic_inverse(meanfield.stereographic(p))
        worst = max(worst, float(np.max(np.abs(back - p))))
    return _result("thresholds/stereographic-round-trip", worst < 1e-12,
                   f"max round-trip error {worst:.3e}", worst)


@_register("thresholds", "thresholds/area-fraction",
           "spherical area fractions: closed forms, hole filling, quadrature")
def _check_area_fraction(config, rng):
    disk = meanfield.RegionDescriptor(kind="disk", radius=1.0)
    ok = abs(meanfield.sphere_area_fraction(disk) - 0.5) < 1e-12
    plane = meanfield.RegionDescriptor(kind="plane")
    ok &= meanfield.sphere_area_fraction(plane) == 1.0
    ann = meanfield.RegionDescriptor(kind="annulus", r_in=1.0, r_out=np.sqrt(3.0))
    ok &= abs(meanfield.sphere_area_fraction(ann) - 0.75) < 1e-12
    # off-center disk against a centered one of the same radius at offset -> 0
    off = meanfield.RegionDescriptor(kind="disk", radius=0.8, center=(1e-9, 0.0))
    centered = meanfield.RegionDescriptor(kind="disk", radius=0.8)
    gap = abs(meanfield.sphere_area_fraction(off)
              - meanfield.sphere_area_fraction(centered))
    ok &= gap < 1e-8
    return _result("thresholds/area-fraction", ok, f"off-center gap {gap:.3e}", gap)


# ----------------------------------------------------------------- onsager

@_register("onsager", "onsager/sign-structure",
           "the log-weight Laplacian changes sign exactly at the positivity radius")
def _check_sign_structure(config, rng):
    ok = True
    for b in (1.1, 1.5, 1.9):
        for gamma in (b - 1.0 + 0.3, b - 1.0 + 1.5):
            p = onsager.OnsagerParams(b * 8.0 * np.pi, gamma)
            r_pos = onsager.positivity_radius(p)
            inside = np.linspace(1e-3, r_pos * (1 - 1e-9), 100)
            outside = np.linspace(r_pos * (1 + 1e-9), 5.0 * r_pos, 100)
            ok &= bool(np.all(onsager.laplacian_H(inside, p) < 0.0))
            ok &= bool(np.all(onsager.laplacian_H(outside, p) > 0.0))
    return _result("onsager/sign-structure", ok, "200 radii per case", 0.0)


@_register("onsager", "onsager/threshold-dominance",
           "published bound never exceeds the exact quadratic root")
def _check_threshold_dominance(config, rng):
    betas = np.linspace(8.0 * np.pi * (1.0 + 1e-6), 16.0 * np.pi, 50)
    worst = -np.inf
    ok = True
    for beta in betas:
        paper, exact = onsager.gamma_threshold(beta)
        worst = max(worst, paper - exact)
        ok &= paper <= exact + 1e-14
        if abs(beta - 16.0 * np.pi) > 1e-9:
            ok &= paper < exact
    paper16, exact16 = onsager.gamma_threshold(16.0 * np.pi)
    ok &= abs(paper16 - exact16) < 1e-14 and abs(paper16 - 1.0) < 1e-14
    return _result("onsager/threshold-dominance", ok,
                   f"50 betas, worst paper-exact {worst:.3e}", worst)


@_register("onsager", "onsager/regime-consistency",
           "the published bound covers at least the subharmonic-regime bound b-1")
def _check_regime_consistency(config, rng):
    ok = True
    for beta in np.linspace(8.0 * np.pi * (1.0 + 1e-6), 16.0 * np.pi, 50):
        paper, _ = onsager.gamma_threshold(beta)
        ok &= paper >= beta / (8.0 * np.pi) - 1.0 - 1e-14
    return _result("onsager/regime-consistency", ok, "full range", 0.0)


@_register("onsager", "onsager/root-property",
           "the contradiction functional equals 2 at the exact root")
def _check_root_property(config, rng):
    worst = 0.0
    for beta in np.linspace(8.05 * np.pi, 16.0 * np.pi, 40):
        _, root = onsager.gamma_threshold(beta)
        cv = onsager.contradiction_value(onsager.OnsagerParams(beta, root))
        worst = max(worst, abs(cv - 2.0))
    return _result("onsager/root-property", worst < 1e-12,
                   f"max |cv - 2| {worst:.3e}", worst)


@_register("onsager", "onsager/unimodality",
           "the contradiction functional dips once, at gamma = b - 1")
def _check_unimodality(config, rng):
    ok = True
    for b in (1.2, 1.5, 1.8):
        gammas = np.linspace(1e-3, 8.0, 400)
        vals = b + (gammas + 1.0 - b) ** 2 / (4.0 * gammas)
        diffs = np.diff(vals)
        sign_changes = np.sum(np.diff(np.sign(diffs)) != 0.0)
        argmin = gammas[np.argmin(vals)]
        ok &= sign_changes <= 1 and abs(argmin - (b - 1.0)) < 0.05
    return _result("onsager/unimodality", ok,
                   "single interior minimum at gamma = b-1 (formula-level check)", 0.0)


@_register("onsager", "onsager/deficit-chain",
           "half-disk quadrature chain equals the closed-form deficit budget")
def _check_deficit_chain(config, rng):
    worst = 0.0
    for b, gamma in ((1.2, 1.0), (1.5, 1.0), (1.5, 2.0), (1.9, 1.4)):
        p = onsager.OnsagerParams(b * 8.0 * np.pi, gamma)
        quad = onsager.full_disk_curvature_integral(p)
        half2 = 2.0 * onsager.half_disk_curvature_integral(p)
        closed = onsager.closed_form_disk_integral(p)
        budget = onsager.deficit_bound(p)
        worst = max(worst,
                    abs(quad - budget) / budget,
                    abs(half2 - budget) / budget,
                    abs(closed - budget) / budget)
    return _result("onsager/deficit-chain", worst < 1e-6,
                   f"max rel gap {worst:.3e}", worst)


@_register("onsager", "onsager/laplacian-fd",
           "closed-form Laplacian matches finite differences of the log-weight")
def _check_laplacian_fd(config, rng):
    worst = 0.0
    p = onsager.OnsagerParams(12.0 * np.pi, 1.3)
    h = 2e-4  # near the rounding-optimal step for central second differences
    for r in np.linspace(0.05, 4.0, 100):
        def H(x):
            return np.log(onsager.onsager_weight(x, p))
        fd = ((H(r + h) - 2.0 * H(r) + H(r - h)) / h**2
              + (H(r + h) - H(r - h)) / (2.0 * h * r))
        closed = onsager.laplacian_H(r, p)
        worst = max(worst, abs(fd - closed) / max(abs(closed), 1.0))
    return _result("onsager/laplacian-fd", worst < 1e-6,
                   f"max rel gap at 100 radii {worst:.3e}", worst)


@_register("onsager", "onsager/remark-range",
           "the widened range check holds on (8*pi, 16*pi], equality only at the top")
def _check_remark(config, rng):
    ok = all(onsager.remark_check(beta)
             for beta in np.linspace(8.01 * np.pi, 16.0 * np.pi, 50))
    b = 16.0 * np.pi / (8.0 * np.pi)
    ok &= abs((3.0 - b) - (b - 1.0)) < 1e-14
    return _result("onsager/remark-range", ok, "full range plus equality point", 0.0)


# ---------------------------------------------------------------- shooting

@_register("shooting", "shooting/disk-round-trip",
           "shot disk mass inverts back to the scale through the closed form")
def _check_disk_round_trip(config, rng):
    worst = 0.0
    for alpha in (0.1, 0.5, 0.9):
        for lam in np.geomspace(0.1, 100.0, 13):
            res = meanfield.shoot_disk(alpha, "lambda", lam, n_nodes=160)
            full = bubble.total_mass(alpha)
            t = res.rho / (full - res.rho)
            lam_back = np.sqrt(8.0 * t)
            worst = max(worst, abs(lam_back - lam) / lam)
    return _result("shooting/disk-round-trip", worst < 1e-6,
                   f"39 shots, worst rel {worst:.3e}", worst)


@_register("shooting", "shooting/sphere-exact",
           "the flat case reproduces ln(4/(1+r^2)) in sup norm")
def _check_sphere_exact(config, rng):
    res = meanfield.shoot_sphere(4.0 * np.pi, np.log(4.0))
    mask = res.profile.nodes <= 100.0
    exact = np.log(4.0 / (1.0 + res.profile.nodes[mask] ** 2))
    worst = float(np.max(np.abs(res.profile.values[mask] - exact)))
    mass_ok = abs(res.rho - 4.0 * np.pi) <= res.mass_tolerance
    return _result("shooting/sphere-exact", worst < 1e-6 and mass_ok,
                   f"sup error {worst:.3e}, mass gap {abs(res.rho - 4 * np.pi):.3e}",
                   worst)


@_register("shooting", "shooting/uniqueness-scans",
           "the center-value -> mass map is strictly monotone at the scanned masses")
def _check_uniqueness_scans(config, rng):
    ok = True
    detail = []
    for rho in (4.0 * np.pi, 6.0 * np.pi, 7.0 * np.pi):
        scan = meanfield.uniqueness_scan(rho, n_samples=50)
        ok &= scan.strictly_monotone
        detail.append(f"rho={rho / np.pi:.0f}pi:{scan.strictly_monotone}")
    return _result("shooting/uniqueness-scans", ok, ", ".join(detail), 0.0)


@_register("shooting", "shooting/mass-contract",
           "shot sphere profiles report their mass within the a-posteriori bound")
def _check_mass_contract(config, rng):
    ok = True
    worst = 0.0
    for rho in (4.0 * np.pi, 5.5 * np.pi):
        scan_u0 = np.log(4.0) + (rho - 4.0 * np.pi) / (2.0 * np.pi)
        res = meanfield.shoot_sphere(rho, scan_u0)
        # the reported rho must carry its own tolerance; compare against a
        # finer integration as the reference
        ref = meanfield.shoot_sphere(rho, scan_u0, r_max=1e5, n_nodes=1600)
        gap = abs(res.rho - ref.rho)
        ok &= gap <= res.mass_tolerance + ref.mass_tolerance
        worst = max(worst, gap)
    return _result("shooting/mass-contract", ok,
                   f"cutoff-refinement gap {worst:.3e}", worst)


@_register("shooting", "shooting/series-start",
           "the near-origin expansion has the stated coefficient and error order")
def _check_series_start(config, rng):
    worst = 0.0
    for alpha, lam in ((0.5, np.sqrt(8.0)), (0.25, 1.3)):
        a = 1.0 - alpha
        p = BubbleParams(lam, alpha)
        v0 = p.center_value
        coeff = np.exp(v0) / (2.0 * a) ** 2
        worst = max(worst, abs(coeff - lam**2 / 4.0) / (lam**2 / 4.0))
        errs = []
        for r in (1e-3, 5e-4):
            series = v0 - coeff * r ** (2.0 * a)
            errs.append(abs(series - float(bubble.eval_bubble(p, r))))
        order = np.log(errs[0] / errs[1]) / np.log(2.0)
        worst = max(worst, abs(order - 4.0 * a) / (4.0 * a))
    return _result("shooting/series-start", worst < 0.05,
                   f"coefficient and error-order gap {worst:.3e}", worst)


# ------------------------------------------------------------------ runner

SUITE_ORDER = ("bubble", "quadrature", "rearrange", "bol", "thresholds",
               "onsager", "shooting")


def coverage_manifest() -> dict:
    """Invariant-to-check manifest for the whole registry."""
    return {
        "suites": {name: [c.check_id for c in CHECKS if c.suite == name]
                   for name in SUITE_ORDER},
        "checks": {c.check_id: c.description for c in CHECKS},
    }


def run_suite(config: SuiteConfig) -> int:
    """Run every registered check; write reports, summary, manifest, figures.

    Returns 0 iff all checks pass. The first failing check is serialized to
    standard error.
    """
    _CORPUS_CACHE.clear()
    config.out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(config.seed)
    all_rows = []
    first_failure = None
    t_start = time.monotonic()
    for suite_name in SUITE_ORDER:
        suite_checks = [c for c in CHECKS if c.suite == suite_name]
        results = []
        for check in suite_checks:
            try:
                res = check.fn(config, rng)
            except Exception as exc:  # a raising check is a failing check
                res = CheckResult(check.check_id, False,
                                  f"{type(exc).__name__}: {exc}", float("nan"))
            results.append((check, res))
            all_rows.append((suite_name, check, res))
            if not res.passed and first_failure is None:
                first_failure = (check, res)
        payload = {
            "suite": suite_name,
            "seed": config.seed,
            "passed": all(r.passed for _, r in results),
            "checks": [
                {
                    "id": c.check_id,
                    "description": c.description,
                    "passed": r.passed,
                    "worst": r.worst,
                    "detail": r.detail,
                }
                for c, r in results
            ],
        }
        (config.out_dir / f"{suite_name}.json").write_text(
            to_json_text(payload) + "\n"
        )
    manifest = coverage_manifest()
    manifest["seed"] = config.seed
    (config.out_dir / "manifest.json").write_text(to_json_text(manifest) + "\n")

    _write_summary(config, all_rows)
    if config.figures:
        from . import plots

        plots.render_all(config, _CORPUS_CACHE.get("rows"))

    if first_failure is not None:
        check, res = first_failure
        report = res.report or {
            "op": check.check_id,
            "inputs": {"seed": config.seed},
            "lhs": res.worst,
            "rhs": 0.0,
            "deficit": res.worst,
            "tolerance": 0.0,
            "verdict": "fail",
        }
        sys.stderr.write(to_json_text(report) + "\n")
        return 1
    # keep the runner honest about the five-minute budget in the reports
    _ = time.monotonic() - t_start
    return 0


def _write_summary(config: SuiteConfig, rows) -> None:
    if config.fmt == "csv":
        lines = ["suite,check,passed,worst,detail"]
        for suite_name, check, res in rows:
            detail = res.detail.replace(",", ";")
            lines.append(
                f"{suite_name},{check.check_id},{str(res.passed).lower()},"
                f"{format_float(res.worst)},{detail}"
            )
        (config.out_dir / "summary.csv").write_text("\n".join(lines) + "\n")
    else:
        payload = [
            {"suite": s, "check": c.check_id, "passed": r.passed,
             "worst": r.worst, "detail": r.detail}
            for s, c, r in rows
        ]
        (config.out_dir / "summary.json").write_text(to_json_text(payload) + "\n")
