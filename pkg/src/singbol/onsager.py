"""Quantitative layer of the spherical vortex symmetry argument.

After stereographic reduction, the vortex problem at inverse temperature
beta (written b = beta/8*pi in (1, 2]) and alignment strength gamma >= 0
carries the radial weight

    h(r) = 8 (1 + r^2)^(-2 + beta/4*pi) * exp(gamma * 2/(1+r^2)),

whose log-Laplacian changes sign at the positivity radius
r^2 = (gamma + 1 - b)/(gamma - 1 + b) once gamma > b - 1. Integrating the
superharmonic excess over the half-disk of that radius yields the deficit
budget 8*pi*(gamma + 1 - b)^2 / (4*gamma); reflecting a putative asymmetric
solution forces b + (gamma + 1 - b)^2/(4*gamma) > 2, so even symmetry is
forced whenever that contradiction functional stays at or below 2. The
gamma range guaranteeing this is bounded by the larger root of
g^2 + 2g(b-3) + (b-1)^2 = 0, slightly above the published sufficient bound
3 - b + sqrt(2(3-b)(2-b)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SubharmonicRegimeError
from .quadrature import WeightedRadialDensity, annulus_integral

EIGHT_PI = 8.0 * np.pi


@dataclass(frozen=True)
class OnsagerParams:
    """beta in (8*pi, 16*pi], gamma >= 0; b = beta/8*pi."""

    beta: float
    gamma: float

    def __post_init__(self) -> None:
        if not (EIGHT_PI + 1e-9 < self.beta <= 2.0 * EIGHT_PI * (1.0 + 1e-12)):
            raise ValueError("beta must lie in (8*pi, 16*pi]")
        if self.gamma < 0.0:
            raise ValueError("gamma must be nonnegative (flip the pole otherwise)")

    @property
    def b(self) -> float:
        return self.beta / EIGHT_PI


def onsager_weight(r: float | np.ndarray, p: OnsagerParams) -> np.ndarray | float:
    """h(r) = 8 (1+r^2)^(-2 + beta/4*pi) e^(gamma * 2/(1+r^2))."""
    r = np.asarray(r, dtype=float)
    exponent = -2.0 + 2.0 * p.b  # beta/4*pi = 2b
    out = 8.0 * (1.0 + r**2) ** exponent * np.exp(p.gamma * 2.0 / (1.0 + r**2))
    return float(out) if out.ndim == 0 else out


def laplacian_H(r: float | np.ndarray, p: OnsagerParams) -> np.ndarray | float:
    """Delta ln h = 4(2b-2)/(1+r^2)^2 + 8*gamma*(r^2-1)/(1+r^2)^3."""
    r = np.asarray(r, dtype=float)
    q = 1.0 + r**2
    out = 4.0 * (2.0 * p.b - 2.0) / q**2 + 8.0 * p.gamma * (r**2 - 1.0) / q**3
    return float(out) if out.ndim == 0 else out


def positivity_radius(p: OnsagerParams) -> float:
    """Radius below which -Delta ln h > 0: r^2 = (gamma+1-b)/(gamma-1+b).

    Requires gamma > b - 1; otherwise the weight is subharmonic everywhere
    and the axial-symmetry result already applies.
    """
    if p.gamma <= p.b - 1.0:
        raise SubharmonicRegimeError(
            f"gamma = {p.gamma:g} <= b - 1 = {p.b - 1.0:g}: subharmonic regime"
        )
    return float(np.sqrt((p.gamma + 1.0 - p.b) / (p.gamma - 1.0 + p.b)))


def gamma_threshold(beta: float) -> tuple[float, float]:
    """(published sufficient bound, exact root of the contradiction quadratic).

    paper_bound = 3 - b + sqrt(2(3-b)(2-b)); exact_root = (3-b) + 2*sqrt(2-b),
    the larger root of g^2 + 2g(b-3) + (b-1)^2 = 0. paper_bound <= exact_root
    on (8*pi, 16*pi], with equality only at beta = 16*pi.
    """
    b = beta / EIGHT_PI
    if not (1.0 < b <= 2.0 + 1e-12):
        raise ValueError("beta must lie in (8*pi, 16*pi]")
    b = min(b, 2.0)
    paper_bound = 3.0 - b + np.sqrt(2.0 * (3.0 - b) * (2.0 - b))
    exact_root = (3.0 - b) + 2.0 * np.sqrt(2.0 - b)
    return float(paper_bound), float(exact_root)


def deficit_bound(p: OnsagerParams) -> float:
    """Half-disk superharmonic budget 8*pi*(gamma+1-b)^2 / (4*gamma).

    Equals -2 int_{B_r^+} Delta ln h = -int_{B_r} Delta ln h at the
    positivity radius; the quadrature cross-check realizes that chain.
    """
    if p.gamma < p.b - 1.0:
        raise SubharmonicRegimeError("deficit budget needs gamma >= b - 1")
    if p.gamma == 0.0:
        raise SubharmonicRegimeError("gamma = 0 is the axially symmetric regime")
    return float(EIGHT_PI * (p.gamma + 1.0 - p.b) ** 2 / (4.0 * p.gamma))


def contradiction_value(p: OnsagerParams) -> float:
    """b + (gamma+1-b)^2/(4*gamma); even symmetry is forced when <= 2.

    Defined for gamma >= b - 1 (the value degenerates to b at the boundary);
    strictly below it the weight is subharmonic everywhere and the axial
    result already applies.
    """
    if p.gamma < p.b - 1.0:
        raise SubharmonicRegimeError("contradiction functional needs gamma >= b - 1")
    if p.gamma == 0.0:
        raise SubharmonicRegimeError("gamma = 0 is the axially symmetric regime")
    return float(p.b + (p.gamma + 1.0 - p.b) ** 2 / (4.0 * p.gamma))


def remark_check(beta: float) -> bool:
    """(3 - b) >= (b - 1) on the range: the new gamma range contains the old."""
    b = beta / EIGHT_PI
    if not (1.0 < b <= 2.0 + 1e-12):
        raise ValueError("beta must lie in (8*pi, 16*pi]")
    return bool(3.0 - b >= b - 1.0)


def full_disk_curvature_integral(p: OnsagerParams, tol: float = 1e-9) -> float:
    """-int_{B_r} Delta ln h dx over the positivity disk, by radial quadrature.

    The integrand is nonnegative there by construction (round-off at the
    boundary is clamped by the density wrapper).
    """
    r_pos = positivity_radius(p)
    density = WeightedRadialDensity(0.0, lambda r: -laplacian_H(r, p))
    return annulus_integral(density, 0.0, r_pos, tol)


def half_disk_curvature_integral(p: OnsagerParams, tol: float = 1e-9) -> float:
    """-int_{B_r^+} Delta ln h dx: half the full-disk integral by symmetry."""
    return 0.5 * full_disk_curvature_integral(p, tol)


def closed_form_disk_integral(p: OnsagerParams) -> float:
    """The displayed closed form of -int_{B_r} Delta ln h at the positivity radius.

    8*pi*(1 - 1/(1+r^2)) * ( -(b - 1 + gamma) + gamma*(1 + 1/(1+r^2)) ).
    """
    r2 = positivity_radius(p) ** 2
    u = 1.0 / (1.0 + r2)
    return float(EIGHT_PI * (1.0 - u) * (-(p.b - 1.0 + p.gamma) + p.gamma * (1.0 + u)))


def onsager_record(p: OnsagerParams) -> dict:
    """Machine-readable record of all threshold quantities for (beta, gamma)."""
    paper_bound, exact_root = gamma_threshold(p.beta)
    subharmonic = p.gamma < p.b - 1.0 or p.gamma == 0.0
    if subharmonic:
        r_pos = None
        budget = None
        cv = None
        forced = True  # axially symmetric by the subharmonic-weight result
    else:
        r_pos = positivity_radius(p)
        budget = deficit_bound(p)
        cv = contradiction_value(p)
        forced = cv <= 2.0
    return {
        "beta_over_8pi": p.b,
        "gamma": p.gamma,
        "paper_bound": paper_bound,
        "exact_root": exact_root,
        "positivity_radius": r_pos,
        "deficit_bound": budget,
        "contradiction_value": cv,
        "symmetry_forced": forced,
    }
