"""Deficit functionals for the weighted isoperimetric inequality.

Interior form: for a strictly decreasing radial psi on B_R, admissible in
the sense that for a.e. r

    int_{|x|=r} |grad psi| dsigma  <=  int_{B_r} r^(-2*alpha) e^psi dx,

the boundary root integral dominates the mass form:

    ( int_{|x|=R} (r^(-2a) e^psi)^(1/2) dsigma )^2
        >= (1/2) * M * (8*pi*(1-alpha) - M),      M = mass over B_R,

with equality exactly on the bubble family. The exterior form reverses the
inequality under the complementary admissibility condition and a mass
ceiling. On top of these sit the two-scale mass alternative, the exterior
sandwich, the equal-mass boundary comparison, the covering deficit
m1 + m2 - 8*pi*(1-alpha(omega)), and a seeded generator of admissible test
profiles whose certificates are always recomputed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .bubble import (
    BubbleParams,
    bubble_mass,
    eval_bubble,
    exterior_bubble_mass,
    pair_lambda,
    critical_lambda,
    total_mass,
)
from .errors import (
    BoundaryMismatchError,
    GeneratorFailedError,
    MassMismatchError,
    MassTooLargeError,
    NoConvergenceError,
    NotAdmissibleError,
    NotDecreasingError,
)
from .profiles import (
    RadialProfile,
    cumulative_weighted_mass,
    mass_between,
    radial_derivative,
    radial_grid,
)
from .quadrature import CumulativeMass
from .reporting import DeficitReport

MARGIN_RTOL = 1e-7  # admissibility margin tolerance, relative to the local mass
DEFICIT_RTOL = 1e-8  # deficit tolerance, relative to max(lhs, |rhs|)
_STENCIL_NOISE = 64.0  # stencil weight magnitudes plus smooth-solver output noise


def _gradient_noise_floor(nodes: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Round-off floor of the boundary-gradient integral at each node.

    The sampled values carry quantization at eps times their magnitude; a
    five-point stencil over spacing h in t = ln r amplifies that to
    ~eps*scale/h on r*psi', independent of how small the local mass is. The
    scale has a unit minimum: profiles are defined up to an additive gauge,
    so a value passing through zero does not make its neighborhood exact.
    """
    t = np.log(nodes)
    h_local = np.empty_like(t)
    dt = np.diff(t)
    h_local[:-1] = dt
    h_local[-1] = dt[-1]
    h_local[1:-1] = np.minimum(dt[:-1], dt[1:])
    eps = np.finfo(float).eps
    scale = np.maximum(np.abs(values), 1.0)
    return 2.0 * np.pi * _STENCIL_NOISE * eps * scale / h_local


@dataclass
class AdmissibleProfile:
    """A strictly decreasing radial profile with its admissibility certificate.

    ``margins[i]`` is the enclosed mass minus the boundary gradient integral
    at node i; the profile is admissible when every margin clears its
    tolerance (MARGIN_RTOL times the local mass).
    """

    profile: RadialProfile
    alpha: float
    margins: np.ndarray
    margin_tolerances: np.ndarray
    masses: np.ndarray
    admissible: bool

    @property
    def table(self) -> CumulativeMass:
        return CumulativeMass(self.profile.nodes, self.masses)

    def mass_at(self, r: float) -> float:
        return float(self.table.mass_at(r))

    def value_at(self, r: float) -> float:
        return float(self.profile.value_at(r))

    def require_admissible(self) -> None:
        if not self.admissible:
            worst = float(np.min(self.margins / np.maximum(self.margin_tolerances, 1e-300)))
            raise NotAdmissibleError(
                f"differential-inequality margin violated (worst margin/tol = {worst:.3g})"
            )


def check_differential_inequality(
    psi: RadialProfile, alpha: float, R: float | None = None
) -> AdmissibleProfile:
    """Certify int_{|x|=r}|grad psi| <= enclosed weighted mass at every node.

    The gradient side is 2*pi*r*|psi'(r)| with psi' from 4th-order stencils;
    the mass side is the cumulative table of e^psi. Raises NotDecreasingError
    if psi is not strictly decreasing on its nodes (zero tolerance).
    """
    if not psi.is_strictly_decreasing():
        raise NotDecreasingError("psi must be strictly decreasing on its nodes")
    if R is not None and R > psi.r_max * (1.0 + 1e-12):
        raise ValueError("R exceeds the sampled range")
    density = np.exp(psi.values)
    center = None if psi.center_value is None else float(np.exp(psi.center_value))
    masses = cumulative_weighted_mass(psi.nodes, density, alpha, center)
    dpsi = radial_derivative(psi.nodes, psi.values)
    gradient_side = 2.0 * np.pi * psi.nodes * np.abs(dpsi)
    margins = masses - gradient_side
    tol = MARGIN_RTOL * np.maximum(masses, 1e-300) + _gradient_noise_floor(
        psi.nodes, psi.values
    )
    return AdmissibleProfile(
        profile=psi,
        alpha=alpha,
        margins=margins,
        margin_tolerances=tol,
        masses=masses,
        admissible=bool(np.all(margins >= -tol)),
    )


def _deficit_scale(lhs: float, rhs: float) -> float:
    return max(abs(lhs), abs(rhs), 1.0)


def bol_deficit_interior(
    psi: AdmissibleProfile, R: float | None = None, tolerance: float | None = None
) -> DeficitReport:
    """Interior deficit: boundary root integral squared minus (1/2)M(8pi(1-a)-M).

    Contract deficit >= -tolerance; verdict "equality" flags the bubble case.
    """
    psi.require_admissible()
    prof = psi.profile
    R = prof.r_max if R is None else R
    boundary_value = prof.values[-1] if R == prof.r_max else psi.value_at(R)
    mass = psi.masses[-1] if R == prof.r_max else psi.mass_at(R)
    lhs = 4.0 * np.pi**2 * R ** (2.0 * (1.0 - psi.alpha)) * np.exp(boundary_value)
    rhs = 0.5 * mass * (total_mass(psi.alpha) - mass)
    if tolerance is None:
        tolerance = DEFICIT_RTOL * _deficit_scale(lhs, rhs)
    return DeficitReport.from_sides(
        op="bol_deficit_interior",
        inputs={"alpha": psi.alpha, "R": float(R), "mass": float(mass)},
        lhs=lhs,
        rhs=rhs,
        tolerance=tolerance,
        orientation=1.0,
    )


@dataclass
class ExteriorProfile:
    """Exterior profile on [R, r_max] with its reversed-inequality certificate."""

    profile: RadialProfile
    alpha: float
    margins: np.ndarray
    margin_tolerances: np.ndarray
    exterior_masses: np.ndarray  # mass of the complement of B_{r_i}
    tail_uncertainty: float
    admissible: bool

    @property
    def exterior_mass(self) -> float:
        return float(self.exterior_masses[0])

    def require_admissible(self) -> None:
        if not self.admissible:
            raise NotAdmissibleError("exterior differential-inequality margin violated")


def _generic_tail_bound(psi: RadialProfile, alpha: float) -> float:
    # bubble-type decay comparison: d <= d(rmax) (r/rmax)^(-4(1-alpha)) past rmax
    a = 1.0 - alpha
    return float(np.pi * np.exp(psi.values[-1]) * psi.r_max ** (2.0 * a) / a)


def check_exterior_inequality(
    psi: RadialProfile,
    alpha: float,
    tail_mass: float | None = None,
) -> ExteriorProfile:
    """Certify the reversed condition on [R, r_max].

    margin(r) = 8*pi*(1-alpha) - exterior mass past r - boundary gradient
    integral, required nonnegative. The mass beyond the last node is
    ``tail_mass`` when the caller knows it (seeded families do); otherwise a
    bubble-decay bound is used and folded into the margin tolerances.
    """
    if not psi.is_strictly_decreasing():
        raise NotDecreasingError("psi must be strictly decreasing on its nodes")
    full = total_mass(alpha)
    density = np.exp(psi.values)
    inner = mass_between(psi.nodes, density, alpha)  # mass of annulus (R, r_i)
    if tail_mass is None:
        tail = _generic_tail_bound(psi, alpha)
        tail_uncertainty = tail
        tail_estimate = 0.5 * tail
    else:
        tail_estimate = float(tail_mass)
        tail_uncertainty = 0.0
    exterior_masses = (inner[-1] - inner) + tail_estimate
    if exterior_masses[0] >= full * (1.0 - 1e-12):
        raise MassTooLargeError(
            f"exterior mass {exterior_masses[0]:g} >= 8*pi*(1-alpha) = {full:g}"
        )
    dpsi = radial_derivative(psi.nodes, psi.values)
    gradient_side = 2.0 * np.pi * psi.nodes * np.abs(dpsi)
    margins = (full - exterior_masses) - gradient_side
    tol = (
        MARGIN_RTOL * np.maximum(full - exterior_masses, 1e-300)
        + 0.5 * tail_uncertainty
        + _gradient_noise_floor(psi.nodes, psi.values)
    )
    return ExteriorProfile(
        profile=psi,
        alpha=alpha,
        margins=margins,
        margin_tolerances=tol,
        exterior_masses=exterior_masses,
        tail_uncertainty=tail_uncertainty,
        admissible=bool(np.all(margins >= -tol)),
    )


def bol_deficit_exterior(
    psi: RadialProfile,
    alpha: float,
    tail_mass: float | None = None,
    tolerance: float | None = None,
) -> DeficitReport:
    """Reversed deficit at R = first node: contract deficit <= +tolerance."""
    ext = check_exterior_inequality(psi, alpha, tail_mass)
    ext.require_admissible()
    R = psi.r_min
    mass = ext.exterior_mass
    lhs = 4.0 * np.pi**2 * R ** (2.0 * (1.0 - alpha)) * np.exp(psi.values[0])
    rhs = 0.5 * mass * (total_mass(alpha) - mass)
    if tolerance is None:
        # the tail uncertainty enters the mass form linearly
        slope = abs(0.5 * (total_mass(alpha) - 2.0 * mass))
        tolerance = DEFICIT_RTOL * _deficit_scale(lhs, rhs) + slope * ext.tail_uncertainty
    return DeficitReport.from_sides(
        op="bol_deficit_exterior",
        inputs={"alpha": alpha, "R": float(R), "exterior_mass": float(mass)},
        lhs=lhs,
        rhs=rhs,
        tolerance=tolerance,
        orientation=-1.0,
    )


def mass_alternative(
    psi: AdmissibleProfile,
    lambda1: float,
    R: float | None = None,
    boundary_tol: float = 1e-8,
) -> str:
    """Which branch the enclosed mass takes against the boundary-matched pair.

    With psi(R) equal to the two paired bubbles' boundary value, the mass
    over B_R is at most the smaller bubble's ("low") or at least the larger
    bubble's ("high"); "between" is a contract violation. Raises
    BoundaryMismatchError when psi(R) does not match the reference bubble.
    """
    psi.require_admissible()
    prof = psi.profile
    R = prof.r_max if R is None else R
    boundary = prof.values[-1] if R == prof.r_max else psi.value_at(R)
    reference = eval_bubble(BubbleParams(lambda1, psi.alpha), R)
    if abs(boundary - reference) > boundary_tol * max(1.0, abs(reference)):
        raise BoundaryMismatchError(
            f"psi(R) = {boundary:.12g} but the lambda1 bubble takes {reference:.12g}"
        )
    lambda2 = pair_lambda(lambda1, psi.alpha, R)
    m1 = bubble_mass(BubbleParams(lambda1, psi.alpha), R)
    m2 = bubble_mass(BubbleParams(lambda2, psi.alpha), R)
    m_lo, m_hi = min(m1, m2), max(m1, m2)
    mass = psi.masses[-1] if R == prof.r_max else psi.mass_at(R)
    tol = 1e-8 * total_mass(psi.alpha)
    if mass <= m_lo + tol:
        return "low"
    if mass >= m_hi - tol:
        return "high"
    return "between"


def exterior_sandwich(
    psi: RadialProfile,
    lambda1: float,
    lambda2: float,
    alpha: float,
    tail_mass: float | None = None,
    boundary_tol: float = 1e-8,
) -> tuple[DeficitReport, DeficitReport]:
    """Exterior-mass sandwich between the paired bubbles.

    With lambda1 < lambda2 boundary-matched at R = first node,
    ext(U_lambda2) <= ext(psi) <= ext(U_lambda1). Returns the (lower, upper)
    reports, deficits oriented so "pass" means the sandwich holds.
    """
    if lambda1 > lambda2:
        lambda1, lambda2 = lambda2, lambda1
    R = psi.r_min
    p1 = BubbleParams(lambda1, alpha)
    p2 = BubbleParams(lambda2, alpha)
    b1, b2 = eval_bubble(p1, R), eval_bubble(p2, R)
    if abs(b1 - b2) > boundary_tol * max(1.0, abs(b1)):
        raise BoundaryMismatchError("lambda1, lambda2 are not boundary-paired at R")
    if abs(psi.values[0] - b1) > boundary_tol * max(1.0, abs(b1)):
        raise BoundaryMismatchError("psi(R) does not match the paired boundary value")
    ext = check_exterior_inequality(psi, alpha, tail_mass)
    ext.require_admissible()
    m_psi = ext.exterior_mass
    scale = total_mass(alpha)
    tol = DEFICIT_RTOL * scale + ext.tail_uncertainty
    lower = DeficitReport.from_sides(
        op="exterior_sandwich_lower",
        inputs={"alpha": alpha, "R": float(R), "lambda2": lambda2},
        lhs=m_psi,
        rhs=exterior_bubble_mass(p2, R),
        tolerance=tol,
        orientation=1.0,
    )
    upper = DeficitReport.from_sides(
        op="exterior_sandwich_upper",
        inputs={"alpha": alpha, "R": float(R), "lambda1": lambda1},
        lhs=m_psi,
        rhs=exterior_bubble_mass(p1, R),
        tolerance=tol,
        orientation=-1.0,
    )
    return lower, upper


def boundary_comparison(
    psi: AdmissibleProfile,
    lam: float,
    R: float | None = None,
    mass_rtol: float = 1e-7,
    tolerance: float | None = None,
) -> DeficitReport:
    """Equal-mass boundary comparison: the bubble's boundary value is the lowest.

    Preconditions: mass of psi over B_R equals the bubble's to mass_rtol and
    both stay below 8*pi*(1-alpha). Then U(R) <= psi(R) + tolerance.
    """
    psi.require_admissible()
    prof = psi.profile
    R = prof.r_max if R is None else R
    params = BubbleParams(lam, psi.alpha)
    m_bubble = bubble_mass(params, R)
    m_psi = psi.masses[-1] if R == prof.r_max else psi.mass_at(R)
    if abs(m_psi - m_bubble) > mass_rtol * m_bubble:
        raise MassMismatchError(
            f"masses differ: psi carries {m_psi:.12g}, bubble {m_bubble:.12g}"
        )
    boundary = prof.values[-1] if R == prof.r_max else psi.value_at(R)
    reference = eval_bubble(params, R)
    if tolerance is None:
        tolerance = 1e-7 * max(1.0, abs(reference))
    return DeficitReport.from_sides(
        op="boundary_comparison",
        inputs={"alpha": psi.alpha, "R": float(R), "lambda": lam, "mass": float(m_psi)},
        lhs=boundary,
        rhs=reference,
        tolerance=tolerance,
        orientation=1.0,
    )


def shift_to_mass(
    profile: RadialProfile, alpha: float, target_mass: float
) -> RadialProfile:
    """Additive constant matching the enclosed mass exactly.

    Shifting psi by delta scales the measure e^psi dx by e^delta, so
    delta = ln(target / current) matches masses with no iteration.
    """
    adm = check_differential_inequality(profile, alpha)
    current = float(adm.masses[-1])
    return profile.shifted(float(np.log(target_mass / current)))


def covering_deficit(
    mass1: float,
    mass2: float,
    alpha_omega: float,
    tolerance: float | None = None,
) -> DeficitReport:
    """Covering deficit mass1 + mass2 - 8*pi*(1 - alpha(omega)); contract >= -tol."""
    if mass1 < 0.0 or mass2 < 0.0:
        raise ValueError("masses must be nonnegative")
    rhs = 8.0 * np.pi * (1.0 - alpha_omega)
    if tolerance is None:
        tolerance = 1e-10 * max(abs(rhs), 1.0)
    return DeficitReport.from_sides(
        op="covering_deficit",
        inputs={"mass1": float(mass1), "mass2": float(mass2), "alpha_omega": alpha_omega},
        lhs=float(mass1 + mass2),
        rhs=rhs,
        tolerance=tolerance,
        orientation=1.0,
    )


def same_mass_bound(rho: float, alpha_region: float) -> DeficitReport:
    """rho - 8*pi*(1 - alpha): positive iff a distinct same-mass pair is allowed.

    A "fail" verdict encodes that the bound excludes distinct pairs at this
    mass; the uniqueness experiments must then find none.
    """
    if not rho > 0.0:
        raise ValueError("rho must be positive")
    rhs = 8.0 * np.pi * (1.0 - alpha_region)
    return DeficitReport.from_sides(
        op="same_mass_bound",
        inputs={"rho": float(rho), "alpha_region": alpha_region},
        lhs=float(rho),
        rhs=rhs,
        tolerance=1e-12 * max(abs(rhs), 1.0),
        orientation=1.0,
    )


def _curvature_factor(rng: np.random.Generator):
    weights = rng.dirichlet((1.0, 1.0, 1.0))

    def K(r: np.ndarray) -> np.ndarray:
        raw = (
            weights[0]
            + weights[1] / (1.0 + r**2)
            + weights[2] * np.exp(-(r**2))
        )
        return np.clip(raw, 0.1, 1.0)

    return K, weights


def generate_test_profile(
    seed: int,
    alpha: float,
    mode: str = "shift",
    R: float = 1.0,
    n: int = 1200,
    lam: float | None = None,
    c: float | None = None,
    r_min: float = 1e-6,
) -> AdmissibleProfile:
    """Seeded admissible interior test profile on (0, R].

    mode "shift": a bubble plus a constant c >= 0 (c = 0 is the bubble
    itself, the equality case). mode "subunit-curvature": integrates
    psi'' + psi'/r + K(r) r^(-2a) e^psi = 0 with a seeded smooth
    K: (0, R] -> [0.1, 1], admissible by construction since the boundary
    gradient integral is the K-weighted mass. Certificates are recomputed
    from the sampled profile, never assumed; GeneratorFailedError signals an
    integrator bug.
    """
    rng = np.random.default_rng(seed)
    lam_star = critical_lambda(alpha, R)
    if lam is None:
        lam = lam_star * float(np.exp(rng.uniform(-1.5, 0.8)))
    # keep (lam^2/8) r_min^(2(1-alpha)) <= 1e-3 so the analytic head term of
    # the cumulative mass stays well inside the certificate tolerance
    a = 1.0 - alpha
    r_start = min(r_min, (1e-3 * 8.0 / lam**2) ** (1.0 / (2.0 * a)))
    nodes = radial_grid(r_start, R, n)

    if mode == "shift":
        if c is None:
            c = float(rng.uniform(0.02, 0.6))
        if c < 0.0:
            raise ValueError("shift mode needs c >= 0")
        params = BubbleParams(lam, alpha)
        profile = RadialProfile(
            nodes, eval_bubble(params, nodes) + c, params.center_value + c
        )
    elif mode == "subunit-curvature":
        K, _ = _curvature_factor(rng)
        v0 = 2.0 * np.log(lam * (1.0 - alpha))
        profile = _integrate_subunit(K, v0, alpha, nodes)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    adm = check_differential_inequality(profile, alpha)
    if not adm.admissible:
        raise GeneratorFailedError(
            f"generated profile (mode={mode}, seed={seed}) fails its certificate"
        )
    return adm


def _integrate_subunit(
    K, v0: float, alpha: float, nodes: np.ndarray
) -> RadialProfile:
    """Integrate g'' = -K(r) e^(2at) e^g in t = ln r.

    Starts from the exact matched bubble at the first node: K(0) = 1 and K
    deviates only at O(r^2), so the start error is far below the margin
    tolerances (a truncated series start is not).
    """
    a = 1.0 - alpha
    t_nodes = np.log(nodes)
    t0 = t_nodes[0]
    r0 = nodes[0]
    s0 = r0 ** (2.0 * a)
    c = np.exp(v0) / (8.0 * a**2)
    g0 = v0 - 2.0 * np.log1p(c * s0)
    p0 = -4.0 * a * c * s0 / (1.0 + c * s0)

    def rhs(t, y):
        g, p = y
        r = np.exp(t)
        return [p, -float(K(np.asarray(r))) * np.exp(2.0 * a * t + g)]

    sol = solve_ivp(
        rhs,
        (t0, t_nodes[-1]),
        [g0, p0],
        t_eval=t_nodes,
        method="DOP853",
        rtol=1e-13,
        atol=3e-15,
    )
    if not sol.success:
        raise NoConvergenceError(f"profile integration failed: {sol.message}")
    return RadialProfile(nodes, sol.y[0], v0)


def exterior_shift_profile(
    lam: float,
    alpha: float,
    R: float,
    c: float,
    r_max: float | None = None,
    n: int = 1200,
) -> tuple[RadialProfile, float]:
    """Exterior family U_lambda - c (c >= 0) on [R, r_max] with its exact tail.

    Down-shifts scale the exterior measure by e^(-c), which keeps the
    reversed condition satisfied: the gradient side is the bubble's while
    the available mass budget only grows. Returns (profile, tail mass past
    r_max, exact).
    """
    if c < 0.0:
        raise ValueError("exterior shift needs c >= 0")
    if r_max is None:
        r_max = 50.0 * R
    params = BubbleParams(lam, alpha)
    nodes = radial_grid(R, r_max, n)
    profile = RadialProfile(nodes, eval_bubble(params, nodes) - c)
    tail = float(np.exp(-c) * exterior_bubble_mass(params, r_max))
    return profile, tail


def exterior_between_profile(
    lambda1: float,
    alpha: float,
    R: float,
    theta: float,
    r_max: float | None = None,
    n: int = 1200,
) -> tuple[RadialProfile, float, float, float]:
    """Boundary-matched intermediate exterior profile for the sandwich lemma.

    Interpolates the scale geometrically between lambda1 and its companion
    lambda2, then shifts down so the boundary value at R matches the pair's.
    Returns (profile, exact tail mass, lambda1, lambda2).
    """
    if not (0.0 <= theta <= 1.0):
        raise ValueError("theta must lie in [0, 1]")
    if r_max is None:
        r_max = 50.0 * R
    lambda2 = pair_lambda(lambda1, alpha, R)
    if lambda1 > lambda2:
        lambda1, lambda2 = lambda2, lambda1
    lam_theta = lambda1 ** (1.0 - theta) * lambda2**theta
    p_theta = BubbleParams(lam_theta, alpha)
    c = float(eval_bubble(BubbleParams(lambda1, alpha), R) - eval_bubble(p_theta, R))
    # boundary values away from the pair are higher, so c <= 0: a down-shift
    nodes = radial_grid(R, r_max, n)
    profile = RadialProfile(nodes, eval_bubble(p_theta, nodes) + c)
    tail = float(np.exp(c) * exterior_bubble_mass(p_theta, r_max))
    return profile, tail, lambda1, lambda2
