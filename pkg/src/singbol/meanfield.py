"""Sphere/disk mean field reductions, thresholds, and shooting experiments.

The sphere problem with total mass rho and conical atoms of orders alpha_j
pulls back through stereographic projection to a planar Liouville equation
with weight h(x) = (1 + |x|^2)^(-l), l = (4*pi*(2 + sum alpha_j) - rho)/4*pi,
and the planar solution carries int h e^u = rho. The normalized positive
singular mass of a region combines the smooth superharmonic part (l > 0)
through the spherical area fraction of the hole-filled region with the
negative-order atoms it contains. Radial shooting solvers provide the
desk-scale uniqueness experiments: the disk map rho <-> lambda must agree
with the closed-form bubble mass, and the sphere mass map must be strictly
monotone in the center value.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .bubble import total_mass
from .errors import (
    AtPoleError,
    NoConvergenceError,
    OrderOutOfRangeError,
    RhoOutOfRangeError,
)
from .profiles import RadialProfile
from .quadrature import WeightedRadialDensity, annulus_integral

FOUR_PI = 4.0 * np.pi


def stereographic(p) -> np.ndarray:
    """Project a unit-sphere point (minus the north pole) to the plane."""
    p = np.asarray(p, dtype=float)
    if p.shape != (3,):
        raise ValueError("expected a 3-vector")
    if abs(np.dot(p, p) - 1.0) > 1e-9:
        raise ValueError("point is not on the unit sphere")
    if p[2] >= 1.0 - 1e-12:
        raise AtPoleError("stereographic projection undefined at the north pole")
    return np.array([p[0], p[1]]) / (1.0 - p[2])


def stereographic_inverse(y) -> np.ndarray:
    """Send a planar point back to the unit sphere."""
    y = np.asarray(y, dtype=float)
    if y.shape != (2,):
        raise ValueError("expected a 2-vector")
    rho2 = float(y @ y)
    return np.array([2.0 * y[0], 2.0 * y[1], rho2 - 1.0]) / (rho2 + 1.0)


@dataclass
class SingularData:
    """Conical atoms (order, planar location) plus the smooth weight exponent l.

    An atom location of None means a centered atom. Negative orders carry
    positive singular mass 4*pi*|alpha_j|; the package flags (but does not
    reject) data whose total positive mass reaches 4*pi.
    """

    atoms: list[tuple[float, np.ndarray | None]] = field(default_factory=list)
    smooth_exponent: float = 0.0

    def __post_init__(self) -> None:
        cleaned = []
        for order, loc in self.atoms:
            if not order > -1.0:
                raise OrderOutOfRangeError(f"atom order {order} must exceed -1")
            cleaned.append((float(order), None if loc is None else np.asarray(loc, dtype=float)))
        self.atoms = cleaned
        if not self.positive_mass_ok:
            warnings.warn(
                "total positive singular mass reaches 4*pi: alpha(plane) >= 1",
                stacklevel=2,
            )

    @property
    def alpha_plane(self) -> float:
        atom_part = sum(-order for order, _ in self.atoms if order < 0.0)
        return max(self.smooth_exponent, 0.0) + atom_part

    @property
    def positive_mass_ok(self) -> bool:
        return self.alpha_plane < 1.0


def reduce_sphere_to_plane(rho: float, atoms: list[tuple[float, object]]) -> SingularData:
    """Planar reduction of the sphere problem: weight exponent and atom images.

    l = (4*pi*(2 + sum alpha_j) - rho) / 4*pi; atoms given as (order, sphere
    point) are projected, (order, None) stays centered. Any valid planar
    solution carries total mass int h e^u = rho.
    """
    if not rho > 0.0:
        raise ValueError("rho must be positive")
    projected: list[tuple[float, np.ndarray | None]] = []
    order_sum = 0.0
    for order, loc in atoms:
        order_sum += order
        projected.append((order, None if loc is None else stereographic(loc)))
    ell = (FOUR_PI * (2.0 + order_sum) - rho) / FOUR_PI
    return SingularData(atoms=projected, smooth_exponent=ell)


@dataclass(frozen=True)
class RegionDescriptor:
    """Centered disk/annulus, off-center disk, half-disk, or the whole plane."""

    kind: str
    radius: float | None = None
    r_in: float | None = None
    r_out: float | None = None
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        if self.kind == "disk" or self.kind == "half_disk":
            if self.radius is None or self.radius <= 0.0:
                raise ValueError("disk regions need a positive radius")
        elif self.kind == "annulus":
            if self.r_in is None or self.r_out is None or not (0.0 < self.r_in < self.r_out):
                raise ValueError("annulus needs 0 < r_in < r_out")
        elif self.kind != "plane":
            raise ValueError(f"unknown region kind {self.kind!r}")

    @property
    def simply_connected(self) -> bool:
        return self.kind != "annulus"

    def contains(self, point) -> bool:
        q = np.asarray(point, dtype=float)
        if self.kind == "plane":
            return True
        if self.kind == "disk":
            return float(np.hypot(q[0] - self.center[0], q[1] - self.center[1])) < self.radius
        if self.kind == "half_disk":
            return float(np.hypot(q[0], q[1])) < self.radius and q[1] > 0.0
        return self.r_in < float(np.hypot(q[0], q[1])) < self.r_out


def fill_holes(region: RegionDescriptor) -> RegionDescriptor:
    """Interior-of-closure hole filling: an annulus becomes its outer disk."""
    if region.kind == "annulus":
        return RegionDescriptor(kind="disk", radius=region.r_out)
    return region


def sphere_area_fraction(region: RegionDescriptor, tol: float = 1e-10) -> float:
    """Normalized spherical area of the hole-filled region.

    (1/4*pi) int 4/(1+|x|^2)^2 dx over the filled region: closed form
    r^2/(1+r^2) for centered disks, 1 for the plane; off-center disks reduce
    to a radial integral against the subtended-angle fraction.
    """
    filled = fill_holes(region)
    if filled.kind == "plane":
        return 1.0
    if filled.kind == "half_disk":
        r2 = filled.radius**2
        return 0.5 * r2 / (1.0 + r2)
    offset = float(np.hypot(*filled.center))
    if offset == 0.0:
        r2 = filled.radius**2
        return r2 / (1.0 + r2)

    R, d = filled.radius, offset

    def angular_density(s: np.ndarray) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        cosarg = (s**2 + d**2 - R**2) / (2.0 * s * d)
        theta = 2.0 * np.arccos(np.clip(cosarg, -1.0, 1.0))
        theta = np.where(s <= max(R - d, 0.0), 2.0 * np.pi, theta)
        theta = np.where(s >= R + d, 0.0, theta)
        return (theta / (2.0 * np.pi)) * 4.0 / (1.0 + s**2) ** 2

    w = WeightedRadialDensity(0.0, angular_density)
    return annulus_integral(w, 0.0, R + d, tol) / FOUR_PI


def alpha_region(data: SingularData, region: RegionDescriptor) -> float:
    """Normalized positive singular mass of the (hole-filled) region.

    max(l, 0) times the spherical area fraction, plus |alpha_j| for every
    negative-order atom inside the filled region. Positive orders sit on the
    negative side of the curvature decomposition and contribute nothing.
    """
    filled = fill_holes(region)
    smooth = max(data.smooth_exponent, 0.0)
    value = smooth * sphere_area_fraction(region) if smooth > 0.0 else 0.0
    for order, loc in data.atoms:
        if order < 0.0:
            point = (0.0, 0.0) if loc is None else loc
            if filled.contains(point):
                value -= order
    return float(value)


def thresholds(orders: list[float], domain: str) -> dict:
    """Uniqueness/coercivity threshold record for the sphere or disk problem.

    Sphere (orders in (-1,0)): uniqueness below 4*pi*(2 + sum alpha_j), the
    same level is the constant-curvature polytope level (applicable for
    N >= 3), coercivity below 8*pi*(1 + min alpha_j), and existence requires
    sum alpha_j > -2. Disk (orders > -1): uniqueness up to 8*pi*(1 - alpha)
    with alpha = -sum of the negative orders.
    """
    orders = [float(o) for o in orders]
    for o in orders:
        if not o > -1.0:
            raise OrderOutOfRangeError(f"order {o} must exceed -1")
    min_neg = min([min(o, 0.0) for o in orders], default=0.0)
    coercivity = 8.0 * np.pi * (1.0 + min_neg)
    record = {
        "sphere_uniqueness": None,
        "polytope_level": None,
        "polytope_applicable": None,
        "coercivity": coercivity,
        "disk_uniqueness": None,
        "necessity_ok": None,
    }
    if domain == "sphere":
        for o in orders:
            if not (-1.0 < o < 0.0):
                raise OrderOutOfRangeError(
                    f"sphere thresholds need orders in (-1, 0); got {o}"
                )
        s = sum(orders)
        level = FOUR_PI * (2.0 + s)
        record["sphere_uniqueness"] = level
        record["polytope_level"] = level
        record["polytope_applicable"] = len(orders) >= 3
        record["necessity_ok"] = s > -2.0
    elif domain == "disk":
        alpha = -sum(o for o in orders if o < 0.0)
        record["disk_uniqueness"] = 8.0 * np.pi * (1.0 - alpha)
    else:
        raise ValueError(f"unknown domain {domain!r}")
    return record


@dataclass(frozen=True)
class ShootResult:
    """Shot radial profile with the matched scale and its total mass."""

    profile: RadialProfile
    lam: float | None
    rho: float
    mass_tolerance: float


def _shoot_disk_once(
    v0: float, alpha: float, n_nodes: int, rtol: float
) -> tuple[np.ndarray, np.ndarray, float]:
    """Integrate v'' + v'/r + r^(-2a) e^v = 0 on (0, 1] from a series start.

    Returns (nodes, values, mass over the unit disk). Works in t = ln r where
    the equation is g'' = -e^(2at) e^g; the start radius adapts so the
    truncated series error stays below 1e-10.
    """
    a = 1.0 - alpha
    c = np.exp(v0) / (8.0 * a**2)  # the would-be bubble scale factor lam^2/8
    t0 = min(np.log(1e-6), (np.log(1e-5) - np.log(c)) / (2.0 * a))
    s0 = np.exp(2.0 * a * t0)
    g0 = v0 - np.exp(v0) * s0 / (2.0 * a) ** 2
    p0 = -np.exp(v0) * s0 / (2.0 * a)
    m0 = np.pi * np.exp(v0) * s0 / a

    def rhs(t, y):
        g = y[0]
        grow = np.exp(2.0 * a * t + g)
        return [y[1], -grow, 2.0 * np.pi * grow]

    t_eval = np.linspace(t0, 0.0, n_nodes)
    sol = solve_ivp(
        rhs, (t0, 0.0), [g0, p0, m0], t_eval=t_eval, method="RK45",
        rtol=rtol, atol=1e-13,
    )
    if not sol.success:
        raise NoConvergenceError(f"disk shooting failed: {sol.message}")
    return np.exp(sol.t), sol.y[0], float(sol.y[2][-1])


def shoot_disk(
    alpha: float,
    target: str,
    value: float,
    n_nodes: int = 800,
    rtol: float = 1e-10,
) -> ShootResult:
    """Radial shooting for the singular disk problem on the unit disk.

    target "lambda": integrate from center value 2*ln(lambda*(1-alpha)) and
    report the resulting total mass rho. target "rho": find the center value
    whose shot mass equals rho (requires rho < 8*pi*(1-alpha)) and report
    the matched lambda. The map rho <-> lambda must reproduce the
    closed-form bubble mass.
    """
    if not (0.0 <= alpha < 1.0):
        raise ValueError("alpha must lie in [0, 1)")
    a = 1.0 - alpha
    if target == "lambda":
        lam = float(value)
        if lam <= 0.0:
            raise ValueError("lambda must be positive")
        v0 = 2.0 * np.log(lam * a)
        nodes, values, mass = _shoot_disk_once(v0, alpha, n_nodes, rtol)
        profile = RadialProfile(nodes, values, v0)
        return ShootResult(profile, lam, mass, rtol * mass)
    if target != "rho":
        raise ValueError("target must be 'lambda' or 'rho'")

    rho = float(value)
    if not (0.0 < rho < total_mass(alpha)):
        raise RhoOutOfRangeError(
            f"need 0 < rho < 8*pi*(1-alpha) = {total_mass(alpha):g}"
        )
    # closed-form inversion gives the bracket; the root condition itself is
    # the shot mass, so the returned lambda is the integrator's answer
    t_guess = rho / (total_mass(alpha) - rho)
    v_guess = 2.0 * np.log(np.sqrt(8.0 * t_guess) * a)

    def objective(v0: float) -> float:
        return _shoot_disk_once(v0, alpha, 200, rtol)[2] - rho

    lo, hi = v_guess - 0.5, v_guess + 0.5
    f_lo, f_hi = objective(lo), objective(hi)
    for _ in range(30):
        if f_lo < 0.0 < f_hi:
            break
        if f_lo >= 0.0:
            lo -= 1.0
            f_lo = objective(lo)
        if f_hi <= 0.0:
            hi += 1.0
            f_hi = objective(hi)
    else:
        raise NoConvergenceError("could not bracket the center value")
    v0 = brentq(objective, lo, hi, xtol=1e-13, rtol=8.9e-16)
    nodes, values, mass = _shoot_disk_once(v0, alpha, n_nodes, rtol)
    lam = float(np.exp(v0 / 2.0) / a)
    return ShootResult(RadialProfile(nodes, values, v0), lam, mass, rtol * mass)


def _shoot_sphere_once(
    u0: float, ell: float, r_max: float, n_nodes: int, rtol: float
) -> tuple[np.ndarray, np.ndarray, float, float]:
    """Integrate u'' + u'/r + (1+r^2)^(-l) e^u = 0; returns nodes, values, mass, tail."""
    r0 = 1e-6
    t0, t1 = np.log(r0), np.log(r_max)
    g0 = u0 - np.exp(u0) * r0**2 / 4.0
    p0 = -np.exp(u0) * r0**2 / 2.0
    m0 = np.pi * np.exp(u0) * r0**2

    def rhs(t, y):
        grow = np.exp(2.0 * t - ell * np.log1p(np.exp(2.0 * t)) + y[0])
        return [y[1], -grow, 2.0 * np.pi * grow]

    t_eval = np.linspace(t0, t1, n_nodes)
    sol = solve_ivp(
        rhs, (t0, t1), [g0, p0, m0], t_eval=t_eval, method="RK45",
        rtol=rtol, atol=1e-13,
    )
    if not sol.success:
        raise NoConvergenceError(f"sphere shooting failed: {sol.message}")
    g_end, p_end, mass = sol.y[0][-1], sol.y[1][-1], float(sol.y[2][-1])
    decay = -p_end  # -r u'(r_max), the log-decay exponent at the cutoff
    denom = decay + 2.0 * ell - 2.0
    if denom > 0.05:
        tail = 2.0 * np.pi * np.exp(g_end) * r_max ** (2.0 - 2.0 * ell) / denom
    else:
        tail = np.inf
    return np.exp(sol.t), sol.y[0], mass, tail


def shoot_sphere(
    rho: float,
    u0: float,
    r_max: float = 1e4,
    n_nodes: int = 1200,
    rtol: float = 1e-10,
) -> ShootResult:
    """Shoot the stereographic reduction of the regular sphere problem.

    Weight (1 + r^2)^(-l) with l = (8*pi - rho)/4*pi. Returns the profile on
    [1e-6, r_max], the mass over that ball, and a mass tolerance that
    includes the analytic log-decay tail bound past the cutoff.
    """
    if not (0.0 < rho < 8.0 * np.pi):
        raise RhoOutOfRangeError("need 0 < rho < 8*pi for the regular sphere case")
    ell = (8.0 * np.pi - rho) / FOUR_PI
    nodes, values, mass, tail = _shoot_sphere_once(u0, ell, r_max, n_nodes, rtol)
    profile = RadialProfile(nodes, values, u0)
    return ShootResult(profile, None, mass, tail + rtol * mass)


@dataclass(frozen=True)
class ScanResult:
    """Center-value scan of the sphere mass map around the matched solution."""

    rho: float
    u0_values: np.ndarray
    masses: np.ndarray
    u_star: float
    strictly_monotone: bool


def uniqueness_scan(
    rho: float,
    n_samples: int = 50,
    window: float = 4.0,
    r_max: float = 1e4,
    rtol: float = 1e-10,
) -> ScanResult:
    """Sample the center-value -> mass map around the solution of mass rho.

    A strictly monotone map means at most one radial solution with that
    mass. The center value u* is located by root finding on the shot mass;
    the scan covers [u* - window, u* + window].
    """
    if not (0.0 < rho < 8.0 * np.pi):
        raise RhoOutOfRangeError("need 0 < rho < 8*pi")
    ell = (8.0 * np.pi - rho) / FOUR_PI

    def mass_of(u0: float) -> float:
        return _shoot_sphere_once(u0, ell, r_max, 160, rtol)[2]

    lo, hi = np.log(4.0) - 6.0, np.log(4.0) + 6.0
    f_lo, f_hi = mass_of(lo) - rho, mass_of(hi) - rho
    for _ in range(20):
        if f_lo < 0.0 < f_hi:
            break
        if f_lo >= 0.0:
            lo -= 2.0
            f_lo = mass_of(lo) - rho
        if f_hi <= 0.0:
            hi += 2.0
            f_hi = mass_of(hi) - rho
    else:
        raise NoConvergenceError("could not bracket the matched center value")
    u_star = brentq(lambda u: mass_of(u) - rho, lo, hi, xtol=1e-10)

    u0_values = np.linspace(u_star - window, u_star + window, n_samples)
    masses = np.array([mass_of(u) for u in u0_values])
    monotone = bool(np.all(np.diff(masses) > 0.0))
    return ScanResult(rho, u0_values, masses, float(u_star), monotone)
