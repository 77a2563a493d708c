"""Equimeasurable rearrangement of a function with respect to two measures.

Given phi on a region carrying a source measure, the rearranged phi* is the
radial nonincreasing function on a centered ball such that for every level t
the target measure of {phi* > t} equals the source measure of {phi > t}.
The target measure here is always a centered bubble measure
r^(-2*alpha) e^U dx, whose cumulative mass and its inverse are closed forms,
so the construction reduces to composing the source distribution function
with that inverse.

Two carriers are supported: sampled radial profiles (piecewise-linear in
radius between nodes) and 2-d cell grids (each cell's value constant on the
cell, level sets are unions of cells, ties broken by cell index).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator

from .bubble import BubbleParams, bubble_mass, bubble_mass_inverse, eval_bubble, total_mass
from .errors import TargetExhaustedError
from .profiles import RadialProfile, radial_derivative
from .quadrature import CumulativeMass, WeightedRadialDensity, cumulative_mass_table
from .reporting import DeficitReport


def bubble_measure(params: BubbleParams) -> WeightedRadialDensity:
    """The weighted measure r^(-2*alpha) e^U dx carried by a bubble."""
    return WeightedRadialDensity(params.alpha, lambda r: np.exp(eval_bubble(params, r)))


def lebesgue_measure() -> WeightedRadialDensity:
    """Plain area measure (alpha = 0, unit density)."""
    return WeightedRadialDensity(0.0, lambda r: np.ones_like(np.asarray(r, dtype=float)))


@dataclass
class CellGrid2D:
    """n x n uniform cells: per-cell value of phi and per-cell source mass."""

    phi: np.ndarray
    mass: np.ndarray

    def __post_init__(self) -> None:
        phi = np.asarray(self.phi, dtype=float)
        mass = np.asarray(self.mass, dtype=float)
        if phi.shape != mass.shape or phi.ndim != 2:
            raise ValueError("phi and mass must be 2-d arrays of the same shape")
        if phi.shape[0] < 2 or phi.shape[1] < 2:
            raise ValueError("need at least a 2 x 2 grid")
        if np.any(mass < 0.0):
            raise ValueError("cell masses must be nonnegative")
        self.phi = phi
        self.mass = mass

    @property
    def n(self) -> int:
        return self.phi.shape[0]

    @property
    def total_mass(self) -> float:
        return float(self.mass.sum())

    @classmethod
    def from_function(
        cls,
        f: Callable[[np.ndarray, np.ndarray], np.ndarray],
        n: int,
        half_width: float = 1.0,
        domain_radius: float | None = None,
    ) -> "CellGrid2D":
        """Sample f at cell centers of [-w, w]^2 with Lebesgue cell masses.

        With ``domain_radius`` set, only cells whose center lies in that disk
        carry mass (the rest get zero mass and do not participate).
        """
        w = half_width
        centers = -w + (np.arange(n) + 0.5) * (2.0 * w / n)
        x, y = np.meshgrid(centers, centers, indexing="ij")
        phi = f(x, y)
        mass = np.full((n, n), (2.0 * w / n) ** 2)
        if domain_radius is not None:
            mass[x**2 + y**2 > domain_radius**2] = 0.0
        return cls(phi, mass)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["i", "j", "phi", "mass"])
            for i in range(self.n):
                for j in range(self.phi.shape[1]):
                    writer.writerow(
                        [i, j, format(self.phi[i, j], ".17g"), format(self.mass[i, j], ".17g")]
                    )

    @classmethod
    def from_csv(cls, path) -> "CellGrid2D":
        rows: list[tuple[int, int, float, float]] = []
        with open(path, newline="") as handle:
            reader = csv.reader(handle)
            header = next(reader)
            if [h.strip().lower() for h in header[:4]] != ["i", "j", "phi", "mass"]:
                raise ValueError(f"expected header 'i,j,phi,mass', got {header!r}")
            for row in reader:
                if not row:
                    continue
                rows.append((int(row[0]), int(row[1]), float(row[2]), float(row[3])))
        ni = max(r[0] for r in rows) + 1
        nj = max(r[1] for r in rows) + 1
        phi = np.zeros((ni, nj))
        mass = np.zeros((ni, nj))
        for i, j, p, m in rows:
            phi[i, j] = p
            mass[i, j] = m
        return cls(phi, mass)


@dataclass
class MeasurePair:
    """Source measure on the domain of phi, plus the target bubble measure."""

    source: WeightedRadialDensity | CellGrid2D | None
    target: BubbleParams

    @property
    def target_total(self) -> float:
        return total_mass(self.target.alpha)


class StepDistribution:
    """m(t) = source mass of {phi > t} for piecewise-constant phi (cells)."""

    def __init__(self, values: np.ndarray, masses: np.ndarray) -> None:
        values = np.asarray(values, dtype=float).ravel()
        masses = np.asarray(masses, dtype=float).ravel()
        keep = masses > 0.0
        values, masses = values[keep], masses[keep]
        order = np.argsort(values, kind="stable")
        values, masses = values[order], masses[order]
        self.levels, inverse = np.unique(values, return_inverse=True)
        sums = np.zeros(self.levels.size)
        np.add.at(sums, inverse, masses)
        # mass strictly above each level, by suffix sums
        suffix = np.concatenate((np.cumsum(sums[::-1])[::-1], [0.0]))
        self._mass_above = suffix[1:]
        self.total = float(sums.sum())
        self.t_min = float(self.levels[0])
        self.t_max = float(self.levels[-1])

    def __call__(self, t: float | np.ndarray) -> np.ndarray | float:
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.levels, t, side="right") - 1
        out = np.where(idx < 0, self.total, self._mass_above[np.clip(idx, 0, None)])
        return float(out) if out.ndim == 0 else out


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(5)


class RadialDistribution:
    """m(t) = source mass of {phi > t} for a piecewise-linear radial phi.

    Node masses come from the cumulative table; the partial mass of a
    crossed segment is integrated locally (5-point Gauss-Legendre in
    s = r^(2(1-alpha))), so level-set masses carry no interpolation error
    beyond the table's own.
    """

    def __init__(
        self,
        profile: RadialProfile,
        table: CumulativeMass,
        source: WeightedRadialDensity,
    ) -> None:
        self.profile = profile
        self.table = table
        self.source = source
        self.total = table.total
        head = profile.center_value if profile.center_value is not None else profile.values[0]
        self._head_value = head
        self.t_min = float(min(profile.values.min(), head))
        self.t_max = float(max(profile.values.max(), head))

    def _partial_mass(self, r_a: float, r_b: float) -> float:
        """2*pi int_{r_a}^{r_b} d(r) r^(1-2*alpha) dr by local Gauss-Legendre."""
        if r_b <= r_a:
            return 0.0
        a = self.source.a
        s_a, s_b = r_a ** (2.0 * a), r_b ** (2.0 * a)
        mid, half = 0.5 * (s_a + s_b), 0.5 * (s_b - s_a)
        s = mid + half * _GL_NODES
        values = self.source(s ** (1.0 / (2.0 * a)))
        return float(np.pi / a * half * np.dot(_GL_WEIGHTS, values))

    def __call__(self, t: float | np.ndarray) -> np.ndarray | float:
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.array([self._mass_above(tt) for tt in t_arr])
        return float(out[0]) if np.ndim(t) == 0 else out

    def _mass_above(self, t: float) -> float:
        v = self.profile.values
        r = self.profile.nodes
        masses = self.table.masses
        total = 0.0
        if self._head_value > t:
            total += masses[0]
        left, right = v[:-1], v[1:]
        seg_mass = np.diff(masses)
        full = (left > t) & (right > t)
        total += seg_mass[full].sum()
        down = (left > t) & (right <= t)   # crossing, decreasing through t
        up = (left <= t) & (right > t)     # crossing, increasing through t
        for idx in np.nonzero(down)[0]:
            rc = r[idx] + (left[idx] - t) / (left[idx] - right[idx]) * (r[idx + 1] - r[idx])
            total += self._partial_mass(r[idx], rc)
        for idx in np.nonzero(up)[0]:
            rc = r[idx] + (t - left[idx]) / (right[idx] - left[idx]) * (r[idx + 1] - r[idx])
            total += self._partial_mass(rc, r[idx + 1])
        return total


def distribution_function(
    phi: RadialProfile | CellGrid2D,
    source: WeightedRadialDensity | None = None,
) -> StepDistribution | RadialDistribution:
    """The right-continuous nonincreasing map t -> source mass of {phi > t}.

    Cell grids carry their own masses; radial profiles need the source
    measure, whose cumulative table is evaluated at the profile nodes.
    """
    if isinstance(phi, CellGrid2D):
        return StepDistribution(phi.phi, phi.mass)
    if source is None:
        raise ValueError("a radial phi needs an explicit source measure")
    table = cumulative_mass_table(source, phi.nodes)
    return RadialDistribution(phi, table, source)


def _superlevel_radius(profile: RadialProfile, t: np.ndarray) -> np.ndarray:
    """Outer radius of {phi* > t} for a nonincreasing radial profile."""
    values = profile.values
    radii = profile.nodes
    if profile.center_value is not None and profile.center_value > values[0]:
        values = np.concatenate(([profile.center_value], values))
        radii = np.concatenate(([0.0], radii))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty(t.shape)
    # values nonincreasing; find last index with value > t
    k = np.searchsorted(-values, -t, side="left") - 1
    for m, (tt, kk) in enumerate(zip(t, k)):
        if kk < 0:
            out[m] = 0.0
        elif kk >= values.size - 1:
            out[m] = radii[-1]
        else:
            v0, v1 = values[kk], values[kk + 1]
            if v1 > tt:  # ran off a flat tail
                out[m] = radii[-1]
            else:
                frac = (v0 - tt) / (v0 - v1) if v0 > v1 else 0.0
                out[m] = radii[kk] + frac * (radii[kk + 1] - radii[kk])
    return out


def rearrange_two_measures(
    phi: RadialProfile | CellGrid2D,
    pair: MeasurePair,
) -> RadialProfile:
    """Radial nonincreasing phi* equimeasurable with phi across the two measures.

    Monotone radial phi maps node-by-node: each source radius goes to the
    target radius enclosing the same mass, preserving the sampled values.
    Cell grids sort cells by value (ties by cell index), transport the
    cumulative masses, and sample the resulting staircase at n equal-mass
    radii, n being the grid resolution.
    """
    params = pair.target

    if isinstance(phi, CellGrid2D):
        return _rearrange_cells(phi, params)

    if pair.source is None or isinstance(pair.source, CellGrid2D):
        raise ValueError("radial phi needs a radial source measure")
    table = cumulative_mass_table(pair.source, phi.nodes)
    _check_exhaustion(table.total, params)

    if phi.is_strictly_decreasing():
        radii = np.array([bubble_mass_inverse(params, m) for m in table.masses])
        keep = np.concatenate(([radii[0] > 0.0], np.diff(radii) > 0.0))
        return RadialProfile(radii[keep], phi.values[keep], phi.center_value)

    # general radial: transport the distribution function on a fine level grid
    dist = RadialDistribution(phi, table, pair.source)
    if dist.t_max - dist.t_min <= 0.0:
        # constant phi: phi* is that constant on the equal-mass ball
        r_out = bubble_mass_inverse(params, table.total)
        return RadialProfile(
            np.array([0.5 * r_out, r_out]),
            np.array([dist.t_max, dist.t_max]),
            float(dist.t_max),
        )
    n_levels = max(1024, 2 * phi.nodes.size)
    levels = np.linspace(dist.t_min, dist.t_max, n_levels)
    masses = np.maximum.accumulate(np.asarray(dist(levels))[::-1])[::-1]
    radii = np.array([bubble_mass_inverse(params, m) for m in masses])
    # levels ascend, masses and radii descend: reverse to an ascending profile
    radii, values = radii[::-1], levels[::-1]
    keep = np.concatenate(([radii[0] > 0.0], np.diff(radii) > 0.0))
    center = float(dist.t_max) if radii[0] == 0.0 else None
    return RadialProfile(radii[keep], values[keep], center)


def _check_exhaustion(source_total: float, params: BubbleParams) -> None:
    limit = total_mass(params.alpha)
    if source_total >= limit * (1.0 - 1e-9):
        raise TargetExhaustedError(
            f"source mass {source_total:g} reaches the target total {limit:g}; "
            "the rearranged support exhausts the plane"
        )


def _rearrange_cells(grid: CellGrid2D, params: BubbleParams) -> RadialProfile:
    flat_phi = grid.phi.ravel()
    flat_mass = grid.mass.ravel()
    active = flat_mass > 0.0
    flat_phi, flat_mass = flat_phi[active], flat_mass[active]
    order = np.argsort(-flat_phi, kind="stable")
    sorted_phi = flat_phi[order]
    cum = np.cumsum(flat_mass[order])
    _check_exhaustion(float(cum[-1]), params)

    n_out = grid.n
    node_masses = cum[-1] * (np.arange(1, n_out + 1)) / n_out
    node_radii = np.array([bubble_mass_inverse(params, m) for m in node_masses])
    idx = np.searchsorted(cum, node_masses * (1.0 - 1e-15), side="left")
    node_values = sorted_phi[np.clip(idx, 0, sorted_phi.size - 1)]
    keep = np.concatenate(([node_radii[0] > 0.0], np.diff(node_radii) > 0.0))
    return RadialProfile(node_radii[keep], node_values[keep], float(sorted_phi[0]))


def equimeasurability_report(
    phi: RadialProfile | CellGrid2D,
    phi_star: RadialProfile,
    pair: MeasurePair,
    n_levels: int = 200,
    tolerance: float | None = None,
) -> DeficitReport:
    """Max over levels of |target mass{phi*>t} - source mass{phi>t}|/total.

    Levels: n_levels uniform between min and max of phi, joined with every
    distinct sampled value when there are fewer than n_levels of them.
    """
    source = None if isinstance(phi, CellGrid2D) else pair.source
    dist = distribution_function(phi, source)
    levels = np.linspace(dist.t_min, dist.t_max, n_levels)
    if isinstance(phi, CellGrid2D):
        distinct = np.unique(phi.phi.ravel())
    else:
        distinct = np.unique(phi.values)
    if distinct.size < n_levels:
        levels = np.union1d(levels, distinct)

    m_src = np.asarray(dist(levels))
    rho = _superlevel_radius(phi_star, levels)
    m_tgt = np.array(
        [bubble_mass(pair.target, r) if r > 0.0 else 0.0 for r in rho]
    )
    mismatch = float(np.max(np.abs(m_tgt - m_src)) / dist.total)

    if tolerance is None:
        tolerance = 2.0 / phi.n if isinstance(phi, CellGrid2D) else 1e-9
    return DeficitReport.from_sides(
        op="equimeasurability",
        inputs={"levels": int(levels.size), "total_mass": dist.total},
        lhs=mismatch,
        rhs=0.0,
        tolerance=tolerance,
        orientation=-1.0,
    )


def gradient_level_check(
    phi: RadialProfile,
    pair: MeasurePair,
    n_levels: int = 200,
    tolerance: float = 1e-6,
) -> DeficitReport:
    """Level-by-level boundary gradient comparison after rearrangement.

    For strictly decreasing radial phi with source measure in the bubble
    equality configuration, int_{phi*=t} |grad phi*| equals
    int_{phi=t} |grad phi| up to discretization; the report carries the
    signed worst-case gap (positive means the rearranged side exceeds).
    """
    if not phi.is_strictly_decreasing():
        raise ValueError("gradient_level_check expects strictly decreasing phi")
    phi_star = rearrange_two_measures(phi, pair)

    dphi = radial_derivative(phi.nodes, phi.values)
    dstar = radial_derivative(phi_star.nodes, phi_star.values)
    interp_phi = PchipInterpolator(np.log(phi.nodes), np.abs(dphi), extrapolate=False)
    interp_star = PchipInterpolator(np.log(phi_star.nodes), np.abs(dstar), extrapolate=False)

    lo = max(phi.values.min(), phi_star.values.min())
    hi = min(phi.values.max(), phi_star.values.max())
    span = hi - lo
    levels = np.linspace(lo + 1e-3 * span, hi - 1e-3 * span, n_levels)

    rho = np.clip(_superlevel_radius(phi, levels), phi.r_min, phi.r_max)
    rho_star = np.clip(_superlevel_radius(phi_star, levels), phi_star.r_min, phi_star.r_max)
    rhs_vals = 2.0 * np.pi * rho * interp_phi(np.log(rho))
    lhs_vals = 2.0 * np.pi * rho_star * interp_star(np.log(rho_star))
    gaps = lhs_vals - rhs_vals
    worst = int(np.argmax(gaps))
    return DeficitReport.from_sides(
        op="gradient_level_check",
        inputs={"levels": int(n_levels), "worst_level": float(levels[worst])},
        lhs=float(lhs_vals[worst]),
        rhs=float(rhs_vals[worst]),
        tolerance=tolerance,
        orientation=-1.0,
    )
