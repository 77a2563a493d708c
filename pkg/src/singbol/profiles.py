"""Radial grids, sampled radial profiles, and derivative/quadrature helpers.

A ``RadialProfile`` is the universal carrier for sampled radial functions:
decreasing Liouville profiles, densities, and rearranged functions alike.
Grids are geometric by default so that the r^(2(1-alpha)) scale near the
origin is resolved; most numerics therefore run in t = ln r, where a
geometric grid is uniform and the planar Laplacian of a radial function is
simply g''(t)/r^2.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson


def radial_grid(r_min: float = 1e-6, r_max: float = 100.0, n: int = 2000) -> np.ndarray:
    """Geometric grid on [r_min, r_max].

    The defaults span eight decades, so one quarter of the nodes lie in
    [r_min, 100*r_min] and the near-origin power-law region is resolved.
    """
    if not (0.0 < r_min < r_max):
        raise ValueError("need 0 < r_min < r_max")
    if n < 8:
        raise ValueError("need at least 8 nodes")
    return np.geomspace(r_min, r_max, n)


@dataclass(frozen=True)
class RadialProfile:
    """Sampled radial function: strictly ascending positive radii and values.

    ``center_value`` optionally records the finite limit at r = 0.
    """

    nodes: np.ndarray
    values: np.ndarray
    center_value: float | None = None

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if nodes.ndim != 1 or values.ndim != 1 or nodes.size != values.size:
            raise ValueError("nodes and values must be 1-d arrays of equal length")
        if nodes.size < 2:
            raise ValueError("a profile needs at least two nodes")
        if nodes[0] <= 0.0:
            raise ValueError("radii must be positive (record r=0 via center_value)")
        if np.any(np.diff(nodes) <= 0.0):
            raise ValueError("radii must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)

    @property
    def r_min(self) -> float:
        return float(self.nodes[0])

    @property
    def r_max(self) -> float:
        return float(self.nodes[-1])

    def is_strictly_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.values) < 0.0))

    def shifted(self, c: float) -> "RadialProfile":
        center = None if self.center_value is None else self.center_value + c
        return RadialProfile(self.nodes, self.values + c, center)

    def value_at(self, r: float | np.ndarray) -> np.ndarray:
        """Monotone cubic interpolation of the values in log-radius."""
        from scipy.interpolate import PchipInterpolator

        interp = PchipInterpolator(np.log(self.nodes), self.values, extrapolate=False)
        r = np.asarray(r, dtype=float)
        out = interp(np.log(r))
        if np.any(np.isnan(out)):
            raise ValueError("interpolation query outside the sampled radius range")
        return out

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["r", "value"])
            if self.center_value is not None:
                writer.writerow(["0", format(self.center_value, ".17g")])
            for r, v in zip(self.nodes, self.values):
                writer.writerow([format(r, ".17g"), format(v, ".17g")])

    @classmethod
    def from_csv(cls, path) -> "RadialProfile":
        radii: list[float] = []
        values: list[float] = []
        center = None
        with open(path, newline="") as handle:
            reader = csv.reader(handle)
            header = next(reader)
            if [h.strip().lower() for h in header[:2]] != ["r", "value"]:
                raise ValueError(f"expected header 'r,value', got {header!r}")
            for row in reader:
                if not row:
                    continue
                r, v = float(row[0]), float(row[1])
                if r == 0.0:
                    center = v
                    continue
                radii.append(r)
                values.append(v)
        return cls(np.asarray(radii), np.asarray(values), center)


def _fornberg_weights(x0: float, x: np.ndarray, m: int) -> np.ndarray:
    """Finite-difference weights for the m-th derivative at x0 on nodes x."""
    n = len(x)
    c = np.zeros((n, m + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = x[0] - x0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - x0
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, m]


def _log_spacing(nodes: np.ndarray) -> tuple[np.ndarray, float | None]:
    t = np.log(nodes)
    dt = np.diff(t)
    h = dt.mean()
    if np.max(np.abs(dt - h)) <= 1e-9 * abs(h):
        return t, float(h)
    return t, None


def radial_derivative(nodes: np.ndarray, values: np.ndarray) -> np.ndarray:
    """d(value)/dr at the nodes, 4th order.

    Works in t = ln r. Geometric grids take the classical five-point
    stencils (shifted windows near the ends, still 4th order); arbitrary
    ascending grids fall back to per-node Fornberg weights.
    """
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    n = nodes.size
    if n < 5:
        t = np.log(nodes)
        out = np.empty(n)
        for i in range(n):
            out[i] = _fornberg_weights(t[i], t, 1) @ values
        return out / nodes

    t, h = _log_spacing(nodes)
    dv_dt = np.empty(n)
    if h is not None:
        g = values
        dv_dt[2:-2] = (g[:-4] - 8.0 * g[1:-3] + 8.0 * g[3:-1] - g[4:]) / (12.0 * h)
        # 4th-order shifted five-point stencils at the two nodes on each end
        w_edge = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / (12.0 * h)
        w_next = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / (12.0 * h)
        dv_dt[0] = w_edge @ g[:5]
        dv_dt[1] = w_next @ g[:5]
        dv_dt[-2] = -(w_next @ g[-5:][::-1])
        dv_dt[-1] = -(w_edge @ g[-5:][::-1])
    else:
        for i in range(n):
            lo = min(max(i - 2, 0), n - 5)
            window = slice(lo, lo + 5)
            dv_dt[i] = _fornberg_weights(t[i], t[window], 1) @ values[window]
    return dv_dt / nodes


def cumulative_weighted_mass(
    nodes: np.ndarray,
    density: np.ndarray,
    alpha: float,
    center_density: float | None = None,
) -> np.ndarray:
    """Cumulative planar mass 2*pi * int_0^{r_i} d(r) r^(1-2a) dr at the nodes.

    Composite Simpson in t = ln r on the sampled body, plus an analytic head
    for (0, r_0]: with s = r^(2(1-alpha)) the head integrand is smooth, and a
    quadratic fit of d(s) through the first nodes integrates it exactly up to
    O(s_0^4) terms.
    """
    nodes = np.asarray(nodes, dtype=float)
    density = np.asarray(density, dtype=float)
    a = 1.0 - alpha
    t = np.log(nodes)
    integrand = 2.0 * np.pi * density * np.exp(2.0 * a * t)
    body = cumulative_simpson(integrand, x=t, initial=0.0)

    s = nodes ** (2.0 * a)
    s0 = s[0]
    if nodes.size >= 3:
        # quadratic through (s_0..s_2, d_0..d_2), integrated exactly on [0, s_0];
        # higher order than freezing the center density
        coeffs = np.polyfit(s[:3], density[:3], 2)
        head_density_integral = (
            coeffs[0] * s0**3 / 3.0 + coeffs[1] * s0**2 / 2.0 + coeffs[2] * s0
        )
        head_density_integral = max(head_density_integral, 0.0)
    else:
        d0 = density[0] if center_density is None else center_density
        head_density_integral = d0 * s0
    head = (np.pi / a) * head_density_integral
    return head + body


def mass_between(
    nodes: np.ndarray, density: np.ndarray, alpha: float
) -> np.ndarray:
    """Cumulative mass from the first node (no head term), Simpson in log r."""
    nodes = np.asarray(nodes, dtype=float)
    density = np.asarray(density, dtype=float)
    a = 1.0 - alpha
    t = np.log(nodes)
    integrand = 2.0 * np.pi * density * np.exp(2.0 * a * t)
    return cumulative_simpson(integrand, x=t, initial=0.0)
