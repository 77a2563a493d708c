"""Figure rendering for the verification suites.

One PNG per suite, written next to the delimited reports. All data is
recomputed deterministically from the configured seed; figures exist for
human review and are not part of the byte-compared report set.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import bol, bubble, meanfield, onsager, quadrature, rearrange
from .bubble import BubbleParams
from .profiles import RadialProfile, radial_grid

_FIG_KW = {"figsize": (8.0, 4.6), "dpi": 110}


def _save(fig, config, name: str) -> None:
    fig.tight_layout()
    fig.savefig(config.out_dir / f"{name}.png")
    plt.close(fig)


def fig_bubble(config) -> None:
    fig, (ax1, ax2) = plt.subplots(1, 2, **_FIG_KW)
    r = radial_grid(1e-4, 50.0, 400)
    for lam, alpha in ((2.0, 0.0), (1.0, 0.5), (3.0, 0.9)):
        p = BubbleParams(lam, alpha)
        ax1.plot(r, bubble.eval_bubble(p, r), label=f"lam={lam:g}, alpha={alpha:g}")
    ax1.set_xscale("log")
    ax1.set_xlabel("r")
    ax1.set_ylabel("profile value")
    ax1.set_title("bubble profiles")
    ax1.legend(fontsize=8)

    lams = np.geomspace(0.1, 20.0, 100)
    for alpha in (0.0, 0.5):
        masses = [bubble.bubble_mass(BubbleParams(l, alpha), 1.0) for l in lams]
        ax2.plot(lams, masses, label=f"alpha={alpha:g}")
        ax2.axhline(bubble.total_mass(alpha), ls=":", lw=0.8, color="gray")
    ax2.set_xscale("log")
    ax2.set_xlabel("lam")
    ax2.set_ylabel("mass over the unit disk")
    ax2.set_title("mass monotone in the scale, below 8*pi*(1-alpha)")
    ax2.legend(fontsize=8)
    _save(fig, config, "bubble")


def fig_quadrature(config) -> None:
    fig, (ax1, ax2) = plt.subplots(1, 2, **_FIG_KW)
    w = rearrange.bubble_measure(BubbleParams(2.0, 0.25))
    radii = radial_grid(1e-3, 3.0, 80)
    table = quadrature.cumulative_mass_table(w, radii, config.quadrature_tol)
    ax1.plot(table.radii, table.masses)
    ax1.set_xlabel("r")
    ax1.set_ylabel("cumulative mass")
    ax1.set_title("weighted cumulative mass (alpha = 0.25)")

    back = quadrature.invert_mass(table, table.masses)
    ax2.semilogy(table.radii, np.abs(back - table.radii) / table.radii + 1e-18)
    ax2.set_xlabel("r")
    ax2.set_ylabel("relative round-trip error")
    ax2.set_title("mass inversion round trip")
    _save(fig, config, "quadrature")


def fig_rearrange(config) -> None:
    fig, (ax1, ax2) = plt.subplots(1, 2, **_FIG_KW)
    target = BubbleParams(2.0, 0.0)
    ns, errs = [32, 64, 128], []
    for n in ns:
        grid = rearrange.CellGrid2D.from_function(
            lambda x, y: 1.0 - np.hypot(x - 0.1003, y - 0.0707), n=n
        )
        pair = rearrange.MeasurePair(None, target)
        star = rearrange.rearrange_two_measures(grid, pair)
        rep = rearrange.equimeasurability_report(grid, star, pair)
        errs.append(rep.deficit)
        if n == 64:
            ax1.plot(star.nodes, star.values, lw=1.0)
            ax1.set_xlabel("target radius")
            ax1.set_ylabel("rearranged value")
            ax1.set_title("2-d cell transport onto the bubble measure (n=64)")
    ax2.loglog(ns, errs, "o-", label="report")
    ax2.loglog(ns, [2.0 / n for n in ns], "--", label="2/n bound")
    ax2.set_xlabel("grid resolution n")
    ax2.set_ylabel("equimeasurability mismatch")
    ax2.set_title("first-order decay")
    ax2.legend(fontsize=8)
    _save(fig, config, "rearrange")


def fig_bol(config, corpus_rows=None) -> None:
    fig, (ax1, ax2) = plt.subplots(1, 2, **_FIG_KW)
    if corpus_rows is None:
        from .suite import SuiteConfig, run_bol_corpus

        small = SuiteConfig(seed=config.seed, out_dir=config.out_dir,
                            corpus_size=60, figures=False)
        corpus_rows = run_bol_corpus(small, np.random.default_rng(config.seed))
    kind_offset = {"equality": 0.0, "shift": 0.01, "subunit": 0.02}
    for side, ax, orient in (("interior", ax1, 1.0), ("exterior", ax2, -1.0)):
        rows = [r for r in corpus_rows if r["side"] == side]
        alphas = [r["alpha"] + kind_offset[r["kind"]] for r in rows]
        vals = [max(orient * r["deficit"], 1e-17) for r in rows]
        colors = ["tab:green" if r["kind"] == "equality" else "tab:blue" for r in rows]
        ax.scatter(alphas, vals, s=8, c=colors)
        ax.set_yscale("log")
        ax.set_xlabel("alpha")
        ax.set_ylabel("oriented deficit")
        ax.set_title(f"{side} deficits (equality family in green)")
    _save(fig, config, "bol")


def fig_thresholds(config) -> None:
    fig, (ax1, ax2) = plt.subplots(1, 2, **_FIG_KW)
    a = np.linspace(-0.65, -0.05, 60)
    for N in (3, 4, 6):
        uniq = [meanfield.thresholds([x] * N, "sphere")["sphere_uniqueness"] for x in a]
        ax1.plot(a, np.array(uniq) / np.pi, label=f"N={N} uniqueness")
    coer = [meanfield.thresholds([x] * 3, "sphere")["coercivity"] for x in a]
    ax1.plot(a, np.array(coer) / np.pi, "k--", label="coercivity")
    ax1.set_xlabel("common order a")
    ax1.set_ylabel("threshold / pi")
    ax1.set_title("sphere thresholds")
    ax1.legend(fontsize=8)

    alphas = np.linspace(0.0, 0.9, 50)
    disk = [meanfield.thresholds([-x / 2.0, -x / 2.0], "disk")["disk_uniqueness"]
            for x in alphas]
    ax2.plot(alphas, np.array(disk) / np.pi)
    ax2.set_xlabel("total negative-order mass alpha")
    ax2.set_ylabel("threshold / pi")
    ax2.set_title("disk uniqueness threshold 8*pi*(1-alpha)")
    _save(fig, config, "thresholds")


def fig_onsager(config) -> None:
    fig, (ax1, ax2) = plt.subplots(1, 2, **_FIG_KW)
    bs = np.linspace(1.001, 2.0, 200)
    papers, exacts = [], []
    for b in bs:
        paper, exact = onsager.gamma_threshold(b * 8.0 * np.pi)
        papers.append(paper)
        exacts.append(exact)
    ax1.plot(bs, papers, label="published bound")
    ax1.plot(bs, exacts, label="exact quadratic root")
    ax1.plot(bs, bs - 1.0, "k:", label="subharmonic bound b-1")
    ax1.set_xlabel("b = beta/8*pi")
    ax1.set_ylabel("gamma")
    ax1.set_title("symmetry thresholds")
    ax1.legend(fontsize=8)

    for b in (1.2, 1.5, 1.8):
        gam = np.linspace(b - 1.0 + 1e-6, 6.0, 300)
        cv = b + (gam + 1.0 - b) ** 2 / (4.0 * gam)
        ax2.plot(gam, cv, label=f"b={b:g}")
    ax2.axhline(2.0, color="gray", lw=0.8)
    ax2.set_xlabel("gamma")
    ax2.set_ylabel("contradiction functional")
    ax2.set_title("symmetry forced at or below 2")
    ax2.legend(fontsize=8)
    _save(fig, config, "onsager")


def fig_shooting(config) -> None:
    fig, (ax1, ax2) = plt.subplots(1, 2, **_FIG_KW)
    res = meanfield.shoot_sphere(4.0 * np.pi, np.log(4.0))
    mask = res.profile.nodes <= 100.0
    r = res.profile.nodes[mask]
    ax1.semilogx(r, res.profile.values[mask], label="shot")
    ax1.semilogx(r, np.log(4.0 / (1.0 + r**2)), "--", label="closed form")
    ax1.set_xlabel("r")
    ax1.set_ylabel("u(r)")
    ax1.set_title("sphere reduction at rho = 4*pi")
    ax1.legend(fontsize=8)

    scan = meanfield.uniqueness_scan(6.0 * np.pi, n_samples=25)
    ax2.plot(scan.u0_values, scan.masses / np.pi, "o-", ms=3)
    ax2.axhline(6.0, color="gray", lw=0.8)
    ax2.set_xlabel("center value")
    ax2.set_ylabel("mass / pi")
    ax2.set_title("monotone mass map (rho = 6*pi)")
    _save(fig, config, "shooting")


def render_all(config, corpus_rows=None) -> None:
    fig_bubble(config)
    fig_quadrature(config)
    fig_rearrange(config)
    fig_bol(config, corpus_rows)
    fig_thresholds(config)
    fig_onsager(config)
    fig_shooting(config)
