"""Command-line surface: single computations, profile I/O, verification suites.

Numbers serialize with 17 significant digits for machine comparison;
``--pretty`` appends a block rendering values as multiples of pi. Exit
codes: 0 success, 1 numerical failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import bol, meanfield, onsager, quadrature, rearrange
from .bubble import (
    BubbleParams,
    boundary_root_integral,
    bubble_mass,
    eval_bubble,
    pair_lambda,
    total_mass,
)
from .errors import SingbolError
from .profiles import RadialProfile
from .reporting import to_json_text
from .suite import SuiteConfig, run_suite


def _emit(record: dict, pretty: bool) -> None:
    print(to_json_text(record))
    if pretty:
        print("# pi multiples")
        for key, value in record.items():
            if isinstance(value, float) and np.isfinite(value) and value != 0.0:
                print(f"#   {key} = {value / np.pi:.10g} * pi")


def _load_phi(path: str):
    with open(path, newline="") as handle:
        header = handle.readline().strip().lower()
    if header.startswith("i,"):
        return rearrange.CellGrid2D.from_csv(path)
    return RadialProfile.from_csv(path)


def cmd_bubble(args) -> int:
    p = BubbleParams(args.lam, args.alpha)
    R = args.radius
    closed = bubble_mass(p, R)
    quad = quadrature.annulus_integral(rearrange.bubble_measure(p), 0.0, R, 1e-10)
    boundary = boundary_root_integral(p, R)
    deficit = boundary**2 - 0.5 * closed * (total_mass(p.alpha) - closed)
    _emit(
        {
            "lambda": p.lam,
            "alpha": p.alpha,
            "radius": R,
            "value_at_radius": float(eval_bubble(p, R)),
            "mass_closed_form": closed,
            "mass_quadrature": quad,
            "boundary_root_integral": boundary,
            "bol_deficit": float(deficit),
        },
        args.pretty,
    )
    return 0


def cmd_pair(args) -> int:
    lam2 = pair_lambda(args.lambda1, args.alpha, args.radius)
    p1 = BubbleParams(args.lambda1, args.alpha)
    p2 = BubbleParams(lam2, args.alpha)
    mass_sum = bubble_mass(p1, args.radius) + bubble_mass(p2, args.radius)
    target = total_mass(args.alpha)
    _emit(
        {
            "lambda1": args.lambda1,
            "lambda2": lam2,
            "alpha": args.alpha,
            "radius": args.radius,
            "boundary_match_error": float(
                abs(eval_bubble(p1, args.radius) - eval_bubble(p2, args.radius))
            ),
            "mass_sum": float(mass_sum),
            "mass_sum_target": float(target),
            "mass_sum_error": float(abs(mass_sum - target)),
        },
        args.pretty,
    )
    return 0


def cmd_bol(args) -> int:
    profile = RadialProfile.from_csv(args.profile)
    if args.exterior:
        report = bol.bol_deficit_exterior(profile, args.alpha)
    else:
        adm = bol.check_differential_inequality(profile, args.alpha, args.radius)
        report = bol.bol_deficit_interior(adm, args.radius)
    print(report.to_json())
    return 0 if report.passed else 1


def cmd_rearrange(args) -> int:
    phi = _load_phi(args.phi)
    target = BubbleParams(args.target_lambda, args.alpha)
    if isinstance(phi, rearrange.CellGrid2D):
        source = None
    elif args.source == "bubble":
        src_lam = args.source_lambda if args.source_lambda else args.target_lambda
        source = rearrange.bubble_measure(BubbleParams(src_lam, args.alpha))
    elif args.source == "lebesgue":
        source = rearrange.lebesgue_measure()
    else:
        density = RadialProfile.from_csv(args.source)
        source = quadrature.WeightedRadialDensity(args.alpha, density)
    pair = rearrange.MeasurePair(source, target)
    star = rearrange.rearrange_two_measures(phi, pair)
    star.to_csv(args.out)
    report = rearrange.equimeasurability_report(phi, star, pair)
    print(report.to_json())
    return 0 if report.passed else 1


def cmd_thresholds(args) -> int:
    orders = [float(x) for x in args.alphas.split(",") if x.strip() != ""]
    record = meanfield.thresholds(orders, args.domain)
    _emit(record, args.pretty)
    return 0


def cmd_shoot(args) -> int:
    if args.domain == "disk":
        if args.alpha is None:
            raise SingbolError("disk shooting needs --alpha")
        if args.lam is not None:
            res = meanfield.shoot_disk(args.alpha, "lambda", args.lam)
        else:
            res = meanfield.shoot_disk(args.alpha, "rho", args.rho)
        full = total_mass(args.alpha)
        t = res.rho / (full - res.rho)
        record = {
            "domain": "disk",
            "alpha": args.alpha,
            "lambda": res.lam,
            "rho": res.rho,
            "lambda_from_mass_inversion": float(np.sqrt(8.0 * t)),
            "mass_tolerance": res.mass_tolerance,
        }
    else:
        u0 = args.u0 if args.u0 is not None else np.log(4.0)
        res = meanfield.shoot_sphere(args.rho, u0)
        record = {
            "domain": "sphere",
            "rho": args.rho,
            "u0": float(u0),
            "mass": res.rho,
            "mass_tolerance": res.mass_tolerance,
        }
        if args.scan:
            scan = meanfield.uniqueness_scan(args.rho)
            record["scan_strictly_monotone"] = scan.strictly_monotone
            record["scan_center_value"] = scan.u_star
    if args.out:
        res.profile.to_csv(args.out)
    _emit(record, args.pretty)
    return 0


def cmd_onsager(args) -> int:
    p = onsager.OnsagerParams(args.beta_over_8pi * 8.0 * np.pi, args.gamma)
    _emit(onsager.onsager_record(p), args.pretty)
    return 0


def cmd_verify_all(args) -> int:
    config = SuiteConfig(
        seed=args.seed,
        out_dir=Path(args.out),
        fmt=args.format,
        corpus_size=args.corpus_size,
        quadrature_tol=args.quadrature_tol,
        figures=not args.no_figures,
    )
    return run_suite(config)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="singbol",
        description=(
            "Weighted isoperimetric deficits, two-measure rearrangements, and "
            "mean field uniqueness thresholds at desk scale."
        ),
    )
    parser.add_argument("--pretty", action="store_true",
                        help="append values rendered as multiples of pi")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bubble", help="closed-form bubble quantities plus quadrature")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--radius", type=float, default=1.0)
    p.set_defaults(fn=cmd_bubble)

    p = sub.add_parser("pair", help="companion scale and the paired mass identity")
    p.add_argument("--lambda1", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--radius", type=float, default=1.0)
    p.set_defaults(fn=cmd_pair)

    p = sub.add_parser("bol", help="deficit report for a sampled radial profile")
    p.add_argument("--profile", required=True, help="RadialProfile CSV (r,value)")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--exterior", action="store_true")
    p.set_defaults(fn=cmd_bol)

    p = sub.add_parser("rearrange", help="two-measure rearrangement of a profile")
    p.add_argument("--phi", required=True,
                   help="RadialProfile CSV (r,value) or CellGrid2D CSV (i,j,phi,mass)")
    p.add_argument("--source", default="lebesgue",
                   help="'bubble', 'lebesgue', or a density CSV path")
    p.add_argument("--target-lambda", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--source-lambda", type=float, default=None)
    p.add_argument("--out", default="phi_star.csv")
    p.set_defaults(fn=cmd_rearrange)

    p = sub.add_parser("thresholds", help="uniqueness/coercivity threshold record")
    p.add_argument("--alphas", default="", help="comma-separated conical orders")
    p.add_argument("--domain", choices=("sphere", "disk"), required=True)
    p.set_defaults(fn=cmd_thresholds)

    p = sub.add_parser("shoot", help="radial shooting for the disk or sphere problem")
    p.add_argument("--domain", choices=("disk", "sphere"), required=True)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--u0", type=float, default=None)
    p.add_argument("--scan", action="store_true")
    p.add_argument("--out", default=None, help="write the shot profile CSV here")
    p.set_defaults(fn=cmd_shoot)

    p = sub.add_parser("onsager", help="vortex symmetry threshold record")
    p.add_argument("--beta-over-8pi", dest="beta_over_8pi", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.set_defaults(fn=cmd_onsager)

    p = sub.add_parser("verify-all", help="run every module's invariant suite")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out", default="reports")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--corpus-size", type=int, default=500)
    p.add_argument("--quadrature-tol", type=float, default=1e-10)
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(fn=cmd_verify_all)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "shoot" and args.domain == "disk":
        if args.rho is None and args.lam is None:
            parser.error("disk shooting needs --rho or --lambda")
    if args.command == "shoot" and args.domain == "sphere" and args.rho is None:
        parser.error("sphere shooting needs --rho")
    try:
        return args.fn(args)
    except SingbolError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
