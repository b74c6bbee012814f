"""Scenario-driven command line front end.

Subcommands: ``coefficients``, ``evolve``, ``visibility``, ``wigner``,
``compare``.  Each reads one TOML scenario, writes plot-ready CSV/JSON
artifacts into the output directory, and echoes the normalized scenario
alongside them.  Exit codes: 0 success, 1 error, 2 tolerance failure in
``compare``.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from . import io
from .analysis import compare_scenario
from .coefficients import CoefficientTrajectory, IntegratedCoefficients, \
    big_gamma_closed, big_n_closed, integrate_coefficients, markovian_limits
from .errors import QbmError
from .fock import evolve, number_distribution
from .gaussian import CatParams, grid_for_cat, visibility_trajectory, \
    wigner_cat_analytic
from .scenario import Scenario, load_scenario, write_echo


def _prepare(args) -> tuple[Scenario, Path]:
    scenario = load_scenario(args.config)
    updates = {}
    if args.dim is not None:
        updates["dim"] = args.dim
    if args.tol is not None:
        updates["tol"] = args.tol
    if args.regime is not None:
        updates["regime"] = args.regime
    if updates:
        scenario = dataclasses.replace(scenario, **updates)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_echo(scenario, out)
    return scenario, out


def cmd_coefficients(args) -> int:
    scenario, out = _prepare(args)
    osc, bath = scenario.osc, scenario.bath
    t_grid = np.linspace(0.0, scenario.t_final, scenario.num_times)
    traj = integrate_coefficients(t_grid, osc, bath)
    path = io.write_coefficients_csv(out / "coefficients.csv", traj)
    lim = markovian_limits(osc, bath)
    tau_conv = 5.0 / bath.omega_c
    print(f"wrote {path}")
    print(f"Markovian limits: gamma1={lim.gamma1:.6g} "
          f"gamma_m1={lim.gamma_m1:.6g} Gamma={lim.big_gamma:.6g}")
    print(f"convergence time ~ 5/omega_c = {tau_conv:.6g} (omega0 t)")
    return 0


def cmd_evolve(args) -> int:
    scenario, out = _prepare(args)
    dim = scenario.resolve_dim()
    rho0 = scenario.initial_state(dim)
    times = np.unique(np.concatenate([[0.0], scenario.times()]))
    result = evolve(scenario.equation, rho0, times, scenario.osc,
                    scenario.bath, tol=scenario.tol)
    io.write_snapshots_json(out / "snapshots.json", result)
    io.write_diagnostics_csv(out / "diagnostics.csv", result)
    print(f"evolved {scenario.equation.value} to omega0 t = "
          f"{scenario.t_final:g} at dim={dim}")
    print(f"max |trace - 1| = {result.trace_error.max():.3e}, "
          f"min eigenvalue = {result.min_eigenvalue.min():.3e}")
    print(f"wrote {out / 'snapshots.json'} and {out / 'diagnostics.csv'}")
    return 0


def cmd_visibility(args) -> int:
    scenario, out = _prepare(args)
    if scenario.state_kind == "fock":
        raise QbmError("visibility needs a cat (or vacuum) initial state")
    regime = scenario.resolve_regime()
    params = CatParams(scenario.alpha)
    times = scenario.times()
    big_n = big_n_closed(times, scenario.osc, scenario.bath)
    big_g = big_gamma_closed(times, scenario.osc, scenario.bath)
    traj = CoefficientTrajectory(times, np.zeros_like(times),
                                 np.zeros_like(times), big_n, big_g)
    f_vals = visibility_trajectory(params, traj, regime)
    path = io.write_visibility_csv(out / "fringe_visibility.csv",
                                   times, big_n, big_g, f_vals)
    print(f"wrote {path} (regime: {regime.value})")
    print(f"F range: {f_vals.min():.6g} .. {f_vals.max():.6g}")
    if args.oracle:
        if scenario.alpha <= 0:
            raise QbmError("--oracle needs a cat state with alpha > 0")
        report = compare_scenario(scenario)
        io.write_report(out / "visibility_report.csv",
                        out / "visibility_summary.json", report, 0.05)
        print(f"wrote {out / 'visibility_report.csv'} "
              f"(max rel dev {report.max_rel_dev:.4%})")
    return 0


def cmd_wigner(args) -> int:
    scenario, out = _prepare(args)
    if scenario.state_kind == "fock":
        raise QbmError("the analytic Wigner pipeline needs a cat or vacuum "
                       "initial state")
    regime = scenario.resolve_regime()
    params = CatParams(scenario.alpha)
    if args.times:
        times = np.array(sorted(float(s) for s in args.times.split(",")))
    else:
        times = scenario.times()
    for t in times:
        coeffs = IntegratedCoefficients(
            float(t), float(big_n_closed(t, scenario.osc, scenario.bath)),
            float(big_gamma_closed(t, scenario.osc, scenario.bath)))
        spec = grid_for_cat(params, coeffs, regime,
                            sigmas=scenario.grid_sigmas,
                            samples_per_fringe=scenario.samples_per_fringe,
                            min_points=scenario.grid_min_points,
                            max_points=scenario.grid_max_points)
        grid = wigner_cat_analytic(params, coeffs, regime, spec)
        name = f"wigner_t{t:.6g}".replace(".", "p").replace("-", "m")
        io.write_wigner_csv(out / f"{name}.csv", grid)
    dim = scenario.resolve_dim()
    rho0 = scenario.initial_state(dim)
    io.write_pn_csv(out / "pn_t0.csv", number_distribution(rho0))
    print(f"wrote {len(times)} Wigner grid(s) and pn_t0.csv to {out}")
    return 0


def cmd_compare(args) -> int:
    scenario, out = _prepare(args)
    if scenario.state_kind != "cat" or scenario.alpha <= 0:
        raise QbmError("compare needs a cat initial state with alpha > 0")
    report = compare_scenario(scenario)
    io.write_report(out / "visibility_report.csv",
                    out / "visibility_summary.json", report, args.rel_tol)
    ok = report.passed(args.rel_tol)
    print(f"max relative deviation: {report.max_rel_dev:.4%} "
          f"(tolerance {args.rel_tol:.2%})")
    print(f"wrote {out / 'visibility_report.csv'}")
    if not ok:
        print("TOLERANCE FAIL", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbmsim",
        description="Non-Markovian quantum Brownian motion scenarios: "
                    "bath coefficients, Fock-basis evolution, cat-state "
                    "Wigner functions and fringe-visibility analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", required=True, help="scenario TOML file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--dim", type=int, default=None,
                       help="override truncation dimension")
        p.add_argument("--tol", type=float, default=None,
                       help="override integrator tolerance")
        p.add_argument("--regime", choices=("auto", "offres", "res"),
                       default=None, help="override regime selection")

    p = sub.add_parser("coefficients",
                       help="bath coefficient trajectory and Markovian limits")
    add_common(p)
    p.set_defaults(func=cmd_coefficients)

    p = sub.add_parser("evolve", help="integrate a master equation variant")
    add_common(p)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("visibility",
                       help="closed-form fringe visibility trajectory")
    add_common(p)
    p.add_argument("--oracle", action="store_true",
                   help="also run the Fock oracle and write side-by-side "
                        "analytic/oracle columns")
    p.set_defaults(func=cmd_visibility)

    p = sub.add_parser("wigner", help="analytic Wigner grids and P_n")
    add_common(p)
    p.add_argument("--times", default=None,
                   help="comma-separated omega0 t values")
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("compare",
                       help="analytic vs Fock-oracle fringe visibility")
    add_common(p)
    p.add_argument("--rel-tol", type=float, default=0.05,
                   help="relative tolerance on F while F > 0.01")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (QbmError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
