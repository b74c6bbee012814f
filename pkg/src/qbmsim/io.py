"""CSV/JSON writers for the package's file interfaces.

All numeric CSV output uses 17 significant digits (round-trip exact for
doubles) and carries no timestamps, so identical inputs produce byte
identical files.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from .coefficients import CoefficientTrajectory
from .fock import DensityMatrix, EvolutionResult
from .gaussian import WignerGrid


def _fmt(x) -> str:
    return format(float(x), ".17g")


def write_coefficients_csv(path, traj: CoefficientTrajectory) -> Path:
    """Trajectory export: (omega0_t, delta, gamma, bigN, bigGamma)."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["omega0_t", "delta", "gamma", "bigN", "bigGamma"])
        for i in range(len(traj)):
            wr.writerow([_fmt(traj.t[i]), _fmt(traj.delta[i]),
                         _fmt(traj.gamma[i]), _fmt(traj.big_n[i]),
                         _fmt(traj.big_gamma[i])])
    return path


def snapshot_dict(dm: DensityMatrix, t: float, diagnostics=None) -> dict:
    """Portable JSON form: row-major [re, im] pairs."""
    flat = dm.elements.ravel()
    return {
        "t": float(t),
        "dim": dm.dim,
        "elements": [[float(z.real), float(z.imag)] for z in flat],
        "diagnostics": diagnostics or {},
    }


def density_from_snapshot(data: dict) -> DensityMatrix:
    dim = int(data["dim"])
    flat = np.array([complex(re, im) for re, im in data["elements"]])
    return DensityMatrix(flat.reshape(dim, dim), validate=False)


def write_snapshots_json(path, result: EvolutionResult) -> Path:
    path = Path(path)
    snaps = []
    for i, dm in enumerate(result.states):
        snaps.append(snapshot_dict(dm, result.times[i], {
            "trace_error": float(result.trace_error[i]),
            "hermiticity_error": float(result.hermiticity_error[i]),
            "min_eigenvalue": float(result.min_eigenvalue[i]),
            "mean_n": float(result.mean_n[i]),
            "tail_mass": float(result.tail_mass[i]),
        }))
    payload = {"kind": result.kind.value, "meta": result.meta,
               "snapshots": snaps}
    path.write_text(json.dumps(payload, sort_keys=True))
    return path


def write_diagnostics_csv(path, result: EvolutionResult) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["omega0_t", "trace_error", "hermiticity_error",
                     "min_eigenvalue", "mean_n", "tail_mass"])
        for i in range(len(result.times)):
            wr.writerow([_fmt(result.times[i]), _fmt(result.trace_error[i]),
                         _fmt(result.hermiticity_error[i]),
                         _fmt(result.min_eigenvalue[i]),
                         _fmt(result.mean_n[i]), _fmt(result.tail_mass[i])])
    return path


def write_wigner_csv(path, grid: WignerGrid) -> Path:
    """Grid matrix with two axis header rows (beta_r, then beta_i); data
    rows follow the beta_i index.  A JSON sidecar holds the metadata."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["beta_r"] + [_fmt(v) for v in grid.beta_r])
        wr.writerow(["beta_i"] + [_fmt(v) for v in grid.beta_i])
        for i in range(len(grid.beta_i)):
            wr.writerow([_fmt(grid.beta_i[i])]
                        + [_fmt(v) for v in grid.values[i]])
    sidecar = path.with_suffix(".json")
    meta = dict(grid.meta)
    if grid.warning:
        meta["warning"] = grid.warning
    sidecar.write_text(json.dumps(meta, sort_keys=True))
    return path


def write_pn_csv(path, populations) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["n", "p_n"])
        for n, p in enumerate(populations):
            wr.writerow([n, _fmt(p)])
    return path


def write_visibility_csv(path, times, big_n, big_gamma, f_values) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["omega0_t", "bigN", "bigGamma", "F"])
        for t, n, g, f in zip(times, big_n, big_gamma, f_values):
            wr.writerow([_fmt(t), _fmt(n), _fmt(g), _fmt(f)])
    return path


def scenario_hash(described: dict) -> str:
    blob = json.dumps(described, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def write_report(csv_path, json_path, report, rel_tol: float) -> None:
    """VisibilityReport: CSV rows plus a JSON summary."""
    csv_path, json_path = Path(csv_path), Path(json_path)
    with open(csv_path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["omega0_t", "F_analytic", "F_oracle", "rel_dev"])
        for i in range(len(report.times)):
            wr.writerow([_fmt(report.times[i]), _fmt(report.f_analytic[i]),
                         _fmt(report.f_oracle[i]), _fmt(report.rel_dev[i])])
    summary = {
        "max_rel_dev": float(report.max_rel_dev),
        "rel_tol": rel_tol,
        "passed": report.passed(rel_tol),
        "regime": report.regime.value,
        "scenario": report.scenario,
        "scenario_hash": scenario_hash(report.scenario),
        "visibility_floor": report.visibility_floor,
    }
    json_path.write_text(json.dumps(summary, sort_keys=True, indent=2))
