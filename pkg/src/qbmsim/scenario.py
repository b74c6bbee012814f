"""Declarative scenario configuration (TOML).

A scenario file has four sections; all quantities are dimensionless ratios
(omega0 = 1 scaling):

    [oscillator]
    omega0 = 1.0            # optional, defaults to 1

    [bath]
    r = 10.0                # resonance ratio omega_c / omega0 (or omega_c =)
    g = 0.01
    kT = 100.0              # k_B T / omega0

    [state]
    kind = "cat"            # "cat" | "vacuum" | "fock"
    alpha = 2.0             # cat amplitude (kind = "cat")
    # n = 1                 # Fock level (kind = "fock")

    [run]
    equation = "repaired"   # exact_reduced | non_secular | repaired |
                            # secular | position_measurement
    regime = "auto"         # auto | offres | res
    t_start = 0.0           # omega0 t
    t_final = 0.1
    num_times = 9
    dim = "auto"            # truncation dimension or "auto"
    tol = 1e-10

    # optional [grid] section for Wigner sampling
    # sigmas = 6.0, samples_per_fringe = 10, min_points = 101,
    # max_points = 401

Every command echoes a normalized copy (``scenario.toml``) into its output
directory; re-running from the echo reproduces the outputs byte for byte.
"""

from __future__ import annotations

import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .coefficients import big_n_closed
from .errors import ConfigError
from .fock import MasterEquationKind, cat_state_density, default_dim, \
    fock_state_density
from .gaussian import Regime
from .params import BathSpec, OscillatorSpec

__all__ = ["Scenario", "load_scenario", "scenario_from_dict", "write_echo"]

_EQUATIONS = {k.value: k for k in MasterEquationKind}
_REGIMES = ("auto", "offres", "res")
_STATE_KINDS = ("cat", "vacuum", "fock")


@dataclass(frozen=True)
class Scenario:
    name: str
    osc: OscillatorSpec
    bath: BathSpec
    state_kind: str
    alpha: float
    fock_n: int
    equation: MasterEquationKind
    regime: str
    t_start: float
    t_final: float
    num_times: int
    dim: int | None          # None means auto
    tol: float
    grid_sigmas: float = 6.0
    samples_per_fringe: int = 10
    grid_min_points: int = 101
    grid_max_points: int = 401

    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_final, self.num_times)

    def resolve_regime(self) -> Regime:
        r = self.bath.resonance_ratio(self.osc)
        if self.regime == "res":
            chosen = Regime.RESONANT
        elif self.regime == "offres":
            chosen = Regime.OFF_RESONANT
        else:
            chosen = Regime.RESONANT if r >= 1.0 else Regime.OFF_RESONANT
        if 0.2 < r < 5.0:
            warnings.warn(
                f"r = {r:.3g} is outside both validity windows (r <= 0.2 "
                f"off-resonant, r >= 5 resonant); analytic forms are "
                "approximate here", stacklevel=2)
        return chosen

    def resolve_dim(self) -> int:
        if self.dim is not None:
            return self.dim
        n_added = float(big_n_closed(self.t_final, self.osc, self.bath))
        alpha = self.alpha if self.state_kind == "cat" else 0.0
        base = default_dim(alpha, n_added)
        if self.state_kind == "fock":
            base = max(base, self.fock_n + 2 + 4 * self.fock_n)
        return base

    def initial_state(self, dim: int):
        if self.state_kind == "cat":
            return cat_state_density(self.alpha, dim)
        if self.state_kind == "vacuum":
            return fock_state_density(0, dim)
        return fock_state_density(self.fock_n, dim)

    def describe(self) -> dict:
        return {
            "name": self.name,
            "omega0": self.osc.omega0,
            "r": self.bath.resonance_ratio(self.osc),
            "g": self.bath.g,
            "kT": self.bath.kT,
            "state": self.state_kind,
            "alpha": self.alpha,
            "fock_n": self.fock_n,
            "equation": self.equation.value,
            "regime": self.regime,
            "t_start": self.t_start,
            "t_final": self.t_final,
            "num_times": self.num_times,
            "dim": self.dim if self.dim is not None else "auto",
            "tol": self.tol,
        }


def _require(table: dict, section: str, key: str, kind, path):
    if key not in table:
        raise ConfigError(f"{path}: missing '{key}' in [{section}]")
    val = table[key]
    if kind is float and isinstance(val, (int, float)) and not isinstance(val, bool):
        return float(val)
    if kind is int and isinstance(val, int) and not isinstance(val, bool):
        return int(val)
    if kind is str and isinstance(val, str):
        return val
    raise ConfigError(
        f"{path}: field '{key}' in [{section}] must be {kind.__name__}, "
        f"got {type(val).__name__}")


def scenario_from_dict(data: dict, name: str = "scenario",
                       path: str = "<config>") -> Scenario:
    for section in ("bath", "state", "run"):
        if section not in data:
            raise ConfigError(f"{path}: missing [{section}] section")

    osc_tab = data.get("oscillator", {})
    omega0 = float(osc_tab.get("omega0", 1.0))
    osc = OscillatorSpec(omega0=omega0)

    bath_tab = data["bath"]
    g = _require(bath_tab, "bath", "g", float, path)
    kT = _require(bath_tab, "bath", "kT", float, path)
    if "omega_c" in bath_tab:
        omega_c = _require(bath_tab, "bath", "omega_c", float, path)
    elif "r" in bath_tab:
        omega_c = _require(bath_tab, "bath", "r", float, path) * omega0
    else:
        raise ConfigError(f"{path}: [bath] needs 'r' or 'omega_c'")
    try:
        bath = BathSpec(omega_c=omega_c, g=g, kT=kT)
    except ValueError as exc:
        raise ConfigError(f"{path}: [bath] {exc}") from exc

    state_tab = data["state"]
    kind = _require(state_tab, "state", "kind", str, path)
    if kind not in _STATE_KINDS:
        raise ConfigError(
            f"{path}: state kind '{kind}' not one of {_STATE_KINDS}")
    alpha = 0.0
    fock_n = 0
    if kind == "cat":
        alpha = _require(state_tab, "state", "alpha", float, path)
        if alpha < 0:
            raise ConfigError(f"{path}: alpha must be >= 0")
    elif kind == "fock":
        fock_n = _require(state_tab, "state", "n", int, path)
        if fock_n < 0:
            raise ConfigError(f"{path}: Fock level n must be >= 0")

    run_tab = data["run"]
    eq_name = _require(run_tab, "run", "equation", str, path)
    if eq_name not in _EQUATIONS:
        raise ConfigError(
            f"{path}: equation '{eq_name}' not one of "
            f"{sorted(_EQUATIONS)}")
    regime = str(run_tab.get("regime", "auto"))
    if regime not in _REGIMES:
        raise ConfigError(f"{path}: regime '{regime}' not one of {_REGIMES}")
    t_start = float(run_tab.get("t_start", 0.0))
    t_final = _require(run_tab, "run", "t_final", float, path)
    num_times = int(run_tab.get("num_times", 9))
    if num_times < 1 or t_final < t_start or t_start < 0:
        raise ConfigError(
            f"{path}: need t_final >= t_start >= 0 and num_times >= 1")
    dim_raw = run_tab.get("dim", "auto")
    if dim_raw == "auto":
        dim = None
    elif isinstance(dim_raw, int) and not isinstance(dim_raw, bool) \
            and dim_raw >= 2:
        dim = dim_raw
    else:
        raise ConfigError(f"{path}: dim must be an integer >= 2 or 'auto'")
    tol = float(run_tab.get("tol", 1e-10))
    if tol <= 0:
        raise ConfigError(f"{path}: tol must be > 0")

    grid_tab = data.get("grid", {})
    return Scenario(
        name=name, osc=osc, bath=bath, state_kind=kind, alpha=alpha,
        fock_n=fock_n, equation=_EQUATIONS[eq_name], regime=regime,
        t_start=t_start, t_final=t_final, num_times=num_times, dim=dim,
        tol=tol,
        grid_sigmas=float(grid_tab.get("sigmas", 6.0)),
        samples_per_fringe=int(grid_tab.get("samples_per_fringe", 10)),
        grid_min_points=int(grid_tab.get("min_points", 101)),
        grid_max_points=int(grid_tab.get("max_points", 401)))


def load_scenario(path) -> Scenario:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: TOML parse error: {exc}") from exc
    return scenario_from_dict(data, name=path.stem, path=str(path))


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    return f'"{v}"'


def write_echo(scenario: Scenario, out_dir) -> Path:
    """Write the normalized scenario back as TOML; loading the echo yields
    an identical scenario."""
    out = Path(out_dir) / "scenario.toml"
    sections = {
        "oscillator": {"omega0": scenario.osc.omega0},
        "bath": {"omega_c": scenario.bath.omega_c, "g": scenario.bath.g,
                 "kT": scenario.bath.kT},
        "state": {"kind": scenario.state_kind},
        "run": {"equation": scenario.equation.value,
                "regime": scenario.regime,
                "t_start": scenario.t_start,
                "t_final": scenario.t_final,
                "num_times": scenario.num_times,
                "dim": scenario.dim if scenario.dim is not None else "auto",
                "tol": scenario.tol},
        "grid": {"sigmas": scenario.grid_sigmas,
                 "samples_per_fringe": scenario.samples_per_fringe,
                 "min_points": scenario.grid_min_points,
                 "max_points": scenario.grid_max_points},
    }
    if scenario.state_kind == "cat":
        sections["state"]["alpha"] = scenario.alpha
    elif scenario.state_kind == "fock":
        sections["state"]["n"] = scenario.fock_n
    lines = []
    for sec, table in sections.items():
        lines.append(f"[{sec}]")
        for key, val in table.items():
            lines.append(f"{key} = {_toml_value(val)}")
        lines.append("")
    out.write_text("\n".join(lines))
    return out
