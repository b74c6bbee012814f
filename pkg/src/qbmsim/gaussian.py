"""Closed-form Wigner dynamics of an even coherent (cat) state.

The evolved Wigner function is a three-term Gaussian mixture: two wave
packets centered at +-exp(-Gamma(t)/2) alpha on the beta_r axis plus an
interference term at the origin carrying fringes along beta_i.  Two regimes
have closed forms, differing in how the counter-rotating terms enter:

* off-resonant (r << 1, secular dynamics): both quadrature variances of
  each packet grow together as (N(t) + 1/2)/2 and the fringe attenuation is
  exp[-2 alpha^2 (1 - e^(-Gamma)/(2N+1))];
* resonant (r >> 1, squeezed-reservoir form with e^(2i w0 t) ~ 1): the
  beta_r variance stays frozen at 1/4 while the beta_i variance grows as
  (2N(t) + 1/2)/2, and the attenuation exponent carries 4N+1 instead of
  2N+1 - decoherence as if the temperature were doubled.

Exponents are kept verbatim in the printed denominators (N+1/2, 1/2,
2N+1/2) rather than converted to sigma^2 notation, so term-by-term
comparison with the formulas is direct.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .coefficients import CoefficientTrajectory, IntegratedCoefficients
from .errors import GridError

__all__ = [
    "Regime",
    "CatParams",
    "GaussianCatWigner",
    "GridSpec",
    "WignerGrid",
    "wigner_cat_analytic",
    "fringe_visibility_closed",
    "visibility_trajectory",
    "a_int",
    "visibility_ratio_check",
    "grid_for_cat",
]


class Regime(Enum):
    OFF_RESONANT = "off_resonant"
    RESONANT = "resonant"


@dataclass(frozen=True)
class CatParams:
    """Even coherent state (|alpha> + |-alpha>), alpha real >= 0."""

    alpha: float

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")

    @property
    def norm(self) -> float:
        """Normalization constant: norm^-1 = 2 (1 + exp(-2 alpha^2))."""
        return 1.0 / (2.0 * (1.0 + np.exp(-2.0 * self.alpha**2)))


@dataclass(frozen=True)
class GaussianCatWigner:
    """Three-term Gaussian-mixture parameterization of the evolved cat.

    Provides per-term evaluation on arrays and the derived geometry
    (centers, variances, fringe wavevector) used by the analysis layer.
    """

    regime: Regime
    t: float
    big_n: float
    big_gamma: float
    alpha: float

    def __post_init__(self):
        if self.big_n < 0 or self.big_gamma < 0:
            raise ValueError("N(t) and Gamma(t) must be >= 0")

    @property
    def norm(self) -> float:
        return CatParams(self.alpha).norm

    @property
    def center(self) -> float:
        """Packet centers sit at +-center on the beta_r axis."""
        return np.exp(-self.big_gamma / 2.0) * self.alpha

    @property
    def exponent_r(self) -> float:
        """Denominator of the beta_r exponent of the packet terms."""
        if self.regime is Regime.OFF_RESONANT:
            return self.big_n + 0.5
        return 0.5

    @property
    def exponent_i(self) -> float:
        """Denominator of the beta_i exponent of the packet terms."""
        if self.regime is Regime.OFF_RESONANT:
            return self.big_n + 0.5
        return 2.0 * self.big_n + 0.5

    @property
    def variance_r(self) -> float:
        return self.exponent_r / 2.0

    @property
    def variance_i(self) -> float:
        return self.exponent_i / 2.0

    @property
    def prefactor(self) -> float:
        """Common prefactor of the packet terms (their peak height)."""
        if self.regime is Regime.OFF_RESONANT:
            return self.norm / (np.pi * (self.big_n + 0.5))
        return self.norm / (np.pi * np.sqrt(self.big_n + 0.25))

    @property
    def fringe_wavevector(self) -> float:
        """Wavevector of cos(k beta_i) in the interference term."""
        return 2.0 * np.exp(-self.big_gamma / 2.0) * self.alpha / self.exponent_i

    @property
    def attenuation(self) -> float:
        """Interference damping exp(-A_int); equals the fringe visibility."""
        denom = (2.0 * self.big_n + 1.0 if self.regime is Regime.OFF_RESONANT
                 else 4.0 * self.big_n + 1.0)
        return np.exp(-2.0 * self.alpha**2
                      * (1.0 - np.exp(-self.big_gamma) / denom))

    def packet(self, beta_r, beta_i, sign: int):
        """Wave-packet term centered at sign * center."""
        br = np.asarray(beta_r, dtype=float)
        bi = np.asarray(beta_i, dtype=float)
        return self.prefactor * np.exp(
            -bi**2 / self.exponent_i
            - (br - sign * self.center)**2 / self.exponent_r)

    def interference(self, beta_r, beta_i):
        """Oscillatory interference term (peaked at the origin)."""
        br = np.asarray(beta_r, dtype=float)
        bi = np.asarray(beta_i, dtype=float)
        env = np.exp(-bi**2 / self.exponent_i - br**2 / self.exponent_r)
        return (2.0 * self.prefactor * env * self.attenuation
                * np.cos(self.fringe_wavevector * bi))

    def total(self, beta_r, beta_i):
        return (self.packet(beta_r, beta_i, +1)
                + self.packet(beta_r, beta_i, -1)
                + self.interference(beta_r, beta_i))


@dataclass(frozen=True)
class GridSpec:
    """Uniform rectangular grid, symmetric about the origin."""

    half_r: float
    half_i: float
    n_r: int
    n_i: int

    def __post_init__(self):
        if self.half_r <= 0 or self.half_i <= 0:
            raise ValueError("grid half-widths must be positive")
        if self.n_r < 3 or self.n_i < 3:
            raise ValueError("grid needs at least 3 points per axis")

    @property
    def beta_r(self) -> np.ndarray:
        return np.linspace(-self.half_r, self.half_r, self.n_r)

    @property
    def beta_i(self) -> np.ndarray:
        return np.linspace(-self.half_i, self.half_i, self.n_i)

    def refine(self, factor: int = 2) -> "GridSpec":
        """Same extent with the spacing divided by ``factor``."""
        return GridSpec(self.half_r, self.half_i,
                        (self.n_r - 1) * factor + 1,
                        (self.n_i - 1) * factor + 1)


class WignerGrid:
    """Sampled W(beta) on a rectangular grid; rows follow the beta_i axis."""

    def __init__(self, beta_r, beta_i, values, meta=None, warning=None):
        self.beta_r = np.asarray(beta_r, dtype=float)
        self.beta_i = np.asarray(beta_i, dtype=float)
        self.values = np.asarray(values, dtype=float)
        if self.values.shape != (len(self.beta_i), len(self.beta_r)):
            raise ValueError("values must have shape (len(beta_i), len(beta_r))")
        self.meta = dict(meta or {})
        self.warning = warning

    @property
    def cell_area(self) -> float:
        return float((self.beta_r[1] - self.beta_r[0])
                     * (self.beta_i[1] - self.beta_i[0]))

    def integral(self) -> float:
        """Plane integral by the midpoint rule (grid sum times cell area)."""
        return float(self.values.sum() * self.cell_area)

    def value_at_origin(self) -> float:
        i = int(np.argmin(np.abs(self.beta_i)))
        j = int(np.argmin(np.abs(self.beta_r)))
        return float(self.values[i, j])

    def min_value(self) -> float:
        return float(self.values.min())


def _coverage_sigmas(model: GaussianCatWigner, spec: GridSpec) -> float:
    """How many packet standard deviations the grid covers, worst axis."""
    sr = np.sqrt(model.variance_r)
    si = np.sqrt(model.variance_i)
    cover_r = (spec.half_r - model.center) / sr
    cover_i = spec.half_i / si
    return float(min(cover_r, cover_i))


def wigner_cat_analytic(params: CatParams, coeffs: IntegratedCoefficients,
                        regime: Regime, grid_spec: GridSpec) -> WignerGrid:
    """Closed-form cat Wigner function sampled on a grid.

    Raises GridError when the grid does not extend 5 standard deviations
    beyond every term (packet centers included).
    """
    model = GaussianCatWigner(regime=regime, t=coeffs.t, big_n=coeffs.big_n,
                              big_gamma=coeffs.big_gamma, alpha=params.alpha)
    cover = _coverage_sigmas(model, grid_spec)
    if cover < 5.0:
        raise GridError(
            f"grid covers only {cover:.2f} sigma of the Gaussian terms; "
            "5 sigma required")
    br, bi = np.meshgrid(grid_spec.beta_r, grid_spec.beta_i)
    values = model.total(br, bi)
    meta = {"source": "analytic", "regime": regime.value, "t": coeffs.t,
            "alpha": params.alpha, "big_n": coeffs.big_n,
            "big_gamma": coeffs.big_gamma,
            "fringe_wavevector": model.fringe_wavevector,
            "center": model.center}
    return WignerGrid(grid_spec.beta_r, grid_spec.beta_i, values, meta)


def fringe_visibility_closed(params: CatParams,
                             coeffs: IntegratedCoefficients,
                             regime: Regime) -> float:
    """Closed-form fringe visibility F(alpha, t).

    F = exp[-2 alpha^2 (1 - e^(-Gamma(t)) / (2N(t)+1))]   off-resonant
    F = exp[-2 alpha^2 (1 - e^(-Gamma(t)) / (4N(t)+1))]   resonant
    """
    model = GaussianCatWigner(regime=regime, t=coeffs.t, big_n=coeffs.big_n,
                              big_gamma=coeffs.big_gamma, alpha=params.alpha)
    return float(model.attenuation)


def visibility_trajectory(params: CatParams, traj: CoefficientTrajectory,
                          regime: Regime) -> np.ndarray:
    """Closed-form F(alpha, t) along a coefficient trajectory."""
    denom = (2.0 * traj.big_n + 1.0 if regime is Regime.OFF_RESONANT
             else 4.0 * traj.big_n + 1.0)
    return np.exp(-2.0 * params.alpha**2
                  * (1.0 - np.exp(-traj.big_gamma) / denom))


def a_int(params: CatParams, coeffs: IntegratedCoefficients) -> float:
    """Decoherence exponent A_int = 2 alpha^2 * 4N(t) / (4N(t) + 1).

    Valid far from thermalization (e^(-Gamma) ~ 1); warns when
    Gamma(t) >= 0.1.  Saturates at 2 alpha^2 as N -> infinity and matches
    the resonant visibility exponent when Gamma -> 0.
    """
    if coeffs.big_gamma >= 0.1:
        warnings.warn(
            f"a_int assumes e^-Gamma ~ 1 but Gamma(t) = {coeffs.big_gamma:.3g}; "
            "result is outside its validity window", stacklevel=2)
    four_n = 4.0 * coeffs.big_n
    return 2.0 * params.alpha**2 * four_n / (four_n + 1.0)


def visibility_ratio_check(params: CatParams,
                           traj: CoefficientTrajectory) -> dict:
    """Check F_res(N) = F_off(2N) along a trajectory.

    The resonant fringe visibility at occupation N(t) equals the
    off-resonant one at 2N(t) (effective temperature doubled by the
    counter-rotating terms).  Returns the per-time values and the maximum
    absolute deviation, which is zero up to roundoff.
    """
    f_res = visibility_trajectory(params, traj, Regime.RESONANT)
    doubled = CoefficientTrajectory(traj.t, traj.delta, traj.gamma,
                                    2.0 * traj.big_n, traj.big_gamma)
    f_off_2n = visibility_trajectory(params, doubled, Regime.OFF_RESONANT)
    dev = np.abs(f_res - f_off_2n)
    return {"t": traj.t, "f_resonant": f_res, "f_off_doubled": f_off_2n,
            "max_deviation": float(dev.max())}


def grid_for_cat(params: CatParams, coeffs: IntegratedCoefficients,
                 regime: Regime, sigmas: float = 6.0,
                 samples_per_fringe: int = 10, min_points: int = 101,
                 max_points: int = 401) -> GridSpec:
    """Grid that covers every term by ``sigmas`` and resolves the fringes.

    Point counts are kept odd so the origin is a grid node.
    """
    model = GaussianCatWigner(regime=regime, t=coeffs.t, big_n=coeffs.big_n,
                              big_gamma=coeffs.big_gamma, alpha=params.alpha)
    sr, si = np.sqrt(model.variance_r), np.sqrt(model.variance_i)
    half_r = model.center + sigmas * sr
    half_i = sigmas * si
    n_r = min_points
    if model.fringe_wavevector > 0:
        period = 2.0 * np.pi / model.fringe_wavevector
        needed = int(np.ceil(2.0 * half_i / (period / samples_per_fringe))) + 1
        n_i = min(max(min_points, needed), max_points)
    else:
        n_i = min_points
    return GridSpec(half_r, half_i, n_r | 1, n_i | 1)
