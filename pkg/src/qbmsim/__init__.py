"""Non-Markovian weak-coupling quantum Brownian motion toolkit.

Time-dependent bath coefficients for an Ohmic Lorentz-Drude reservoir at
high temperature, brute-force Fock-basis integration of the associated
master-equation variants, closed-form Gaussian Wigner dynamics of
Schroedinger-cat states, and fringe-visibility (decoherence) analysis with
cross-validation between the two routes.
"""

from .analysis import VisibilityReport, compare_scenario, \
    fringe_visibility_from_grid, wigner_from_density
from .coefficients import CoefficientSample, CoefficientTrajectory, \
    IntegratedCoefficients, MarkovianLimits, SqueezedBathParams, \
    big_gamma_closed, big_n_closed, coefficient_sample, delta_closed, \
    delta_quadrature, gamma_closed, gamma_quadrature, \
    integrate_coefficients, markovian_limits, positivity_margin, squeezed_map
from .errors import ConfigError, EvolutionError, GridError, MappingError, \
    PeakError, QbmError, QuadratureError, TruncationError
from .fock import DensityMatrix, EvolutionResult, FockOperators, \
    MasterEquationKind, apply_D, apply_L, cat_state_density, default_dim, \
    evolve, fock_state_density, heating_function, number_distribution, \
    required_cat_dim, rhs
from .gaussian import CatParams, GaussianCatWigner, GridSpec, Regime, \
    WignerGrid, a_int, fringe_visibility_closed, grid_for_cat, \
    visibility_ratio_check, visibility_trajectory, wigner_cat_analytic
from .params import BathSpec, OscillatorSpec, spectral_density_ohmic
from .scenario import Scenario, load_scenario, scenario_from_dict

__version__ = "0.1.0"
