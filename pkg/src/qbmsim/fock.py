"""Brute-force master-equation integration in a truncated Fock basis.

This is the ground-truth oracle against which the closed-form Wigner
solutions are validated.  Four right-hand-side variants are available (plus
a position-measurement limit), all in the interaction picture:

* ``EXACT_REDUCED``  -Delta [X_t,[X_t,rho]] - i gamma [X_t,{P_t,rho}] with
  the rotating quadratures X_t = X cos(w0 t) + P sin(w0 t),
  P_t = P cos(w0 t) - X sin(w0 t) (anomalous-diffusion and frequency-shift
  terms set to zero).
* ``NON_SECULAR``    weak-coupling ladder form with counter-rotating pair
  terms carrying coefficient Delta/2 and phases e^(+-2i w0 t).
* ``REPAIRED``       same with pair coefficient (Delta - gamma)/2, which is
  of Lindblad form (maximally squeezed reservoir) and preserves positivity.
* ``SECULAR``        pair terms dropped entirely.
* ``POSITION_MEASUREMENT``  -Delta [X,[X,rho]] with static X: pure position
  decoherence (all rates set equal, phases resummed).

Sign convention: dissipators are assembled so that the secular variant is
the standard decay form

    drho/dt = (Delta+gamma)/2 [2 a rho a+ - a+a rho - rho a+a]
            + (Delta-gamma)/2 [2 a+ rho a - a a+ rho - rho a a+]

and the equal-rate limit of the non-secular variant reduces exactly to
-Delta [X_t,[X_t,rho]].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import gammaln

from .coefficients import CoefficientSample, delta_closed, gamma_closed
from .errors import EvolutionError, TruncationError
from .params import BathSpec, OscillatorSpec

__all__ = [
    "MasterEquationKind",
    "DensityMatrix",
    "EvolutionResult",
    "FockOperators",
    "annihilation_operator",
    "position_operator",
    "momentum_operator",
    "coherent_state",
    "cat_state_density",
    "fock_state_density",
    "required_cat_dim",
    "default_dim",
    "apply_L",
    "apply_D",
    "rhs",
    "evolve",
    "heating_function",
    "number_distribution",
]

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
TAIL_THRESHOLD = 1e-8
COHERENT_TAIL = 1e-10


class MasterEquationKind(Enum):
    EXACT_REDUCED = "exact_reduced"
    NON_SECULAR = "non_secular"
    REPAIRED = "repaired"
    SECULAR = "secular"
    POSITION_MEASUREMENT = "position_measurement"


def annihilation_operator(dim: int) -> np.ndarray:
    a = np.zeros((dim, dim), dtype=complex)
    ns = np.arange(1, dim)
    a[ns - 1, ns] = np.sqrt(ns)
    return a


def position_operator(dim: int) -> np.ndarray:
    """X = (a + a+)/sqrt(2)."""
    a = annihilation_operator(dim)
    return (a + a.conj().T) / np.sqrt(2.0)


def momentum_operator(dim: int) -> np.ndarray:
    """P = i (a+ - a)/sqrt(2)."""
    a = annihilation_operator(dim)
    return 1j * (a.conj().T - a) / np.sqrt(2.0)


class FockOperators:
    """Cached ladder-operator products for one truncation dimension."""

    def __init__(self, dim: int):
        if dim < 2:
            raise ValueError("dim must be at least 2")
        self.dim = dim
        self.a = annihilation_operator(dim)
        self.ad = self.a.conj().T
        self.num = self.ad @ self.a
        self.a_ad = self.a @ self.ad
        self.a2 = self.a @ self.a
        self.ad2 = self.ad @ self.ad
        self.x = (self.a + self.ad) / np.sqrt(2.0)
        self.p = 1j * (self.ad - self.a) / np.sqrt(2.0)


@dataclass
class DensityMatrix:
    """Truncated Fock-basis density matrix with health checks.

    Validates hermiticity, unit trace and tail occupation on construction;
    ``validate=False`` skips the checks (used for raw solver output that is
    reported through diagnostics instead of being rejected).
    """

    elements: np.ndarray
    tail_threshold: float = TAIL_THRESHOLD
    validate: bool = True

    def __post_init__(self):
        self.elements = np.asarray(self.elements, dtype=complex)
        if self.elements.ndim != 2 or self.elements.shape[0] != self.elements.shape[1]:
            raise ValueError("density matrix must be square")
        if self.validate:
            if self.hermiticity_error() > HERMITICITY_TOL:
                raise ValueError(
                    f"matrix not Hermitian: max deviation {self.hermiticity_error():.2e}")
            if self.trace_error() > TRACE_TOL:
                raise ValueError(
                    f"trace deviates from 1 by {self.trace_error():.2e}")
            if self.tail_mass() > self.tail_threshold:
                raise TruncationError(
                    f"tail occupation {self.tail_mass():.2e} exceeds "
                    f"threshold {self.tail_threshold:.2e}; increase dim")

    @property
    def dim(self) -> int:
        return self.elements.shape[0]

    def hermiticity_error(self) -> float:
        return float(np.abs(self.elements - self.elements.conj().T).max())

    def trace_error(self) -> float:
        return float(abs(np.trace(self.elements) - 1.0))

    def tail_mass(self) -> float:
        return float(self.elements[-1, -1].real)

    def min_eigenvalue(self) -> float:
        h = 0.5 * (self.elements + self.elements.conj().T)
        return float(np.linalg.eigvalsh(h).min())

    def mean_n(self) -> float:
        return float(np.sum(np.arange(self.dim) * np.diag(self.elements).real))

    def populations(self) -> np.ndarray:
        return np.diag(self.elements).real.copy()


@dataclass
class EvolutionResult:
    """Snapshots plus per-snapshot diagnostics of one master-equation run."""

    kind: MasterEquationKind
    times: np.ndarray
    states: list
    trace_error: np.ndarray
    hermiticity_error: np.ndarray
    min_eigenvalue: np.ndarray
    mean_n: np.ndarray
    tail_mass: np.ndarray
    meta: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# State construction
# --------------------------------------------------------------------------

def coherent_state(alpha: complex, dim: int) -> np.ndarray:
    """Coherent-state amplitude vector in the number basis."""
    n = np.arange(dim)
    alpha = complex(alpha)
    absa = abs(alpha)
    if absa == 0.0:
        v = np.zeros(dim, dtype=complex)
        v[0] = 1.0
        return v
    logmag = -0.5 * absa**2 + n * np.log(absa) - 0.5 * gammaln(n + 1)
    if alpha.imag == 0.0:
        # exact sign alternation for real alpha (cancellations in cat
        # states must be exact)
        phases = np.where(n % 2 == 0, 1.0, np.sign(alpha.real))
    else:
        phases = np.exp(1j * np.angle(alpha) * n)
    return np.exp(logmag) * phases.astype(complex)


def required_cat_dim(alpha: float, tail: float = COHERENT_TAIL) -> int:
    """Smallest dim whose coherent-state occupation beyond it is < tail."""
    from scipy.stats import poisson

    if alpha == 0.0:
        return 2
    # P(n >= dim) < tail for Poisson(mean alpha^2)
    return int(poisson.isf(tail, alpha**2)) + 2


def default_dim(alpha: float, n_added: float = 0.0,
                tail: float = COHERENT_TAIL) -> int:
    """Truncation rule: coherent tail below ``tail`` plus headroom
    4 * expected maximum occupation (initial alpha^2 plus heating)."""
    n_max = alpha**2 + max(n_added, 0.0)
    return required_cat_dim(alpha, tail) + int(np.ceil(4.0 * max(n_max, 1.0)))


def cat_state_density(alpha: float, dim: int) -> DensityMatrix:
    """Even coherent ("cat") state (|alpha> + |-alpha>)/sqrt(norm).

    alpha is real; only even Fock levels are populated.  Raises
    TruncationError with a required-dim hint when the coherent tail beyond
    dim is not below 1e-10.
    """
    alpha = float(alpha)
    need = required_cat_dim(alpha)
    if dim < need:
        raise TruncationError(
            f"dim={dim} too small for cat state alpha={alpha}; "
            f"need at least {need}", required_dim=need)
    v = coherent_state(alpha, dim) + coherent_state(-alpha, dim)
    v /= np.sqrt(2.0 * (1.0 + np.exp(-2.0 * alpha**2)))
    return DensityMatrix(np.outer(v, v.conj()))


def fock_state_density(n: int, dim: int) -> DensityMatrix:
    if n >= dim:
        raise TruncationError(f"Fock level {n} needs dim > {n}",
                              required_dim=n + 2)
    rho = np.zeros((dim, dim), dtype=complex)
    rho[n, n] = 1.0
    return DensityMatrix(rho)


# --------------------------------------------------------------------------
# Superoperators and right-hand sides
# --------------------------------------------------------------------------

def apply_L(op: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Decay-form dissipator 2 O rho O+ - O+O rho - rho O+O.

    Traceless for any rho; vanishes on states annihilated by O.
    """
    od = op.conj().T
    odo = od @ op
    return 2.0 * (op @ rho @ od) - odo @ rho - rho @ odo


def apply_D(op: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Pair superoperator O^2 rho + rho O^2 - 2 O rho O (counter-rotating
    term; enters the assembled equations with a negative coefficient)."""
    o2 = op @ op
    return o2 @ rho + rho @ o2 - 2.0 * (op @ rho @ op)


def rhs(kind: MasterEquationKind, t: float, rho: np.ndarray,
        coeffs, osc: OscillatorSpec, ops: FockOperators) -> np.ndarray:
    """drho/dt in the interaction picture for the selected variant.

    ``coeffs`` is the CoefficientSample evaluated at the same t.  The
    result is traceless and Hermiticity-preserving.
    """
    if abs(coeffs.t - t) > 1e-12 * max(1.0, abs(t)):
        raise ValueError(
            f"coefficient sample at t={coeffs.t} does not match rhs t={t}")
    delta, gamma = coeffs.delta, coeffs.gamma
    a, ad = ops.a, ops.ad
    if kind is MasterEquationKind.POSITION_MEASUREMENT:
        x = ops.x
        comm = x @ rho - rho @ x
        return -delta * (x @ comm - comm @ x)

    dis_down = apply_L(a, rho)
    dis_up = apply_L(ad, rho)
    out = 0.5 * (delta + gamma) * dis_down + 0.5 * (delta - gamma) * dis_up
    if kind is MasterEquationKind.SECULAR:
        return out

    phase = np.exp(2j * osc.omega0 * t)
    pair_up = apply_D(ad, rho)
    pair_down = apply_D(a, rho)
    if kind is MasterEquationKind.REPAIRED:
        c = 0.5 * (delta - gamma)
        return out - c * (phase * pair_up + np.conj(phase) * pair_down)
    if kind is MasterEquationKind.NON_SECULAR:
        c = 0.5 * delta
        return out - c * (phase * pair_up + np.conj(phase) * pair_down)
    if kind is MasterEquationKind.EXACT_REDUCED:
        # non-secular pair terms plus the residual gamma-commutator from
        # -i gamma [X_t, {P_t, rho}] in the rotating frame
        c = 0.5 * delta
        out = out - c * (phase * pair_up + np.conj(phase) * pair_down)
        a2, ad2 = ops.a2, ops.ad2
        out = out + 0.5 * gamma * (phase * (ad2 @ rho - rho @ ad2)
                                   - np.conj(phase) * (a2 @ rho - rho @ a2))
        return out
    raise ValueError(f"unknown master-equation kind: {kind}")


# --------------------------------------------------------------------------
# Time evolution
# --------------------------------------------------------------------------

def evolve(kind: MasterEquationKind, rho0: DensityMatrix, times,
           osc: OscillatorSpec, bath: BathSpec, tol: float = 1e-10,
           tail_threshold: float = TAIL_THRESHOLD) -> EvolutionResult:
    """Integrate the selected master equation, snapshotting at ``times``.

    ``rho0`` is the state at ``times[0]``.  Uses an adaptive explicit
    embedded Runge-Kutta pair (Dormand-Prince) with per-step error control
    at ``tol`` and dense output at the snapshot times.  Trace drift is
    reported in the diagnostics, never silently renormalized.  Aborts with
    TruncationError if any snapshot's tail occupation exceeds
    ``tail_threshold``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    times = np.asarray(times, dtype=float)
    if times.size == 0 or np.any(np.diff(times) <= 0) or times[0] < 0:
        raise ValueError("times must be non-empty, ascending, non-negative")
    dim = rho0.dim
    ops = FockOperators(dim)

    def f(t, y):
        rho = y.reshape(dim, dim)
        sample = CoefficientSample(t, delta_closed(t, osc, bath),
                                   gamma_closed(t, osc, bath))
        return rhs(kind, t, rho, sample, osc, ops).ravel()

    t0, t1 = float(times[0]), float(times[-1])
    if t1 == t0:
        sol_states = [rho0.elements.copy()]
    else:
        sol = solve_ivp(f, (t0, t1), rho0.elements.ravel(), t_eval=times,
                        method="RK45", rtol=tol, atol=tol)
        if not sol.success:
            raise EvolutionError(f"integration failed: {sol.message}")
        sol_states = [sol.y[:, i].reshape(dim, dim)
                      for i in range(sol.y.shape[1])]

    states, tr_err, he_err, min_ev, mean_n, tail = [], [], [], [], [], []
    for i, raw in enumerate(sol_states):
        dm = DensityMatrix(raw, tail_threshold=tail_threshold, validate=False)
        states.append(dm)
        tr_err.append(dm.trace_error())
        he_err.append(dm.hermiticity_error())
        min_ev.append(dm.min_eigenvalue())
        mean_n.append(dm.mean_n())
        tail.append(dm.tail_mass())
        if tail[-1] > tail_threshold:
            raise TruncationError(
                f"tail occupation {tail[-1]:.2e} exceeded threshold "
                f"{tail_threshold:.2e} at t={times[i]:.6g}; increase dim",
                required_dim=2 * dim,
                diagnostics={"t": float(times[i]), "tail_mass": tail[-1],
                             "mean_n": mean_n[-1]})
    return EvolutionResult(
        kind=kind, times=times, states=states,
        trace_error=np.array(tr_err), hermiticity_error=np.array(he_err),
        min_eigenvalue=np.array(min_ev), mean_n=np.array(mean_n),
        tail_mass=np.array(tail),
        meta={"dim": dim, "tol": tol, "omega0": osc.omega0,
              "omega_c": bath.omega_c, "g": bath.g, "kT": bath.kT})


def heating_function(result: EvolutionResult) -> np.ndarray:
    """Mean excitation <n>(t) = Tr(a+ a rho) per snapshot.

    The imaginary part must vanish to 1e-10 (diagnostic of a healthy run).
    """
    vals = []
    for dm in result.states:
        n = np.sum(np.arange(dm.dim) * np.diag(dm.elements))
        if abs(n.imag) > 1e-10:
            raise EvolutionError(
                f"<n> has imaginary part {n.imag:.2e}; state unhealthy")
        vals.append(n.real)
    return np.asarray(vals)


def number_distribution(dm: DensityMatrix) -> np.ndarray:
    """Fock populations P_n."""
    return dm.populations()
