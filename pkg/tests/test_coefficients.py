"""Bath-coefficient closed forms, the quadrature oracle, and the
squeezed-reservoir mapping."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from qbmsim import (
    BathSpec,
    CoefficientSample,
    MappingError,
    OscillatorSpec,
    QuadratureError,
    SqueezedBathParams,
    big_gamma_closed,
    big_n_closed,
    coefficient_sample,
    delta_closed,
    delta_quadrature,
    gamma_closed,
    gamma_quadrature,
    integrate_coefficients,
    markovian_limits,
    positivity_margin,
    squeezed_map,
)

OSC = OscillatorSpec()


def bath_r(r, g=0.01, kT=100.0):
    return BathSpec.from_ratio(r, g, kT)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

class TestClosedForms:
    def test_zero_at_t0(self):
        for r in (0.1, 1.0, 10.0):
            b = bath_r(r)
            assert delta_closed(0.0, OSC, b) == pytest.approx(0.0, abs=1e-15)
            assert gamma_closed(0.0, OSC, b) == pytest.approx(0.0, abs=1e-15)

    def test_delta_asymptote_resonant(self):
        # 2 * 0.01 * 100 * (100/101)
        b = BathSpec.from_ratio(10.0, 0.1, 100.0)
        t = 50.0 / b.omega_c
        assert delta_closed(t, OSC, b) == pytest.approx(
            1.9801980198019802, rel=1e-12)

    def test_delta_asymptote_offresonant(self):
        # 2 * 0.01 * 100 * (0.01/1.01)
        b = BathSpec.from_ratio(0.1, 0.1, 100.0)
        t = 50.0 / b.omega_c
        assert delta_closed(t, OSC, b) == pytest.approx(
            0.019801980198019802, rel=1e-10)

    def test_gamma_asymptote_is_half_markov_rate(self):
        b = BathSpec.from_ratio(10.0, 0.1, 100.0)
        t = 50.0 / b.omega_c
        lim = markovian_limits(OSC, b)
        assert gamma_closed(t, OSC, b) == pytest.approx(
            0.009900990099009901, rel=1e-12)
        assert gamma_closed(t, OSC, b) == pytest.approx(
            lim.big_gamma / 2.0, rel=1e-12)

    def test_asymptotic_ratio_gamma_over_delta(self):
        # gamma/Delta -> omega0 / (2 kT) for any r
        for r in (0.1, 1.0, 10.0):
            b = bath_r(r, g=0.05, kT=37.0)
            t = 60.0 / b.omega_c
            ratio = gamma_closed(t, OSC, b) / delta_closed(t, OSC, b)
            assert ratio == pytest.approx(1.0 / (2.0 * b.kT), rel=1e-8)

    def test_rejects_negative_time(self):
        b = bath_r(1.0)
        with pytest.raises(ValueError):
            delta_closed(-0.1, OSC, b)
        with pytest.raises(ValueError):
            gamma_closed(-0.1, OSC, b)

    def test_scaling_linear_in_kT_quadratic_in_g(self):
        b = bath_r(2.0, g=0.02, kT=50.0)
        b_kt3 = bath_r(2.0, g=0.02, kT=150.0)
        b_g = bath_r(2.0, g=0.04, kT=50.0)
        t = np.linspace(0.01, 5.0, 7)
        np.testing.assert_allclose(delta_closed(t, OSC, b_kt3),
                                   3.0 * delta_closed(t, OSC, b),
                                   rtol=1e-14)
        np.testing.assert_allclose(delta_closed(t, OSC, b_g),
                                   4.0 * delta_closed(t, OSC, b),
                                   rtol=1e-14)
        # gamma carries no thermal factor
        np.testing.assert_allclose(gamma_closed(t, OSC, b_kt3),
                                   gamma_closed(t, OSC, b),
                                   rtol=1e-14)

    def test_positivity_for_r_ge_1(self):
        # scanned invariant; holds for r >= 1 (see r << 1 test below)
        for r in (1.0, 10.0):
            b = bath_r(r)
            t = np.linspace(0.0, 20.0 / b.omega_c, 4001)
            assert np.all(delta_closed(t, OSC, b) >= -1e-15)
            assert np.all(gamma_closed(t, OSC, b) >= -1e-15)

    def test_gamma_nonnegative_all_r(self):
        for r in (0.1, 0.5, 1.0, 2.0, 10.0):
            b = bath_r(r)
            t = np.linspace(0.0, 30.0 / b.omega_c, 6001)
            assert np.all(gamma_closed(t, OSC, b) >= -1e-15)

    def test_delta_oscillates_negative_off_resonance(self):
        # genuine non-Markovian feature of the closed form at r << 1: the
        # diffusion coefficient dips below zero during the transient
        b = bath_r(0.1)
        t = np.linspace(0.0, 20.0 / b.omega_c, 4001)
        d = delta_closed(t, OSC, b)
        assert d.min() < 0
        # and the accumulated N(t) is therefore not monotone there
        n = big_n_closed(t, OSC, b)
        assert np.any(np.diff(n) < 0)
        # but N stays non-negative and ends near the Markovian slope
        assert np.all(n >= -1e-12)


# ---------------------------------------------------------------------------
# quadrature oracle
# ---------------------------------------------------------------------------

class TestQuadratureOracle:
    def test_zero_time(self):
        b = bath_r(1.0)
        assert delta_quadrature(0.0, OSC, b) == 0.0
        assert gamma_quadrature(0.0, OSC, b) == 0.0

    def test_agrees_with_closed_form_spot(self):
        b = bath_r(10.0)
        t = 0.05
        assert delta_quadrature(t, OSC, b, tol=1e-6) == pytest.approx(
            delta_closed(t, OSC, b), rel=1e-6)
        b2 = bath_r(0.1)
        assert gamma_quadrature(3.0, OSC, b2, tol=1e-6) == pytest.approx(
            gamma_closed(3.0, OSC, b2), rel=1e-6)

    @pytest.mark.parametrize("r", [0.1, 1.0, 10.0])
    def test_cross_validation_sweep(self, r):
        # relative 1e-6 on 50 log-spaced times in (0, 20/omega_c]
        b = bath_r(r)
        times = np.geomspace(0.02 / b.omega_c, 20.0 / b.omega_c, 50)
        for t in times:
            dq = delta_quadrature(t, OSC, b, tol=1e-7)
            gq = gamma_quadrature(t, OSC, b, tol=1e-7)
            assert dq == pytest.approx(delta_closed(t, OSC, b), rel=1e-6)
            assert gq == pytest.approx(gamma_closed(t, OSC, b), rel=1e-6)

    def test_g_scaling(self):
        b1 = bath_r(1.0, g=0.01)
        b2 = bath_r(1.0, g=0.02)
        t = 0.7
        assert gamma_quadrature(t, OSC, b2) == pytest.approx(
            4.0 * gamma_quadrature(t, OSC, b1), rel=1e-10)

    def test_narrow_spike_spectral_density(self):
        # J replaced by a narrow unit-weight spike at omega0: the double
        # integral collapses to its resonant limit
        #   Delta(t) ~ g^2 (2 kT) C(omega0, t),
        #   C(omega0, t) = [sin(2 omega0 t)/(2 omega0) + t] / 2
        b = bath_r(1.0, g=0.1, kT=10.0)
        sigma = 0.01
        w0 = OSC.omega0

        def spike(w):
            return np.exp(-0.5 * ((w - w0) / sigma) ** 2) \
                / (sigma * np.sqrt(2 * np.pi))

        for t in (0.2, 0.5):
            expected = b.g**2 * 2.0 * b.kT * 0.5 * (
                np.sin(2 * w0 * t) / (2 * w0) + t)
            got = delta_quadrature(t, OSC, b, tol=1e-9,
                                   spectral_density=spike,
                                   points=[w0 - 5 * sigma, w0 + 5 * sigma])
            assert got == pytest.approx(expected, rel=5e-4)

    def test_small_time_proportional_to_t(self):
        # in the spike limit Delta grows linearly with slope g^2 * 2kT
        b = bath_r(1.0, g=0.1, kT=10.0)
        sigma = 0.01
        w0 = OSC.omega0

        def spike(w):
            return np.exp(-0.5 * ((w - w0) / sigma) ** 2) \
                / (sigma * np.sqrt(2 * np.pi))

        t = 0.01
        got = delta_quadrature(t, OSC, b, tol=1e-9, spectral_density=spike,
                               points=[w0 - 5 * sigma, w0 + 5 * sigma])
        assert got == pytest.approx(b.g**2 * 2.0 * b.kT * t, rel=1e-3)

    def test_nonconvergence_raises_with_estimate(self):
        b = bath_r(1.0)
        with pytest.raises(QuadratureError) as exc:
            delta_quadrature(0.5, OSC, b, tol=1e-16)
        assert exc.value.error_estimate is not None
        assert exc.value.error_estimate > 0

    def test_rejects_bad_args(self):
        b = bath_r(1.0)
        with pytest.raises(ValueError):
            delta_quadrature(-1.0, OSC, b)
        with pytest.raises(ValueError):
            gamma_quadrature(1.0, OSC, b, tol=0.0)


# ---------------------------------------------------------------------------
# accumulated coefficients
# ---------------------------------------------------------------------------

class TestIntegratedCoefficients:
    def test_zero_at_origin(self):
        b = bath_r(1.0)
        traj = integrate_coefficients([0.0, 0.5, 1.0], OSC, b)
        assert traj.big_n[0] == 0.0
        assert traj.big_gamma[0] == 0.0

    def test_antiderivative_matches_cumulative_quadrature(self):
        for r in (0.1, 1.0, 10.0):
            b = bath_r(r)
            for t in (0.3 / b.omega_c, 2.0 / b.omega_c, 10.0 / b.omega_c):
                n_quad, _ = quad(lambda s: delta_closed(s, OSC, b), 0.0, t,
                                 limit=400, epsabs=1e-14, epsrel=1e-12)
                g_quad, _ = quad(lambda s: gamma_closed(s, OSC, b), 0.0, t,
                                 limit=400, epsabs=1e-14, epsrel=1e-12)
                assert big_n_closed(t, OSC, b) == pytest.approx(
                    n_quad, rel=1e-8, abs=1e-14)
                assert big_gamma_closed(t, OSC, b) == pytest.approx(
                    2.0 * g_quad, rel=1e-8, abs=1e-14)

    def test_linear_growth_at_markovian_rate(self):
        b = bath_r(10.0)
        lim = markovian_limits(OSC, b)
        delta_m = delta_closed(100.0 / b.omega_c, OSC, b)
        t1, t2 = 50.0 / b.omega_c, 60.0 / b.omega_c
        slope_n = (big_n_closed(t2, OSC, b) - big_n_closed(t1, OSC, b)) / (t2 - t1)
        slope_g = (big_gamma_closed(t2, OSC, b)
                   - big_gamma_closed(t1, OSC, b)) / (t2 - t1)
        assert slope_n == pytest.approx(delta_m, rel=1e-10)
        assert slope_g == pytest.approx(lim.big_gamma, rel=1e-10)

    def test_monotone_for_r_ge_1(self):
        for r in (1.0, 10.0):
            b = bath_r(r)
            t = np.linspace(0.0, 20.0 / b.omega_c, 2001)
            assert np.all(np.diff(big_n_closed(t, OSC, b)) >= -1e-15)
            assert np.all(np.diff(big_gamma_closed(t, OSC, b)) >= -1e-15)

    def test_rejects_bad_grid(self):
        b = bath_r(1.0)
        with pytest.raises(ValueError):
            integrate_coefficients([0.5, 1.0], OSC, b)      # not from 0
        with pytest.raises(ValueError):
            integrate_coefficients([0.0, 1.0, 0.5], OSC, b)  # unsorted

    def test_trajectory_accessors(self):
        b = bath_r(1.0)
        traj = integrate_coefficients(np.linspace(0, 2, 5), OSC, b)
        s = traj.sample(2)
        assert s.t == traj.t[2]
        assert s.delta == traj.delta[2]
        ic = traj.integrated(3)
        assert ic.big_n == traj.big_n[3]


# ---------------------------------------------------------------------------
# Markovian limits
# ---------------------------------------------------------------------------

class TestMarkovianLimits:
    def test_reference_value(self):
        b = BathSpec.from_ratio(10.0, 0.1, 100.0)
        lim = markovian_limits(OSC, b)
        assert lim.big_gamma == pytest.approx(0.019801980198019802, rel=1e-14)

    def test_rate_difference_identity(self):
        for r in (0.1, 1.0, 7.0):
            b = bath_r(r, g=0.03, kT=42.0)
            lim = markovian_limits(OSC, b)
            assert lim.gamma1 - lim.gamma_m1 == pytest.approx(
                lim.big_gamma, rel=1e-14)
            assert lim.gamma1 > lim.gamma_m1 > 0

    def test_occupation_ratio(self):
        b = bath_r(3.0, kT=100.0)
        lim = markovian_limits(OSC, b)
        assert lim.gamma_m1 / lim.big_gamma == pytest.approx(100.0, rel=1e-14)


# ---------------------------------------------------------------------------
# squeezed-bath mapping
# ---------------------------------------------------------------------------

class TestSqueezedMap:
    def test_repaired_is_maximally_squeezed(self):
        # |M| = N exactly; the margin N(N+1) - |M|^2 then equals N > 0,
        # i.e. the repaired equation satisfies the positivity condition
        # with room to spare (not as an equality: that would need
        # |M| = sqrt(N(N+1)))
        b = bath_r(10.0)
        s = coefficient_sample(0.4, OSC, b)
        p = squeezed_map(s, OSC, repaired=True)
        assert abs(p.m_eff) == pytest.approx(p.n_eff, rel=1e-12)
        assert positivity_margin(p) == pytest.approx(p.n_eff, rel=1e-10)
        assert positivity_margin(p) > 0

    def test_unrepaired_margin_is_minus_quarter(self):
        # N(N+1) - |M|^2 = [(D-g)(D+g) - D^2]/(2g)^2 = -1/4 exactly
        b = bath_r(10.0)
        for t in (0.05, 0.3, 1.7):
            s = coefficient_sample(t, OSC, b)
            p = squeezed_map(s, OSC, repaired=False)
            assert positivity_margin(p) == pytest.approx(-0.25, rel=1e-9)

    def test_rate_and_occupation(self):
        s = CoefficientSample(t=1.0, delta=0.03, gamma=0.01)
        p = squeezed_map(s, OSC, repaired=True)
        assert p.rate == pytest.approx(0.02)
        assert p.n_eff == pytest.approx(1.0)

    def test_singular_at_zero_gamma(self):
        s = CoefficientSample(t=0.0, delta=0.0, gamma=0.0)
        with pytest.raises(MappingError, match="singular"):
            squeezed_map(s, OSC)

    def test_degenerate_when_delta_below_gamma(self):
        s = CoefficientSample(t=1.0, delta=0.01, gamma=0.02)
        with pytest.raises(MappingError, match="degenerate"):
            squeezed_map(s, OSC)

    def test_margin_trivial_case(self):
        p = SqueezedBathParams(n_eff=3.0, m_eff=0.0, rate=1.0)
        assert positivity_margin(p) == pytest.approx(12.0)

    @settings(max_examples=200, deadline=None)
    @given(delta=st.floats(1e-6, 10.0), ratio=st.floats(1e-3, 0.999),
           t=st.floats(0.0, 50.0))
    def test_repaired_margin_positive_everywhere(self, delta, ratio, t):
        # property: the repaired mapping is positivity-compatible wherever
        # it is defined, with margin exactly n_eff
        s = CoefficientSample(t=t, delta=delta, gamma=delta * ratio)
        p = squeezed_map(s, OSC, repaired=True)
        assert positivity_margin(p) > 0
        assert positivity_margin(p) == pytest.approx(
            p.n_eff, rel=1e-9, abs=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(delta=st.floats(1e-6, 10.0), ratio=st.floats(1e-3, 0.999),
           t=st.floats(0.0, 50.0))
    def test_unrepaired_margin_negative_everywhere(self, delta, ratio, t):
        s = CoefficientSample(t=t, delta=delta, gamma=delta * ratio)
        p = squeezed_map(s, OSC, repaired=False)
        assert positivity_margin(p) < 0


# ---------------------------------------------------------------------------
# Markovian convergence (documented reference behavior)
# ---------------------------------------------------------------------------

class TestMarkovianConvergence:
    def test_within_one_percent_high_T(self):
        # deep high-T regime: the pair reaches gamma1 within 1% by 5/omega_c
        for r in (1.0, 10.0):
            b = bath_r(r, g=0.01, kT=1000.0)
            lim = markovian_limits(OSC, b)
            t = np.linspace(5.0 / b.omega_c, 20.0 / b.omega_c, 5001)
            pair = delta_closed(t, OSC, b) + gamma_closed(t, OSC, b)
            assert np.max(np.abs(pair - lim.gamma1)) / lim.gamma1 < 0.01

    def test_half_quantum_offset_at_reference_kT(self):
        # at kT = 100 the high-T identification N(omega0) = kT leaves a
        # systematic offset Gamma/2, i.e. 1/(2(kT+1)) ~ 0.495% relative;
        # together with the transient this just overshoots 1% at exactly
        # t = 5/omega_c (documented limitation of the convention)
        b = bath_r(10.0, g=0.01, kT=100.0)
        lim = markovian_limits(OSC, b)
        t_inf = 300.0 / b.omega_c
        pair = delta_closed(t_inf, OSC, b) + gamma_closed(t_inf, OSC, b)
        offset = abs(pair - lim.gamma1) / lim.gamma1
        assert offset == pytest.approx(0.5 / (b.kT + 1.0), rel=1e-6)
