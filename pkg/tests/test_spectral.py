import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavityqfi import (
    ClosedFormUnavailableError,
    QuadratureConfig,
    QuadratureConvergenceError,
    SpectralModel,
    TimeGrid,
    beta_closed,
    beta_numeric,
    eval_density,
    gamma_closed,
    gamma_long_time,
    gamma_numeric,
)

OHMIC = SpectralModel.ohmic_lorentz_drude


def lorentz(width, detuning=0.5, omega0=1.0, rate=1.0):
    return SpectralModel.lorentzian(rate, width, detuning=detuning, omega0=omega0)


def resonant_lorentz(width, rate=1.0):
    # peak at omega0 - detuning = 0.5; querying omega_j = 0.5 is on resonance
    return lorentz(width, rate=rate)


class TestDensity:
    def test_ohmic_at_cutoff(self):
        assert eval_density(OHMIC(1.0), 1.0) == pytest.approx(1.0 / math.pi, rel=1e-14)

    def test_ohmic_at_zero(self):
        assert eval_density(OHMIC(1.0), 0.0) == 0.0

    def test_lorentzian_peak(self):
        m = lorentz(0.5)
        peak = m.omega0 - m.detuning
        assert eval_density(m, peak) == pytest.approx(1.0 / (2 * math.pi), rel=1e-14)

    def test_tabulated_interpolates_and_clips(self):
        m = SpectralModel.tabulated([0.0, 1.0, 2.0], [0.0, 2.0, 0.0])
        assert eval_density(m, 0.5) == pytest.approx(1.0)
        assert eval_density(m, -3.0) == 0.0
        assert eval_density(m, 7.0) == 0.0

    def test_vectorized(self):
        out = eval_density(OHMIC(2.0), np.array([0.0, 1.0, -1.0]))
        assert out.shape == (3,)
        assert out[1] == -out[2]  # odd density


class TestValidation:
    def test_bad_cutoff(self):
        with pytest.raises(ValueError):
            OHMIC(-1.0)

    def test_bad_width(self):
        with pytest.raises(ValueError):
            SpectralModel.lorentzian(1.0, 0.0)

    def test_tabulated_needs_increasing_freqs(self):
        with pytest.raises(ValueError):
            SpectralModel.tabulated([0.0, 0.0, 1.0], [1.0, 1.0, 1.0])

    def test_tabulated_rejects_negative_density(self):
        with pytest.raises(ValueError):
            SpectralModel.tabulated([0.0, 1.0], [1.0, -0.1])

    def test_quadrature_config_bounds(self):
        with pytest.raises(ValueError):
            QuadratureConfig(freq_window=5.0)
        with pytest.raises(ValueError):
            QuadratureConfig(abs_tol=0.0)
        with pytest.raises(ValueError):
            QuadratureConfig(max_subdivisions=10)

    def test_unresolved_lorentzian_rejected(self):
        m = SpectralModel.lorentzian(1.0, 1.0)  # no detuning/anchor yet
        with pytest.raises(ValueError):
            gamma_closed(m, 1.0, 1.0)


class TestGammaClosed:
    def test_zero_at_t0(self):
        assert gamma_closed(OHMIC(3.0), 1.0, 0.0) == 0.0
        assert gamma_closed(resonant_lorentz(0.5), 0.5, 0.0) == 0.0

    def test_ohmic_zero_transition_frequency(self):
        ts = np.linspace(0.0, 10.0, 50)
        assert np.all(gamma_closed(OHMIC(3.0), 0.0, ts) == 0.0)

    def test_lorentzian_resonant_value(self):
        # resonant rate is R (1 - e^{-lam t}); at lam t = 2 that is 1 - e^-2
        m = resonant_lorentz(0.5)
        got = gamma_closed(m, 0.5, 4.0)
        assert got == pytest.approx(0.8646647167633873, rel=1e-12)

    def test_tabulated_has_no_closed_form(self):
        m = SpectralModel.tabulated([0.0, 1.0], [0.0, 1.0])
        with pytest.raises(ClosedFormUnavailableError):
            gamma_closed(m, 1.0, 1.0)
        with pytest.raises(ClosedFormUnavailableError):
            beta_closed(m, 1.0, 1.0)

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            gamma_closed(OHMIC(1.0), 1.0, -0.5)

    def test_ohmic_long_time_limit(self):
        # at omega_c t = 50 the transient is e^-50, far below 1e-12 relative
        wc, wj = 2.0, 1.3
        limit = 4.0 * wc**2 * wj / (wj**2 + wc**2)
        got = gamma_closed(OHMIC(wc), wj, 50.0 / wc)
        assert got == pytest.approx(limit, rel=1e-12)
        assert gamma_long_time(OHMIC(wc), wj) == pytest.approx(limit, rel=1e-14)

    def test_lorentzian_long_time_limit(self):
        m = resonant_lorentz(1.0, rate=2.5)
        assert gamma_closed(m, 0.5, 60.0) == pytest.approx(2.5, rel=1e-12)


class TestBetaClosed:
    def test_zero_at_t0(self):
        assert beta_closed(OHMIC(3.0), 1.0, 0.0) == 0.0
        assert beta_closed(resonant_lorentz(2.0), 0.5, 0.0) == 0.0

    def test_lorentzian_resonant_form(self):
        # beta_1 = R (t + (e^{-lam t} - 1)/lam) on resonance
        lam, R = 0.7, 1.3
        m = resonant_lorentz(lam, rate=R)
        ts = np.linspace(0.0, 12.0, 40)
        expect = R * (ts + (np.exp(-lam * ts) - 1.0) / lam)
        np.testing.assert_allclose(beta_closed(m, 0.5, ts), expect,
                                   rtol=1e-12, atol=1e-14)

    def test_ohmic_zero_transition_frequency(self):
        ts = np.linspace(0.0, 8.0, 30)
        assert np.all(beta_closed(OHMIC(0.5), 0.0, ts) == 0.0)


@st.composite
def closed_form_models(draw):
    if draw(st.booleans()):
        model = OHMIC(draw(st.floats(0.2, 5.0)))
    else:
        model = lorentz(draw(st.floats(0.2, 4.0)),
                        detuning=draw(st.floats(0.0, 1.0)),
                        rate=draw(st.floats(0.5, 3.0)))
    return model


class TestDerivativeConsistency:
    @given(closed_form_models(), st.floats(0.0, 2.5), st.floats(1e-4, 10.0))
    @settings(max_examples=150)
    def test_beta_derivative_is_gamma(self, model, omega_j, t):
        h = 1e-5
        t = max(t, h)
        fd = (beta_closed(model, omega_j, t + h)
              - beta_closed(model, omega_j, t - h)) / (2 * h)
        assert fd == pytest.approx(gamma_closed(model, omega_j, t), abs=1e-6)


class TestGammaNumeric:
    def test_zero_at_t0(self):
        assert gamma_numeric(OHMIC(3.0), 1.0, 0.0) == 0.0

    def test_matches_ohmic_closed(self):
        m = OHMIC(3.0)
        gc = gamma_closed(m, 1.0, 1.0)
        assert gamma_numeric(m, 1.0, 1.0) == pytest.approx(gc, rel=1e-6)

    def test_matches_lorentzian_resonant(self):
        m = resonant_lorentz(0.5)
        got = gamma_numeric(m, 0.5, 4.0)  # lam t = 2
        assert got == pytest.approx(1.0 - math.exp(-2.0), rel=1e-6)

    def test_near_zero_rate_absolute(self):
        m = OHMIC(3.0)
        assert abs(gamma_numeric(m, 0.0, 2.0)) <= 1e-9

    def test_tabulated_path(self):
        # a dense tabulation of the Lorentzian line reproduces its rate to
        # within the piecewise-linear interpolation error; tolerances matched
        # to the data quality since the kinks limit quadrature convergence
        lam = 1.0
        ref = resonant_lorentz(lam)
        freqs = np.linspace(0.5 - 12.0, 0.5 + 12.0, 2401)
        m = SpectralModel.tabulated(freqs, eval_density(ref, freqs))
        cfg = QuadratureConfig(freq_window=10.0, abs_tol=1e-6, rel_tol=1e-6)
        got = gamma_numeric(m, 0.5, 2.0, cfg)
        want = gamma_closed(ref, 0.5, 2.0)
        assert got == pytest.approx(want, abs=2e-4)

    def test_convergence_failure_raises(self):
        # jagged tabulated density, tiny tolerances, minimal subdivision budget
        freqs = np.linspace(0.0, 10.0, 801)
        dens = 1.0 + 0.9 * np.sign(np.sin(997.0 * freqs))
        m = SpectralModel.tabulated(freqs, dens)
        cfg = QuadratureConfig(freq_window=10.0, abs_tol=1e-13, rel_tol=1e-13,
                               max_subdivisions=100)
        with pytest.raises(QuadratureConvergenceError) as err:
            gamma_numeric(m, 5.0, 3.0, cfg)
        assert err.value.estimate > 0.0


class TestBetaNumeric:
    def test_single_point_grid(self):
        out = beta_numeric(OHMIC(3.0), 1.0, TimeGrid(1.0, 1))
        np.testing.assert_array_equal(out, [0.0])

    def test_grid_must_start_at_zero(self):
        class Shifted:
            times = np.array([1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            beta_numeric(OHMIC(3.0), 1.0, Shifted())

    def test_matches_closed_ohmic(self):
        m = OHMIC(3.0)
        grid = TimeGrid(10.0, 401)
        bn = beta_numeric(m, 1.0, grid)
        bc = beta_closed(m, 1.0, grid.times)
        assert np.max(np.abs(bn - bc)) <= 1e-5

    def test_matches_closed_lorentzian_resonant(self):
        lam = 1.0
        m = resonant_lorentz(lam)
        grid = TimeGrid(2.0, 81)  # includes lam t = 1 at index 40
        bn = beta_numeric(m, 0.5, grid)
        t = grid.times[40]
        assert t == pytest.approx(1.0)
        want = 1.0 * (t + (math.exp(-lam * t) - 1.0) / lam)
        assert bn[40] == pytest.approx(want, abs=1e-6)
