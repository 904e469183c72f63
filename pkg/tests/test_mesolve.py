import math

import numpy as np
import pytest

from cavityqfi import (
    IntegratorConfig,
    SpectralModel,
    SystemConfig,
    TimeGrid,
    amplitude,
    atom_state,
    beta_closed,
    dressed_physicality,
    evolve,
    gamma_closed,
    generator_apply,
    initial_dressed,
    partial_trace_cavity,
    timelocal_residual,
)

SQ2 = math.sqrt(2.0)


def ohmic_cfg(coupling=1.0, omega_c=3.0, theta=math.pi / 2, phi=0.0):
    return SystemConfig(omega0=1.0, coupling=coupling, theta=theta, phi=phi,
                        spectral=SpectralModel.ohmic_lorentz_drude(omega_c))


def lorentz_cfg(coupling, width, theta=math.pi / 2):
    return SystemConfig(omega0=1.0, coupling=coupling, theta=theta, phi=0.0,
                        spectral=SpectralModel.lorentzian(1.0, width))


def basis_state(i):
    rho = np.zeros((3, 3), dtype=complex)
    rho[i, i] = 1.0
    return rho


class TestInitialDressed:
    def test_ground_atom(self):
        rho = initial_dressed(ohmic_cfg(theta=math.pi))
        np.testing.assert_allclose(rho, basis_state(0), atol=1e-15)

    def test_excited_atom(self):
        rho = initial_dressed(ohmic_cfg(theta=0.0))
        np.testing.assert_allclose(np.diag(rho), [0.0, 0.5, 0.5], atol=1e-15)
        assert rho[1, 2] == pytest.approx(-0.5)

    def test_equatorial_atom_populations(self):
        rho = initial_dressed(ohmic_cfg(theta=math.pi / 2, phi=0.0))
        np.testing.assert_allclose(np.diag(rho).real, [0.5, 0.25, 0.25],
                                   atol=1e-15)


class TestGenerator:
    def test_ground_state_stationary(self):
        cfg = ohmic_cfg()
        out = generator_apply(cfg, 2.3, basis_state(0))
        np.testing.assert_allclose(out, np.zeros((3, 3)), atol=1e-15)

    def test_eigenstate_stationary_without_rates(self):
        # rates vanish identically at t = 0
        out = generator_apply(ohmic_cfg(), 0.0, basis_state(2))
        np.testing.assert_allclose(out, np.zeros((3, 3)), atol=1e-15)

    def test_ground_coherence_channel(self):
        # d rho_{10} = (-i omega_1 - gamma_1/4) rho_{10}
        cfg = ohmic_cfg(coupling=0.3)
        t = 1.7
        unit = np.zeros((3, 3), dtype=complex)
        unit[1, 0] = 1.0
        out = generator_apply(cfg, t, unit)
        g1 = gamma_closed(cfg.spectral, cfg.omega_1, t)
        expected = (-1j * cfg.omega_1 - g1 / 4.0) * unit
        np.testing.assert_allclose(out, expected, atol=1e-14)


class TestEvolve:
    def test_initial_sample_exact(self):
        cfg = ohmic_cfg()
        traj = evolve(cfg, TimeGrid(1.0, 11), IntegratorConfig(step=0.02))
        np.testing.assert_array_equal(traj[0], initial_dressed(cfg))

    def test_vacuum_rabi_population(self):
        cfg = ohmic_cfg(coupling=0.8, theta=1.1)
        grid = TimeGrid(10.0, 101)
        traj = evolve(cfg, grid, IntegratorConfig(step=0.01), dissipation=False)
        pop = partial_trace_cavity(traj)[:, 0, 0].real
        expected = math.cos(cfg.theta / 2) ** 2 * np.cos(0.8 * grid.times) ** 2
        np.testing.assert_allclose(pop, expected, atol=1e-8)

    def test_trace_preserved(self):
        cfg = ohmic_cfg(coupling=1.0, omega_c=0.3)
        grid = TimeGrid(20.0, 201)
        traj = evolve(cfg, grid, IntegratorConfig(step=0.02))
        traces = np.trace(traj, axis1=1, axis2=2)
        assert np.max(np.abs(traces - 1.0)) <= 1e-9 * grid.t_end

    def test_step_constraint(self):
        with pytest.raises(ValueError):
            evolve(ohmic_cfg(coupling=1.0), TimeGrid(1.0, 11),
                   IntegratorConfig(step=0.1))

    def test_record_every(self):
        cfg = ohmic_cfg()
        grid = TimeGrid(1.0, 11)
        traj = evolve(cfg, grid, IntegratorConfig(step=0.02, record_every=5))
        assert traj.shape == (3, 3, 3)  # samples at t = 0, 0.5, 1.0

    def test_dressed_coherence_envelope(self):
        # rho_{12}(t) = rho_{12}(0) e^{2i coupling t} e^{-(beta1+beta2)/4}
        cfg = ohmic_cfg(coupling=0.6, theta=0.9, omega_c=0.5)
        grid = TimeGrid(8.0, 81)
        traj = evolve(cfg, grid, IntegratorConfig(step=0.005))
        b1 = beta_closed(cfg.spectral, cfg.omega_1, grid.times)
        b2 = beta_closed(cfg.spectral, cfg.omega_2, grid.times)
        expected = (initial_dressed(cfg)[1, 2]
                    * np.exp(2j * cfg.coupling * grid.times)
                    * np.exp(-(b1 + b2) / 4.0))
        np.testing.assert_allclose(traj[:, 1, 2], expected, atol=1e-7)


class TestPartialTrace:
    def test_joint_ground(self):
        rho = partial_trace_cavity(basis_state(0))
        np.testing.assert_allclose(rho, np.diag([0.0, 1.0]), atol=1e-15)

    def test_upper_dressed_state(self):
        rho = partial_trace_cavity(basis_state(2))
        np.testing.assert_allclose(rho, np.diag([0.5, 0.5]), atol=1e-15)

    def test_chain_matches_analytic_state(self):
        cfg = ohmic_cfg(coupling=1.0, omega_c=3.0)
        grid = TimeGrid(20.0, 501)
        traj = evolve(cfg, grid, IntegratorConfig(step=0.01 / 2.0))
        ana = atom_state(cfg, amplitude(cfg, grid).p)
        dev = np.max(np.abs(partial_trace_cavity(traj) - ana))
        assert dev <= 1e-6
        d = dressed_physicality(traj)
        assert d["hermiticity"] <= 1e-10
        assert d["trace"] <= 1e-10
        assert d["min_eigenvalue"] >= -1e-6


class TestTimelocalResidual:
    def test_dissipation_free(self):
        cfg = ohmic_cfg(coupling=0.5)
        grid = TimeGrid(20.0, 20001)  # step 1e-3
        resid = timelocal_residual(cfg, grid, dissipation=False)
        away = np.abs(np.cos(cfg.coupling * grid.times)) > 1e-2
        away[0] = away[-1] = False
        assert np.nanmax(resid[away]) <= 1e-6

    def test_lorentzian_weak_coupling(self):
        cfg = lorentz_cfg(coupling=0.01, width=3.0)
        resid = timelocal_residual(cfg, TimeGrid(10.0, 40001))
        assert np.nanmax(resid) <= 1e-6

    def test_ohmic_strong_coupling(self):
        cfg = ohmic_cfg(coupling=1.0, omega_c=0.3)
        resid = timelocal_residual(cfg, TimeGrid(20.0, 20001))
        assert np.nanmax(resid) <= 1e-5

    def test_endpoints_are_nan(self):
        resid = timelocal_residual(ohmic_cfg(), TimeGrid(1.0, 51))
        assert math.isnan(resid[0]) and math.isnan(resid[-1])
        assert np.all(np.isfinite(resid[1:-1]))
