"""Master-equation integration: analytic decays, conservation laws, grids."""

import numpy as np
import pytest

from qnmsps import (
    Emitter,
    HilbertSpace,
    IntegrationError,
    PulseSpec,
    QnmMode,
    SystemModel,
    TimeGrid,
    default_time_grid,
    evolve,
    expectation,
    ground_state,
)
from qnmsps.constants import HBAR_EV_PS, rate_from_ev


def make_model(g=0.0, gamma=0.0, gamma_prime=0.0, kappa=0.1658, area=0.0,
               tau_p=1.0, n_fock=3):
    omega = 1.2067
    mode = QnmMode(omega_c=omega, kappa=kappa, beta_rad=0.6, g=g, n_b=1.5)
    emitter = Emitter(omega_a=omega, dipole=30.0, gamma=gamma,
                      gamma_prime=gamma_prime)
    pulse = PulseSpec(area=area, tau_p=tau_p, t_off=5 * tau_p, omega_l=omega)
    return SystemModel(mode=mode, emitter=emitter, pulse=pulse,
                       space=HilbertSpace(n_fock))


def excited_state(model):
    rho = np.zeros((model.dim, model.dim), dtype=complex)
    rho[model.space.index(1, 0), model.space.index(1, 0)] = 1.0
    return rho


def one_photon_state(model):
    rho = np.zeros((model.dim, model.dim), dtype=complex)
    rho[model.space.index(0, 1), model.space.index(0, 1)] = 1.0
    return rho


class TestEvolve:
    def test_unpumped_ground_state_stays(self):
        model = make_model(g=3.96e-3, gamma=2.57e-7)
        traj = evolve(model, TimeGrid(t_end=5.0, n_steps=50))
        assert np.allclose(traj.n_a, 0.0, atol=1e-12)
        assert np.allclose(traj.n_c, 0.0, atol=1e-12)

    def test_two_level_pure_decay(self):
        gamma = 0.01
        model = make_model(gamma=gamma)
        t_end = 5 * HBAR_EV_PS / gamma
        traj = evolve(model, TimeGrid(t_end=t_end, n_steps=200), excited_state(model))
        expected = np.exp(-rate_from_ev(gamma) * traj.times)
        assert np.max(np.abs(traj.n_a - expected) / expected) < 1e-6

    def test_cavity_decay(self):
        model = make_model()
        t_end = 5 * HBAR_EV_PS / model.mode.kappa
        traj = evolve(model, TimeGrid(t_end=t_end, n_steps=200), one_photon_state(model))
        expected = np.exp(-rate_from_ev(model.mode.kappa) * traj.times)
        assert np.max(np.abs(traj.n_c - expected)) < 1e-6

    def test_unitary_purity_conservation(self):
        # all rates off, drive on: trace(rho^2) must stay 1
        mode = QnmMode(omega_c=1.2067, kappa=1e-12, beta_rad=0.6, g=1e-3, n_b=1.5)
        emitter = Emitter(omega_a=1.2067, dipole=30.0)
        pulse = PulseSpec(area=np.pi, tau_p=1.0, t_off=3.0, omega_l=1.2067)
        model = SystemModel(mode=mode, emitter=emitter, pulse=pulse,
                            space=HilbertSpace(3))
        traj = evolve(model, TimeGrid(t_end=8.0, n_steps=80, dt_max=0.25))
        purity = [expectation(s.matrix, s.matrix).real for s in traj.states]
        assert np.max(np.abs(np.array(purity) - 1.0)) < 1e-7

    def test_trace_drift_recorded(self):
        model = make_model(g=3.96e-3, gamma=2.57e-7, area=np.pi, tau_p=1.7)
        traj = evolve(model, default_time_grid(model, n_steps=60))
        assert traj.trace_drift.max() < 1e-9
        for state in traj.states:
            assert abs(np.trace(state.matrix).real - 1.0) < 1e-12

    def test_rejects_bad_initial_state(self):
        model = make_model()
        bad = np.eye(model.dim, dtype=complex)   # trace != 1
        with pytest.raises(ValueError):
            evolve(model, TimeGrid(t_end=1.0, n_steps=10), bad)

    def test_pi_pulse_inverts_fast_limit(self):
        # pulse much shorter than every decay time: full inversion
        model = make_model(g=3.96e-3, gamma=2.57e-7, area=np.pi, tau_p=1e-3)
        grid = TimeGrid(t_end=2e-2, n_steps=100, dt_max=2.5e-4)
        traj = evolve(model, grid)
        assert traj.n_a.max() > 0.99


class TestExpectation:
    def test_identity_trace(self):
        model = make_model()
        rho = ground_state(model.space)
        assert expectation(rho, np.eye(model.dim, dtype=complex)) == pytest.approx(1.0)

    def test_projector_on_excited(self):
        model = make_model()
        rho = excited_state(model)
        assert expectation(rho, model.n_excited).real == pytest.approx(1.0)

    def test_matches_diagonal_sum(self):
        model = make_model()
        weights = np.array([0.5, 0.3, 0.15, 0.05])
        rho = np.zeros((model.dim, model.dim), dtype=complex)
        for n, w in enumerate(weights):
            rho[n, n] = w
        direct = sum(n * w for n, w in enumerate(weights))
        assert expectation(rho, model.n_photon).real == pytest.approx(direct)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            expectation(np.eye(3, dtype=complex) / 3, np.eye(4, dtype=complex))


class TestTimeGrid:
    def test_validation(self):
        with pytest.raises(ValueError):
            TimeGrid(t_end=0.0, n_steps=10)
        with pytest.raises(ValueError):
            TimeGrid(t_end=1.0, n_steps=1)

    def test_uniform_times(self):
        grid = TimeGrid(t_end=2.0, n_steps=5)
        assert np.allclose(grid.times, [0.0, 0.5, 1.0, 1.5, 2.0])
        assert grid.spacing == pytest.approx(0.5)

    def test_default_window_covers_decay(self):
        model = make_model(g=3.96e-3, gamma=2.57e-7, area=np.pi, tau_p=1.74)
        grid = default_time_grid(model)
        gamma_p = model.purcell_rate()
        assert grid.t_end >= model.pulse.t_off + 10 * HBAR_EV_PS / gamma_p


class TestNumericalStability:
    def test_dt_max_halving(self):
        # reported scalars must be insensitive to the step ceiling
        from dataclasses import replace

        from qnmsps import figure_config, run_scenario

        base = replace(figure_config("fig2"), n_steps=120, n_tau=120)
        coarse = run_scenario(base)
        fine = run_scenario(replace(base, dt_max_ps=coarse.parameters["grid.dt_max_ps"] / 2))
        for attr in ("p1", "pa", "p2"):
            assert abs(getattr(coarse.budget, attr) - getattr(fine.budget, attr)) < 1e-4
        for attr in ("d1", "d2", "ind"):
            assert abs(getattr(coarse.ind, attr) - getattr(fine.ind, attr)) < 1e-4

    def test_csv_roundtrip(self, tmp_path):
        model = make_model(gamma=0.01)
        traj = evolve(model, TimeGrid(t_end=1.0, n_steps=20), excited_state(model))
        path = tmp_path / "trajectory.csv"
        traj.to_csv(path)
        data = np.genfromtxt(path, delimiter=",", names=True)
        assert data.shape == (20,)
        assert np.allclose(data["n_a"], traj.n_a)
        assert np.allclose(data["t"], traj.times)
