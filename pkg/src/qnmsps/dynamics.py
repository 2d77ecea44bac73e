"""Master-equation time integration and single-time expectation values.

``evolve`` integrates the vectorized generator with an explicit adaptive
Runge-Kutta 4(5) scheme (scipy's Dormand-Prince implementation) at tight
tolerances, samples the solution on a uniform grid, and validates trace and
positivity of every sampled state.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .liouvillian import (
    DensityOperator,
    SystemModel,
    _as_matrix,
    liouvillian_static,
    pump_amplitude,
    pump_superoperator,
)


class IntegrationError(RuntimeError):
    """Raised when the integrator output violates trace or positivity bounds."""


TRACE_DRIFT_MAX = 1e-6
EIGENVALUE_MIN = -1e-6


@dataclass(frozen=True)
class TimeGrid:
    """Uniform output grid on [0, t_end] with an integrator step ceiling."""

    t_end: float
    n_steps: int = 400
    dt_max: float | None = None

    def __post_init__(self):
        if self.t_end <= 0:
            raise ValueError("t_end must be positive")
        if self.n_steps < 2:
            raise ValueError("n_steps must be at least 2")
        if self.dt_max is not None and self.dt_max <= 0:
            raise ValueError("dt_max must be positive")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end, self.n_steps)

    @property
    def spacing(self) -> float:
        return self.t_end / (self.n_steps - 1)


def default_time_grid(model: SystemModel, n_steps: int = 400) -> TimeGrid:
    """Simulation window long enough for the system to return to its ground
    state: t_off + max(10 / gamma_P, 10 / kappa, 8 tau_p)."""
    from .constants import HBAR_EV_PS

    gamma_p = model.purcell_rate()
    tail = max(
        10.0 * HBAR_EV_PS / gamma_p if gamma_p > 0 else 0.0,
        10.0 * HBAR_EV_PS / model.mode.kappa,
        8.0 * model.pulse.tau_p,
    )
    return TimeGrid(
        t_end=model.pulse.t_off + tail,
        n_steps=n_steps,
        dt_max=model.pulse.tau_p / 4.0,
    )


@dataclass
class Trajectory:
    """Sampled density-operator trajectory with the standard observables.

    trace_drift holds |tr(rho) - 1| of each raw integrator sample before the
    stored state was renormalized.
    """

    times: np.ndarray
    states: list[DensityOperator]
    n_a: np.ndarray
    n_c: np.ndarray
    a_mean: np.ndarray
    trace_drift: np.ndarray

    def state_matrices(self) -> list[np.ndarray]:
        return [s.matrix for s in self.states]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "n_a", "n_c", "re_a", "im_a"])
            for t, na, nc, am in zip(self.times, self.n_a, self.n_c, self.a_mean):
                writer.writerow([repr(float(t)), repr(float(na)), repr(float(nc)),
                                 repr(float(am.real)), repr(float(am.imag))])


def expectation(rho, op: np.ndarray) -> complex:
    """trace(op rho); real to numerical precision when op is Hermitian and
    rho is a valid state."""
    rho = _as_matrix(rho)
    if rho.shape != op.shape:
        raise ValueError("operator and state dimensions differ")
    return complex(np.trace(op @ rho))


def evolve(model: SystemModel, grid: TimeGrid, rho0=None,
           rtol: float = 1e-8, atol: float = 1e-10) -> Trajectory:
    """Integrate the master equation over the grid.

    Starts from |g, 0><g, 0| unless rho0 is given. Sampled states are
    renormalized in trace when the drift is below 1e-6 and rejected above it;
    eigenvalues below -1e-6 raise IntegrationError.
    """
    dim = model.dim
    if rho0 is None:
        y0 = np.zeros(dim * dim, dtype=complex)
        y0[0] = 1.0
    else:
        rho0 = _as_matrix(rho0)
        if rho0.shape != (dim, dim):
            raise ValueError(f"rho0 must be {dim} x {dim}")
        DensityOperator(rho0)
        y0 = rho0.reshape(-1)

    l0 = liouvillian_static(model)
    l1 = pump_superoperator(model)
    pulse = model.pulse

    def rhs(t, y):
        return l0 @ y + pump_amplitude(pulse, t) * (l1 @ y)

    max_step = grid.dt_max if grid.dt_max is not None else np.inf
    sol = solve_ivp(rhs, (0.0, grid.t_end), y0, t_eval=grid.times,
                    method="RK45", rtol=rtol, atol=atol, max_step=max_step)
    if not sol.success:
        raise IntegrationError(f"time integration failed: {sol.message}")

    states: list[DensityOperator] = []
    n_a = np.empty(grid.n_steps)
    n_c = np.empty(grid.n_steps)
    a_mean = np.empty(grid.n_steps, dtype=complex)
    trace_drift = np.empty(grid.n_steps)
    for k in range(grid.n_steps):
        rho = sol.y[:, k].reshape(dim, dim)
        tr = np.trace(rho).real
        trace_drift[k] = abs(tr - 1.0)
        if abs(tr - 1.0) > TRACE_DRIFT_MAX:
            raise IntegrationError(
                f"trace drift {abs(tr - 1.0):.3e} at t={sol.t[k]:.6g} ps "
                f"exceeds {TRACE_DRIFT_MAX:.0e}"
            )
        rho = 0.5 * (rho + rho.conj().T) / tr
        if np.linalg.eigvalsh(rho).min() < EIGENVALUE_MIN:
            raise IntegrationError(
                f"negative eigenvalue beyond {EIGENVALUE_MIN:.0e} "
                f"at t={sol.t[k]:.6g} ps"
            )
        states.append(DensityOperator(rho, eig_tol=-EIGENVALUE_MIN))
        n_a[k] = expectation(rho, model.n_excited).real
        n_c[k] = expectation(rho, model.n_photon).real
        a_mean[k] = expectation(rho, model.a)

    return Trajectory(times=grid.times, states=states, n_a=n_a, n_c=n_c,
                      a_mean=a_mean, trace_drift=trace_drift)
