"""Two-time correlation functions, the beam-splitter cross-correlation, and
the indistinguishability decomposition.

The quantum regression theorem is applied on a rectangular (t, tau) grid: for
each trajectory sample rho(t) the operator-valued initial conditions
rho(t) a^+ (first order) and a rho(t) a^+ (second order) are propagated
forward in tau under the same generator, with the pump evaluated at the
shifted absolute times, and traced against a and a^+ a respectively.

The tau propagation uses exact matrix exponentials of the generator frozen at
substep midpoints. Because every row start lies on the shared tau lattice,
one propagator per absolute-time step serves all rows, and the rows advance
together as a single dense matrix product per step. Output is deterministic
and identical to propagating each row independently.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .dynamics import Trajectory
from .liouvillian import SystemModel, liouvillian_static, pump_amplitude, pump_superoperator

# pump weaker than this (in absolute rotation per step) is treated as off
_DRIVE_NEGLIGIBLE = 1e-13


@dataclass(frozen=True)
class IndResult:
    """Indistinguishability and its first/second order decoherence parts."""

    d1: float
    d2: float
    ind: float

    def __post_init__(self):
        tol = 1e-6
        if not -tol <= self.d1 <= 1 + tol or not -tol <= self.d2 <= 1 + tol:
            raise ValueError("decoherence fractions must lie in [0, 1]")
        if abs(self.ind - (1.0 - self.d1 - self.d2)) > 1e-12:
            raise ValueError("ind must equal 1 - d1 - d2")


@dataclass
class CorrelationGrid:
    """Correlators sampled on a rectangular (t, tau) grid.

    g1[i, j] = <a^+(t_i) a(t_i + tau_j)>, g2 likewise for the intensity
    correlator, g2_pop is the factorized product n_c(t) n_c(t + tau), and
    a_mean_t / a_mean_ttau hold the first moments entering the two-pulse
    normalization. Values at t + tau beyond the simulated window are zero
    (the system is back in its ground state by construction of the window).
    """

    t_samples: np.ndarray
    tau_samples: np.ndarray
    g1: np.ndarray
    g2: np.ndarray
    g2_pop: np.ndarray
    a_mean_t: np.ndarray
    a_mean_ttau: np.ndarray

    def __post_init__(self):
        m, k = len(self.t_samples), len(self.tau_samples)
        for name in ("g1", "g2", "g2_pop", "a_mean_ttau"):
            if getattr(self, name).shape != (m, k):
                raise ValueError(f"{name} must have shape ({m}, {k})")
        if self.g2.min() < -1e-9:
            raise ValueError("g2 has entries below the -1e-9 tolerance")

    def to_csv(self, path) -> None:
        """One row per grid point: t,tau,re_g1,im_g1,g2,g2_pop,g2_hom."""
        hom = hom_correlation(self)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "tau", "re_g1", "im_g1", "g2", "g2_pop", "g2_hom"])
            for i, t in enumerate(self.t_samples):
                for j, tau in enumerate(self.tau_samples):
                    writer.writerow([
                        repr(float(t)), repr(float(tau)),
                        repr(float(self.g1[i, j].real)), repr(float(self.g1[i, j].imag)),
                        repr(float(self.g2[i, j])), repr(float(self.g2_pop[i, j])),
                        repr(float(hom[i, j])),
                    ])


def _check_tau_grid(tau_grid: np.ndarray) -> float:
    tau = np.asarray(tau_grid, dtype=float)
    if tau.ndim != 1 or len(tau) < 2:
        raise ValueError("tau grid needs at least two samples")
    if tau[0] != 0.0:
        raise ValueError("tau grid must start at 0")
    steps = np.diff(tau)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise ValueError("tau grid must be uniform")
    return float(steps[0])


def _row_start_indices(t_samples: np.ndarray, dtau: float) -> np.ndarray:
    ratio = np.asarray(t_samples, dtype=float) / dtau
    starts = np.rint(ratio).astype(int)
    if np.max(np.abs(ratio - starts)) > 1e-6:
        raise ValueError(
            "trajectory sample times must lie on the tau lattice so that "
            "step propagators can be shared across rows"
        )
    if np.any(np.diff(starts) <= 0):
        raise ValueError("trajectory sample times must be strictly increasing")
    return starts


def _qrt_march(model: SystemModel, states: list[np.ndarray],
               t_samples: np.ndarray, tau_grid: np.ndarray,
               channels: tuple[str, ...], drive=None,
               drive_timescale: float | None = None) -> dict[str, np.ndarray]:
    """Propagate QRT initial conditions for every t row; see module docstring.

    ``drive`` defaults to the model's pump envelope; passing a callable allows
    multi-pulse excitation in the tau window. Returns one (M, K) array per
    requested channel ("g1" and/or "g2").
    """
    if drive is None:
        pulse = model.pulse

        def drive(t):
            return pump_amplitude(pulse, t)

    timescale = drive_timescale if drive_timescale is not None else model.pulse.tau_p
    dtau = _check_tau_grid(tau_grid)
    starts = _row_start_indices(t_samples, dtau)
    n_rows = len(starts)
    n_tau = len(tau_grid)
    n_steps = int(starts[-1]) + n_tau - 1
    dim = model.dim
    d2 = dim * dim

    a_dag = model.a_dag
    ic_makers = {
        "g1": lambda rho: (rho @ a_dag).reshape(-1),
        "g2": lambda rho: (model.a @ rho @ a_dag).reshape(-1),
    }
    weight_of = {
        "g1": model.a.T.reshape(-1),          # tr(a X) = w . vec(X)
        "g2": model.n_photon.T.reshape(-1),
    }
    for ch in channels:
        if ch not in ic_makers:
            raise ValueError(f"unknown channel {ch!r}")
    nc = len(channels)
    weights = np.stack([weight_of[ch] for ch in channels])
    out = {ch: np.zeros((n_rows, n_tau), dtype=complex) for ch in channels}

    l0 = liouvillian_static(model)
    l1 = pump_superoperator(model)
    n_sub = max(1, int(np.ceil(dtau / (timescale / 10.0))))
    h_sub = dtau / n_sub

    # pump strength at every substep midpoint, to decide which steps need a
    # fresh exponential and to freeze the generator there
    mids = (np.arange(n_steps)[:, None] * dtau
            + (np.arange(n_sub)[None, :] + 0.5) * h_sub)
    omega_mid = np.asarray(drive(mids), dtype=float)
    step_active = np.abs(omega_mid).max(axis=1) * dtau > _DRIVE_NEGLIGIBLE

    p_free = None
    eye = np.eye(d2, dtype=complex)

    def propagator(k: int) -> np.ndarray:
        nonlocal p_free
        if not step_active[k]:
            if p_free is None:
                p_free = expm(dtau * l0)
            return p_free
        p = eye
        for j in range(n_sub):
            p = expm(h_sub * (l0 + omega_mid[k, j] * l1)) @ p
        return p

    y = np.zeros((d2, n_rows * nc), dtype=complex)
    next_row = 0
    lo = 0
    for k in range(n_steps):
        while next_row < n_rows and starts[next_row] == k:
            rho = states[next_row]
            for c, ch in enumerate(channels):
                vec = ic_makers[ch](rho)
                y[:, next_row * nc + c] = vec
                out[ch][next_row, 0] = weights[c] @ vec
            next_row += 1
        while lo < next_row and k - starts[lo] > n_tau - 2:
            lo += 1
        if lo == next_row:
            continue
        cols = slice(lo * nc, next_row * nc)
        try:
            y[:, cols] = propagator(k) @ y[:, cols]
        except Exception as exc:  # pragma: no cover
            raise RuntimeError(
                f"correlation propagation failed on step t={k * dtau:.6g} ps "
                f"(rows t in [{t_samples[lo]:.6g}, {t_samples[next_row - 1]:.6g}])"
            ) from exc
        vals = weights @ y[:, cols]
        rows = np.arange(lo, next_row)
        taus = k + 1 - starts[lo:next_row]
        for c, ch in enumerate(channels):
            out[ch][rows, taus] = vals[c, c::nc]
    return out


def qrt_g1(model: SystemModel, traj: Trajectory, tau_grid) -> np.ndarray:
    """First-order coherence <a^+(t) a(t+tau)> on the (t, tau) grid.

    The tau = 0 column equals the photon number n_c(t).
    """
    res = _qrt_march(model, traj.state_matrices(), traj.times,
                     np.asarray(tau_grid, dtype=float), ("g1",))
    return res["g1"]


def qrt_g2(model: SystemModel, traj: Trajectory, tau_grid) -> np.ndarray:
    """Intensity correlator <a^+(t) a^+ a(t+tau) a(t)>, real and non-negative
    to numerical tolerance."""
    res = _qrt_march(model, traj.state_matrices(), traj.times,
                     np.asarray(tau_grid, dtype=float), ("g2",))
    return res["g2"].real


def compute_correlations(model: SystemModel, traj: Trajectory,
                         tau_grid=None) -> CorrelationGrid:
    """Full correlation grid for a trajectory; tau defaults to the trajectory
    time grid so that t and tau share one spacing."""
    tau = np.asarray(tau_grid, dtype=float) if tau_grid is not None else traj.times.copy()
    res = _qrt_march(model, traj.state_matrices(), traj.times, tau, ("g1", "g2"))
    n_rows, n_tau = res["g1"].shape

    dtau = tau[1] - tau[0]
    starts = _row_start_indices(traj.times, dtau)
    # n_c and <a> at t + tau, zero beyond the simulated window
    n_ext = np.zeros(starts[-1] + n_tau)
    a_ext = np.zeros(starts[-1] + n_tau, dtype=complex)
    n_ext[starts] = traj.n_c
    a_ext[starts] = traj.a_mean
    if len(starts) > 1 and starts[1] - starts[0] > 1:
        # t samples sparser than tau: fill gaps by linear interpolation
        t_dense = np.arange(starts[-1] + 1) * dtau
        n_ext[: starts[-1] + 1] = np.interp(t_dense, traj.times, traj.n_c)
        a_ext[: starts[-1] + 1] = (
            np.interp(t_dense, traj.times, traj.a_mean.real)
            + 1j * np.interp(t_dense, traj.times, traj.a_mean.imag)
        )
    idx = starts[:, None] + np.arange(n_tau)[None, :]
    return CorrelationGrid(
        t_samples=traj.times.copy(),
        tau_samples=tau,
        g1=res["g1"],
        g2=res["g2"].real,
        g2_pop=traj.n_c[:, None] * n_ext[idx],
        a_mean_t=traj.a_mean.copy(),
        a_mean_ttau=a_ext[idx],
    )


def hom_correlation(grid: CorrelationGrid) -> np.ndarray:
    """Beam-splitter intensity cross-correlation
    0.5 (g2_pop + g2 - |g1|^2) for two identical triggered sources."""
    return 0.5 * (grid.g2_pop + grid.g2 - np.abs(grid.g1) ** 2)


def _double_trapezoid(values: np.ndarray, t: np.ndarray, tau: np.ndarray) -> float:
    return float(np.trapezoid(np.trapezoid(values, tau, axis=1), t, axis=0))


def indistinguishability(grid: CorrelationGrid, t_end: float) -> IndResult:
    """Indistinguishability Ind = 1 - D1 - D2 from the correlation grid.

    D1 and D2 are the coincidence fractions from first-order decoherence and
    from multiphoton emission, both normalized by the area of the
    cross-correlation peak between photons of distinct trigger periods:

        D1 = int (g2_pop - |g1|^2) / int (2 g2_pop - |<a(t+tau)><a^+(t)>|^2)
        D2 = int g2            / same denominator

    with composite-trapezoid integrals over [0, T] x [0, T].
    """
    t, tau = grid.t_samples, grid.tau_samples
    span_tol = 0.5 * max(t[1] - t[0], tau[1] - tau[0])
    if abs(t[-1] - t_end) > span_tol or abs(tau[-1] - t_end) > span_tol:
        raise ValueError("correlation grid does not span [0, T] x [0, T]")

    coherent_sq = (np.abs(grid.a_mean_t) ** 2)[:, None] * np.abs(grid.a_mean_ttau) ** 2
    den = _double_trapezoid(2.0 * grid.g2_pop - coherent_sq, t, tau)
    if den <= 0:
        raise ValueError("no emission in the grid; indistinguishability undefined")
    d1 = _double_trapezoid(grid.g2_pop - np.abs(grid.g1) ** 2, t, tau) / den
    d2 = _double_trapezoid(grid.g2, t, tau) / den
    return IndResult(d1=d1, d2=d2, ind=1.0 - d1 - d2)
