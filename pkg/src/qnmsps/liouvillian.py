"""Rotating-frame Hamiltonian, Lindblad dissipators, and the full generator.

The master equation implemented here is

    drho/dt = -(i/hbar) [H(t), rho]
              + (kappa/2) D[a] rho
              + (gamma/2) D[sigma-] rho
              + (gamma'/2) D[sigma+ sigma-] rho,

with D[A] rho = 2 A rho A^+ - {A^+ A, rho} and all rates in eV. Time
derivatives are returned in 1/ps.

Pump convention: ``pump_amplitude`` returns the Gaussian Rabi envelope
Omega(t) in rad/ps with area Theta = integral Omega dt, and the drive term in
the Hamiltonian is (hbar Omega(t) / 2)(sigma+ + sigma-), so a pulse of area pi
inverts the bare TLS exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constants import HBAR_EV_PS, rate_from_ev
from .hilbert import (
    HilbertSpace,
    annihilation,
    excited_projector,
    number_operator,
    sigma_minus,
    sigma_plus,
)
from .qnm import Emitter, QnmMode


@dataclass(frozen=True)
class DensityOperator:
    """Validated density matrix: Hermitian, unit trace, positive to tolerance."""

    matrix: np.ndarray
    herm_tol: float = 1e-10
    trace_tol: float = 1e-9
    eig_tol: float = 1e-8

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        if np.max(np.abs(m - m.conj().T)) > self.herm_tol:
            raise ValueError("density matrix is not Hermitian to tolerance")
        if abs(np.trace(m).real - 1.0) > self.trace_tol or abs(np.trace(m).imag) > self.trace_tol:
            raise ValueError("density matrix trace differs from 1 beyond tolerance")
        if np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min() < -self.eig_tol:
            raise ValueError("density matrix has a negative eigenvalue beyond tolerance")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _as_matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityOperator):
        return rho.matrix
    return np.asarray(rho, dtype=complex)


@dataclass(frozen=True)
class PulseSpec:
    """Gaussian pump pulse: area (rad), width tau_p (ps), offset (ps),
    carrier omega_l (eV)."""

    area: float
    tau_p: float
    t_off: float
    omega_l: float

    def __post_init__(self):
        if self.tau_p <= 0:
            raise ValueError("tau_p must be positive")
        if self.area < 0:
            raise ValueError("pulse area must be non-negative")
        if self.t_off <= 0:
            raise ValueError("t_off must be positive")


def pump_amplitude(pulse: PulseSpec, t) -> float | np.ndarray:
    """Rabi envelope Omega(t) in rad/ps.

    Omega(t) = Theta / (sqrt(pi) tau_p) * exp(-((t - t_off) / tau_p)^2), so
    the peak is Theta / (sqrt(pi) tau_p) and the time integral is Theta.
    Multiply by hbar for the equivalent energy in eV.
    """
    t = np.asarray(t, dtype=float)
    out = pulse.area / (np.sqrt(np.pi) * pulse.tau_p) \
        * np.exp(-((t - pulse.t_off) / pulse.tau_p) ** 2)
    return out if out.ndim else float(out)


@dataclass
class SystemModel:
    """Immutable bundle of mode, emitter, pulse, and truncation.

    Detunings are relative to the pump carrier: detuning_c = omega_c - omega_l
    and detuning_a = omega_a - omega_l, both in eV. Operator matrices are
    built once at construction.
    """

    mode: QnmMode
    emitter: Emitter
    pulse: PulseSpec
    space: HilbertSpace

    detuning_c: float = field(init=False)
    detuning_a: float = field(init=False)

    def __post_init__(self):
        self.detuning_c = self.mode.omega_c - self.pulse.omega_l
        self.detuning_a = self.emitter.omega_a - self.pulse.omega_l
        if not (np.isfinite(self.detuning_c) and np.isfinite(self.detuning_a)):
            raise ValueError("detunings must be finite")
        self.a = annihilation(self.space)
        self.a_dag = self.a.conj().T
        self.sm = sigma_minus(self.space)
        self.sp = sigma_plus(self.space)
        self.n_photon = number_operator(self.space)
        self.n_excited = excited_projector(self.space)
        # static part of H(t) in eV
        self.h_static = (
            self.detuning_c * self.n_photon
            + self.detuning_a * self.n_excited
            + self.mode.g * (self.a @ self.sp + self.a_dag @ self.sm)
        )
        self._sigma_x = self.sm + self.sp

    @property
    def dim(self) -> int:
        return self.space.dim

    def purcell_rate(self) -> float:
        """Bad-cavity emission rate 4 g^2 / kappa in eV."""
        return 4.0 * self.mode.g**2 / self.mode.kappa


def hamiltonian(model: SystemModel, t: float) -> np.ndarray:
    """System Hamiltonian at time t (ps), in eV, rotating frame of the pump."""
    omega = pump_amplitude(model.pulse, t)
    return model.h_static + 0.5 * HBAR_EV_PS * omega * model._sigma_x


def _dissipator(c: np.ndarray, rho: np.ndarray) -> np.ndarray:
    cc = c.conj().T @ c
    return 2.0 * c @ rho @ c.conj().T - cc @ rho - rho @ cc


def apply_generator(model: SystemModel, rho, t: float) -> np.ndarray:
    """Full Lindblad generator applied to a density matrix, in 1/ps.

    Accepts a DensityOperator or a plain matrix. The result is traceless and
    Hermitian whenever rho is Hermitian.
    """
    rho = _as_matrix(rho)
    if rho.shape != (model.dim, model.dim):
        raise ValueError(f"rho must be {model.dim} x {model.dim}")
    h = hamiltonian(model, t)
    drho = -1j / HBAR_EV_PS * (h @ rho - rho @ h)
    drho += 0.5 * rate_from_ev(model.mode.kappa) * _dissipator(model.a, rho)
    if model.emitter.gamma:
        drho += 0.5 * rate_from_ev(model.emitter.gamma) * _dissipator(model.sm, rho)
    if model.emitter.gamma_prime:
        drho += 0.5 * rate_from_ev(model.emitter.gamma_prime) \
            * _dissipator(model.n_excited, rho)
    return drho


def _commutator_superop(h: np.ndarray) -> np.ndarray:
    d = h.shape[0]
    eye = np.eye(d)
    return -1j * (np.kron(h, eye) - np.kron(eye, h.T))


def _dissipator_superop(c: np.ndarray) -> np.ndarray:
    d = c.shape[0]
    eye = np.eye(d)
    cc = c.conj().T @ c
    return np.kron(c, c.conj()) - 0.5 * (np.kron(cc, eye) + np.kron(eye, cc.T))


def liouvillian_static(model: SystemModel) -> np.ndarray:
    """Pump-free generator as a dim^2 x dim^2 matrix acting on row-major
    vectorized density matrices, in 1/ps."""
    l0 = _commutator_superop(model.h_static / HBAR_EV_PS)
    l0 += rate_from_ev(model.mode.kappa) * _dissipator_superop(model.a)
    if model.emitter.gamma:
        l0 += rate_from_ev(model.emitter.gamma) * _dissipator_superop(model.sm)
    if model.emitter.gamma_prime:
        l0 += rate_from_ev(model.emitter.gamma_prime) \
            * _dissipator_superop(model.n_excited)
    return l0


def pump_superoperator(model: SystemModel) -> np.ndarray:
    """Drive superoperator per unit Rabi amplitude; the full generator is
    liouvillian_static + Omega(t) * pump_superoperator."""
    return 0.5 * _commutator_superop(model._sigma_x)
