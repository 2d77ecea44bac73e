"""Classical quasinormal-mode quantities of a lossy resonator.

Everything here is a pure function of scalar parameters or pre-sampled field
data: Drude permittivity, the single-mode spectral function, the generalized
Purcell spectrum, effective mode volume, background spontaneous emission,
the emitter coupling implied by a peak Purcell factor, and the radiative and
non-radiative photon-normalization quadratures with their beta factors.

Solving the electromagnetic eigenproblem is out of scope; mode parameters and
sampled fields are inputs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.constants as sc

from .constants import C_NM_PS, DEBYE_CM, rate_from_ev


@dataclass(frozen=True)
class DrudeModel:
    """Local Drude permittivity parameters, both in eV."""

    omega_p: float
    gamma_p: float

    def __post_init__(self):
        if self.omega_p <= 0:
            raise ValueError("plasma frequency must be positive")
        if self.gamma_p < 0:
            raise ValueError("collision rate must be non-negative")


@dataclass(frozen=True)
class QnmMode:
    """A single quasinormal mode of a lossy resonator.

    Parameters
    ----------
    omega_c:
        Real part of the mode frequency (eV).
    kappa:
        Full-width energy decay rate (eV), so the complex pole sits at
        ``omega_c - 1j * kappa / 2``.
    beta_rad:
        Radiative fraction of the decay, in [0, 1].
    s_factor:
        Photon normalization constant S. Close to 1 for the structures this
        package targets; it only enters the power flows.
    g:
        Emitter coupling (eV).
    n_b:
        Background refractive index.
    """

    omega_c: float
    kappa: float
    beta_rad: float = 1.0
    s_factor: float = 1.0
    g: float = 0.0
    n_b: float = 1.0

    def __post_init__(self):
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")
        if not 0.0 <= self.beta_rad <= 1.0:
            raise ValueError("beta_rad must lie in [0, 1]")
        if self.s_factor <= 0:
            raise ValueError("s_factor must be positive")
        if self.q_factor <= 0.5:
            raise ValueError(
                "omega_c/kappa <= 0.5: resonance approximation does not apply"
            )

    @property
    def omega_complex(self) -> complex:
        return self.omega_c - 0.5j * self.kappa

    @property
    def q_factor(self) -> float:
        return self.omega_c / self.kappa

    @property
    def beta_nrad(self) -> float:
        return 1.0 - self.beta_rad

    @property
    def kappa_rad(self) -> float:
        return self.beta_rad * self.kappa

    @property
    def kappa_nrad(self) -> float:
        return self.kappa - self.kappa_rad


@dataclass(frozen=True)
class Emitter:
    """Two-level emitter: frequency (eV), dipole (Debye), background decay
    and pure dephasing rates (eV)."""

    omega_a: float
    dipole: float
    gamma: float = 0.0
    gamma_prime: float = 0.0

    def __post_init__(self):
        if self.dipole < 0:
            raise ValueError("dipole magnitude must be non-negative")
        if self.gamma < 0 or self.gamma_prime < 0:
            raise ValueError("decay rates must be non-negative")


@dataclass(frozen=True)
class FieldSamples:
    """Pre-integrated field samples for the S-factor quadratures.

    ``volume`` has rows (weight, eps_imag, f_abs_sq): a volume element inside
    the absorber (nm^3), Im eps at the mode frequency, and |f|^2 of the
    normalized mode there (1/nm^3), so each product is dimensionless.

    ``surface`` has rows (weight, F_abs_sq): a far-field area element (nm^2)
    and |F|^2 of the regularized mode there (1/nm^3), so each product carries
    1/nm and is made dimensionless by n_b c / kappa.
    """

    volume: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))
    surface: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))

    def __post_init__(self):
        vol = np.atleast_2d(np.asarray(self.volume, dtype=float))
        surf = np.atleast_2d(np.asarray(self.surface, dtype=float))
        if vol.size and vol.shape[1] != 3:
            raise ValueError("volume samples need columns (weight, eps_imag, f_abs_sq)")
        if surf.size and surf.shape[1] != 2:
            raise ValueError("surface samples need columns (weight, F_abs_sq)")
        if vol.size and (vol[:, 0] <= 0).any():
            raise ValueError("volume weights must be positive")
        if surf.size and (surf[:, 0] <= 0).any():
            raise ValueError("surface weights must be positive")
        if vol.size and (vol[:, 1:] < 0).any():
            raise ValueError("eps_imag and |f|^2 must be non-negative")
        if surf.size and (surf[:, 1] < 0).any():
            raise ValueError("|F|^2 must be non-negative")
        object.__setattr__(self, "volume", vol if vol.size else np.zeros((0, 3)))
        object.__setattr__(self, "surface", surf if surf.size else np.zeros((0, 2)))

    @classmethod
    def from_csv(cls, volume_path=None, surface_path=None) -> "FieldSamples":
        """Load samples from CSV files with headers ``weight,eps_imag,f_abs_sq``
        (volume) and ``weight,F_abs_sq`` (surface)."""
        volume = _read_csv(volume_path, ["weight", "eps_imag", "f_abs_sq"]) \
            if volume_path else np.zeros((0, 3))
        surface = _read_csv(surface_path, ["weight", "F_abs_sq"]) \
            if surface_path else np.zeros((0, 2))
        return cls(volume=volume, surface=surface)


def _read_csv(path, expected_columns):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header] != expected_columns:
            raise ValueError(
                f"{path}: expected header {','.join(expected_columns)}, "
                f"got {','.join(header)}"
            )
        rows = [[float(x) for x in row] for row in reader if row]
    return np.asarray(rows, dtype=float).reshape(-1, len(expected_columns))


class SFactors(NamedTuple):
    s_nrad: float
    s_rad: float
    s: float
    beta_rad: float
    beta_nrad: float


def drude_permittivity(model: DrudeModel, omega):
    """Complex Drude permittivity 1 - omega_p^2 / (omega (omega + i gamma_p)).

    ``omega`` is in eV and must be positive; arrays are accepted.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValueError("omega must be positive")
    eps = 1.0 - model.omega_p**2 / (omega * (omega + 1j * model.gamma_p))
    return eps if eps.ndim else complex(eps)


def spectral_function(mode: QnmMode, omega):
    """Single-mode spectral amplitude A(omega) = omega / (2 (omega_c~ - omega)).

    On resonance this equals i Q. The denominator never vanishes for a lossy
    mode, so the function is defined for all omega >= 0.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ValueError("omega must be non-negative")
    amp = omega / (2.0 * (mode.omega_complex - omega))
    return amp if amp.ndim else complex(amp)


def purcell_spectrum(mode: QnmMode, omega_grid, peak_value: float = 1470.0,
                     f_sq: complex = 1.0 + 0.0j) -> np.ndarray:
    """Generalized Purcell factor over a frequency grid, anchored on resonance.

    The spectrum is proportional to Im[A(omega) f_sq] / omega^3 and is scaled
    so that its on-resonance value equals ``peak_value``. The unnormalized
    mode field at the emitter is absorbed into the anchoring, which makes the
    result invariant under rescaling f_sq by any positive factor.
    """
    omega = np.asarray(omega_grid, dtype=float)
    if np.any(omega <= 0):
        raise ValueError("omega grid must be positive")
    shape = np.imag(spectral_function(mode, omega) * f_sq) / omega**3
    ref = np.imag(spectral_function(mode, mode.omega_c) * f_sq) / mode.omega_c**3
    if ref == 0:
        raise ValueError("on-resonance response vanishes for this f_sq")
    return peak_value * shape / ref


def effective_mode_volume(eps_at_emitter: complex, f_sq_at_emitter: complex) -> float:
    """Generalized effective mode volume 1 / Re[eps(r0) f^2(r0)]."""
    denom = np.real(eps_at_emitter * f_sq_at_emitter)
    if denom == 0:
        raise ValueError("Re[eps f^2] vanishes; mode volume is singular")
    return 1.0 / denom


def free_space_decay(emitter: Emitter, n_b: float) -> float:
    """Background spontaneous-emission rate in eV.

    gamma = d^2 omega_a^3 n_b / (3 pi eps0 hbar c^3), with the dipole in Debye
    and omega_a in eV.
    """
    d_si = emitter.dipole * DEBYE_CM
    w_si = emitter.omega_a * sc.e / sc.hbar
    gamma_si = d_si**2 * w_si**3 * n_b / (3 * np.pi * sc.epsilon_0 * sc.hbar * sc.c**3)
    return gamma_si * sc.hbar / sc.e


def coupling_from_purcell(peak_purcell: float, gamma: float, kappa: float) -> float:
    """Emitter coupling g (eV) that reproduces a peak Purcell factor.

    Inverts the bad-cavity relation F_P gamma = 4 g^2 / kappa. Useful when
    the mode field at the emitter is not available but the on-resonance
    enhancement is.
    """
    if peak_purcell < 0 or gamma < 0:
        raise ValueError("peak_purcell and gamma must be non-negative")
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    return float(np.sqrt(peak_purcell * gamma * kappa / 4.0))


def s_factors(samples: FieldSamples, mode: QnmMode) -> SFactors:
    """Photon-normalization quadratures and beta factors.

    Uses the resonance-approximated forms

        S_nrad = Q * sum w eps_I |f|^2
        S_rad  = (n_b c / kappa) * sum w |F|^2

    with c in nm/ps and kappa converted to 1/ps, so both terms are
    dimensionless for samples in the units documented on FieldSamples. The
    full frequency integral behind these expressions is not implemented.
    """
    s_nrad = 0.0
    if samples.volume.size:
        vol = samples.volume
        s_nrad = mode.q_factor * float(np.sum(vol[:, 0] * vol[:, 1] * vol[:, 2]))
    s_rad = 0.0
    if samples.surface.size:
        surf = samples.surface
        s_rad = mode.n_b * C_NM_PS / rate_from_ev(mode.kappa) \
            * float(np.sum(surf[:, 0] * surf[:, 1]))
    s_total = s_nrad + s_rad
    if s_total == 0:
        raise ValueError("both quadratures vanish; mode normalization degenerate")
    return SFactors(
        s_nrad=s_nrad,
        s_rad=s_rad,
        s=s_total,
        beta_rad=s_rad / s_total,
        beta_nrad=s_nrad / s_total,
    )
