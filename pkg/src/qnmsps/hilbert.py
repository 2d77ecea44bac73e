"""Operators on the truncated joint space TLS (x) Fock(N), as dense matrices.

Basis ordering is fixed throughout the package: index = tls * (N + 1) + n,
with tls = 0 the ground state and n the photon number. Dimensions stay tiny
(<= a few tens), so everything is dense complex128.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class HilbertSpace:
    """Truncated joint space with Fock states |0> .. |n_fock>."""

    n_fock: int

    def __post_init__(self):
        if self.n_fock < 1:
            raise ValueError("n_fock must be at least 1")

    @property
    def dim(self) -> int:
        return 2 * (self.n_fock + 1)

    def index(self, tls: int, n: int) -> int:
        """Basis index of |tls, n> with tls in {0: ground, 1: excited}."""
        if tls not in (0, 1):
            raise ValueError("tls must be 0 or 1")
        if not 0 <= n <= self.n_fock:
            raise ValueError("photon number outside truncation")
        return tls * (self.n_fock + 1) + n


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, TLS factor first."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or b.ndim != 2 or a.shape[0] != a.shape[1] or b.shape[0] != b.shape[1]:
        raise ValueError("tensor expects square matrices")
    return np.kron(a, b)


def identity(space: HilbertSpace) -> np.ndarray:
    return np.eye(space.dim, dtype=complex)


def annihilation(space: HilbertSpace) -> np.ndarray:
    """Photon annihilation a, identity on the TLS factor."""
    n = space.n_fock + 1
    a_fock = np.diag(np.sqrt(np.arange(1, n, dtype=float)), k=1).astype(complex)
    return tensor(np.eye(2), a_fock)


def creation(space: HilbertSpace) -> np.ndarray:
    return annihilation(space).conj().T


def number_operator(space: HilbertSpace) -> np.ndarray:
    a = annihilation(space)
    return a.conj().T @ a


def sigma_minus(space: HilbertSpace) -> np.ndarray:
    """TLS lowering operator |g><e|, identity on the Fock factor."""
    sm = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    return tensor(sm, np.eye(space.n_fock + 1))


def sigma_plus(space: HilbertSpace) -> np.ndarray:
    return sigma_minus(space).conj().T


def excited_projector(space: HilbertSpace) -> np.ndarray:
    sm = sigma_minus(space)
    return sm.conj().T @ sm


def basis_ket(space: HilbertSpace, tls: int, n: int) -> np.ndarray:
    ket = np.zeros(space.dim, dtype=complex)
    ket[space.index(tls, n)] = 1.0
    return ket


def ground_state(space: HilbertSpace) -> np.ndarray:
    """Density matrix |g, 0><g, 0|."""
    rho = np.zeros((space.dim, space.dim), dtype=complex)
    rho[0, 0] = 1.0
    return rho
