"""Ladder and TLS operators on the truncated joint space."""

import numpy as np
import pytest

from qnmsps import (
    HilbertSpace,
    annihilation,
    basis_ket,
    creation,
    ground_state,
    identity,
    number_operator,
    sigma_minus,
    sigma_plus,
    tensor,
)

SPACE = HilbertSpace(n_fock=5)


class TestAnnihilation:
    def test_single_photon_element(self):
        a = annihilation(SPACE)
        bra = basis_ket(SPACE, 0, 0)
        ket = basis_ket(SPACE, 0, 1)
        assert bra.conj() @ a @ ket == pytest.approx(1.0)

    def test_ladder_element_sqrt_n(self):
        a = annihilation(SPACE)
        bra = basis_ket(SPACE, 0, 3)
        ket = basis_ket(SPACE, 0, 4)
        assert bra.conj() @ a @ ket == pytest.approx(2.0)

    def test_commutator_with_truncation_corner(self):
        a = annihilation(SPACE)
        comm = a @ a.conj().T - a.conj().T @ a
        expected = np.eye(SPACE.dim, dtype=complex)
        for tls in (0, 1):
            idx = SPACE.index(tls, SPACE.n_fock)
            expected[idx, idx] = -SPACE.n_fock
        assert np.allclose(comm, expected, atol=1e-14)

    def test_number_spectrum(self):
        n = number_operator(SPACE)
        eigs = np.sort(np.linalg.eigvalsh(n))
        expected = np.sort(np.tile(np.arange(SPACE.n_fock + 1), 2))
        assert np.allclose(eigs, expected, atol=1e-12)


class TestSigmaMinus:
    def test_pauli_completeness(self):
        sm = sigma_minus(SPACE)
        sp = sigma_plus(SPACE)
        assert np.allclose(sm @ sp + sp @ sm, identity(SPACE), atol=1e-14)

    def test_nilpotent(self):
        sm = sigma_minus(SPACE)
        assert np.allclose(sm @ sm, 0.0, atol=1e-16)
        assert np.allclose(sigma_plus(SPACE) @ sigma_plus(SPACE), 0.0, atol=1e-16)

    def test_joint_space_element(self):
        sm = sigma_minus(SPACE)
        bra = basis_ket(SPACE, 0, 3)
        ket = basis_ket(SPACE, 1, 3)
        assert bra.conj() @ sm @ ket == pytest.approx(1.0)

    def test_commutes_with_photon_operator(self):
        a = annihilation(SPACE)
        sm = sigma_minus(SPACE)
        assert np.allclose(a @ sm - sm @ a, 0.0, atol=1e-15)


class TestTensor:
    def test_identity_product(self):
        assert np.allclose(tensor(np.eye(2), np.eye(3)), np.eye(6))

    def test_trace_multiplicativity(self):
        rng = np.random.default_rng(13)
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        assert np.trace(tensor(a, b)) == pytest.approx(np.trace(a) * np.trace(b))

    def test_mixed_product_rule(self):
        rng = np.random.default_rng(17)
        a, c = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(2))
        b, d = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(2))
        lhs = tensor(a, b) @ tensor(c, d)
        rhs = tensor(a @ c, b @ d)
        assert np.allclose(lhs, rhs, atol=1e-12)

    def test_rejects_nonsquare(self):
        with pytest.raises(ValueError):
            tensor(np.ones((2, 3)), np.eye(2))


class TestSpace:
    def test_dimension(self):
        assert SPACE.dim == 12
        assert HilbertSpace(1).dim == 4

    def test_rejects_trivial_truncation(self):
        with pytest.raises(ValueError):
            HilbertSpace(0)

    def test_index_ordering(self):
        assert SPACE.index(0, 0) == 0
        assert SPACE.index(0, 5) == 5
        assert SPACE.index(1, 0) == 6

    def test_ground_state(self):
        rho = ground_state(SPACE)
        assert np.trace(rho) == pytest.approx(1.0)
        assert rho[0, 0] == 1.0
        assert np.count_nonzero(rho) == 1

    def test_creation_is_adjoint(self):
        assert np.allclose(creation(SPACE), annihilation(SPACE).conj().T)

    def test_finite_entries(self):
        for op in (annihilation(SPACE), sigma_minus(SPACE), number_operator(SPACE)):
            assert np.isfinite(op).all()
