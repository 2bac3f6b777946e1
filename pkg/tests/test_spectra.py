"""Spectral analysis: full spectra, ground spaces, gaps, correlations."""

import numpy as np
import pytest
import scipy.sparse as sp

from spinmodels import (
    DensityMatrix,
    DomainError,
    SolverError,
    StateVector,
    assemble_hamiltonian,
    basis_index,
    basis_vector,
    chain_volume,
    full_spectrum,
    ground_space,
    heisenberg,
    ising,
    spectral_gap,
    structure_factor,
    two_point,
)


def test_full_spectrum_matches_numpy():
    rng = np.random.default_rng(15)
    for _ in range(5):
        m = rng.standard_normal((20, 20)) + 1j * rng.standard_normal((20, 20))
        m = m + m.conj().T
        sol = full_spectrum(m)
        w = np.linalg.eigvalsh(m)
        assert np.allclose(sol.eigenvalues, w, atol=1e-12)
        # columns diagonalize m
        d = sol.eigenvectors.conj().T @ m @ sol.eigenvectors
        assert np.allclose(d, np.diag(sol.eigenvalues), atol=1e-11)
        assert np.max(sol.residuals) < 1e-12 * max(1.0, np.max(np.abs(w)))


def test_full_spectrum_rejects_non_hermitian():
    with pytest.raises(DomainError):
        full_spectrum(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_ground_space_ferromagnet_multiplet():
    # ring ferromagnet: ground multiplet has total spin L/2, dimension L+1
    for length in (4, 6):
        vol = chain_volume(length, boundary="periodic")
        h = assemble_hamiltonian(heisenberg(j=1.0), vol)
        gs = ground_space(h)
        assert gs.degeneracy == length + 1
        assert gs.basis.shape == (vol.hilbert_dim, length + 1)
        # orthonormal basis of eigenvectors at the bottom of the spectrum
        overlap = gs.basis.conj().T @ gs.basis
        assert np.allclose(overlap, np.eye(length + 1), atol=1e-10)


def test_ground_space_krylov_matches_dense():
    vol = chain_volume(8, boundary="periodic")
    h = assemble_hamiltonian(heisenberg(j=1.0), vol)
    dense = ground_space(h, method="dense")
    sparse = ground_space(h.tocsr(), method="krylov")
    assert dense.degeneracy == sparse.degeneracy == 9
    assert abs(dense.energy - sparse.energy) < 1e-10


def test_spectral_gap_afm_chain():
    vol = chain_volume(8, boundary="periodic")
    h = assemble_hamiltonian(heisenberg(j=-1.0), vol)
    w = np.linalg.eigvalsh(h.toarray())
    want = w[1] - w[0]  # unique singlet ground state
    assert abs(spectral_gap(h, method="dense") - want) < 1e-10
    assert abs(spectral_gap(h.tocsr(), method="krylov") - want) < 1e-8


def test_spectral_gap_with_synthetic_window():
    # two states inside the degeneracy window count as one level
    m = np.diag([0.0, 5e-9, 1.0, 2.0])
    gs = ground_space(m, degeneracy_tol=1e-8)
    assert gs.degeneracy == 2
    assert abs(spectral_gap(m, degeneracy_tol=1e-8) - 1.0) < 1e-12
    # flat spectrum has no level above the window
    flat = np.zeros((4, 4))
    assert spectral_gap(flat) == 0.0


def test_sparse_degeneracy_cap():
    # every eigenvalue of the identity is in the ground window; the sparse
    # certification loop must refuse instead of looping forever
    m = sp.eye_array(200, format="csr")
    with pytest.raises(SolverError):
        ground_space(m, method="krylov")


def test_ising_ground_degeneracy():
    vol = chain_volume(3, boundary="open")
    h = assemble_hamiltonian(ising(j=1.0, h=0.0), vol)
    gs = ground_space(h)
    assert gs.degeneracy == 2  # the two aligned product states
    assert abs(gs.energy - (-0.5)) < 1e-12
    assert abs(spectral_gap(h) - 0.5) < 1e-12  # one domain wall costs 1/2


def test_two_point_oracles():
    vol = chain_volume(4, boundary="periodic")
    neel = StateVector(basis_vector(vol, (0, 1, 0, 1)))
    # same site: Casimir S(S+1) = 3/4
    assert abs(two_point(neel, (0,), (0,), vol, kind="sdots") - 0.75) < 1e-14
    # product state S3 correlation factorizes
    assert abs(two_point(neel, (0,), (1,), vol, kind="s3s3") - (-0.25)) < 1e-14
    assert abs(two_point(neel, (0,), (2,), vol, kind="s3s3") - 0.25) < 1e-14
    # two-site singlet: <S0 . S1> = -3/4
    vol2 = chain_volume(2)
    sing = np.zeros(4, dtype=complex)
    sing[basis_index(vol2, (0, 1))] = 1 / np.sqrt(2)
    sing[basis_index(vol2, (1, 0))] = -1 / np.sqrt(2)
    got = two_point(StateVector(sing), (0,), (1,), vol2, kind="sdots")
    assert abs(got - (-0.75)) < 1e-14


def test_two_point_accepts_density_matrix():
    vol = chain_volume(2)
    rho = DensityMatrix.maximally_mixed(4)
    # tracial state: <S3_0 S3_1> = 0, same-site Casimir unchanged
    assert abs(two_point(rho, (0,), (1,), vol, kind="s3s3")) < 1e-14
    assert abs(two_point(rho, (0,), (0,), vol, kind="sdots") - 0.75) < 1e-14


def test_structure_factor_reference_states():
    vol = chain_volume(4, boundary="periodic")
    mixed = DensityMatrix.maximally_mixed(vol.hilbert_dim)
    # cross terms vanish in the tracial state: S(k) = <(S3)^2>/N = 1/16
    assert abs(structure_factor(mixed, vol, np.pi) - 1 / 16) < 1e-14
    neel = StateVector(basis_vector(vol, (0, 1, 0, 1)))
    assert abs(structure_factor(neel, vol, np.pi) - 0.25) < 1e-14
    up = StateVector(basis_vector(vol, (0, 0, 0, 0)))
    assert abs(structure_factor(up, vol, np.pi)) < 1e-14
    assert abs(structure_factor(up, vol, 0.0) - 0.25) < 1e-14


def test_structure_factor_detects_afm_order():
    # the AFM ground state concentrates weight at momentum pi
    vol = chain_volume(8, boundary="periodic")
    h = assemble_hamiltonian(heisenberg(j=-1.0), vol)
    gs = ground_space(h)
    state = StateVector(gs.basis[:, 0])
    s_pi = structure_factor(state, vol, np.pi)
    s_0 = structure_factor(state, vol, 0.0)
    assert s_pi > 5 * abs(s_0)
    assert s_pi > 0.05
