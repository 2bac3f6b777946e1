import numpy as np
import pytest
import scipy.sparse as sp

from spinmodels import (
    DomainError,
    SolverError,
    assemble_hamiltonian,
    chain_volume,
    heisenberg,
    lowest_eigenpairs,
)


def _random_sparse_hermitian(n, density, seed):
    rng = np.random.default_rng(seed)
    m = sp.random_array((n, n), density=density, rng=rng, dtype=np.float64)
    m = m + 1j * sp.random_array((n, n), density=density, rng=rng, dtype=np.float64)
    m = (m + m.conj().T).tocsr()
    return m


def test_matches_dense_solver_on_random_matrices():
    for seed in (0, 1, 2, 3):
        m = _random_sparse_hermitian(200, 0.05, seed)
        want = np.linalg.eigvalsh(m.toarray())[:5]
        res = lowest_eigenpairs(m, 5, seed=seed)
        assert np.allclose(res.eigenvalues, want, atol=1e-9)
        # eigenvectors: orthonormal and residual-bounded
        v = res.eigenvectors
        assert np.allclose(v.conj().T @ v, np.eye(5), atol=1e-10)
        scale = max(1.0, np.max(np.abs(want)))
        for i in range(5):
            r = np.linalg.norm(m @ v[:, i] - res.eigenvalues[i] * v[:, i])
            assert r <= 1e-8 * scale


def test_known_diagonal_spectrum():
    diag = np.concatenate([np.zeros(3), np.arange(1.0, 60.0)])
    m = sp.diags_array(diag, format="csr")
    # triple ground state needs a block at least as wide as the multiplicity
    res = lowest_eigenpairs(m, 4, block_size=4)
    assert np.allclose(res.eigenvalues, [0.0, 0.0, 0.0, 1.0], atol=1e-10)


def test_degenerate_ferromagnet_ground_space():
    # L=8 ring ferromagnet: the ground multiplet has dimension L+1 = 9
    vol = chain_volume(8, boundary="periodic")
    h = assemble_hamiltonian(heisenberg(j=1.0), vol).tocsr()
    res = lowest_eigenpairs(h, 9, block_size=9)
    e0 = res.eigenvalues[0]
    assert np.allclose(res.eigenvalues, e0, atol=1e-9)
    dense_e0 = np.linalg.eigvalsh(h.toarray())[0]
    assert abs(e0 - dense_e0) < 1e-10


def test_afm_chain_agrees_with_dense():
    vol = chain_volume(8, boundary="periodic")
    h = assemble_hamiltonian(heisenberg(j=-1.0), vol).tocsr()
    res = lowest_eigenpairs(h, 3)
    want = np.linalg.eigvalsh(h.toarray())[:3]
    assert np.allclose(res.eigenvalues, want, atol=1e-10)


def test_iteration_budget_raises_solver_error():
    m = _random_sparse_hermitian(300, 0.05, 7)
    with pytest.raises(SolverError) as err:
        lowest_eigenpairs(m, 4, max_steps=1, block_size=1)
    assert "residual" in str(err.value)


def test_input_validation():
    m = sp.eye_array(8, format="csr")
    with pytest.raises(DomainError):
        lowest_eigenpairs(m, 0)
    with pytest.raises(DomainError):
        lowest_eigenpairs(m, 9)
    with pytest.raises(DomainError):
        lowest_eigenpairs(np.ones((3, 4)), 1)


def test_reports_iterations_and_residuals():
    m = _random_sparse_hermitian(150, 0.05, 42)
    res = lowest_eigenpairs(m, 2)
    assert res.iterations >= 1
    assert res.residuals.shape == (2,)
    assert np.all(res.residuals >= 0)
