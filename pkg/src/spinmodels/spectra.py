"""Spectra, ground spaces, gaps, and equal-time correlations.

Two independent diagonalization routes are exposed: dense LAPACK ``eigh``
(exact, for Hilbert dimensions up to the dense cutoff) and the in-house block
Lanczos from :mod:`spinmodels.krylov` for sparse operators.  ``ground_space``
and ``spectral_gap`` pick a route automatically from the dimension but accept
an explicit ``method`` so the two can be cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DomainError, ResourceCapError, SolverError
from .krylov import lowest_eigenpairs
from .lattice import Volume, embed
from .spin_algebra import (
    DENSE_CUTOFF,
    SOLVER_TOL,
    Operator,
    as_matrix,
    is_hermitian,
    spin_matrices,
)

#: Relative width of the window that groups eigenvalues into one multiplet.
DEGENERACY_TOL = 1e-8

#: Largest certifiable ground-space degeneracy on the sparse route.
MAX_SPARSE_DEGENERACY = 64


@dataclass
class EigenSolution:
    """Full eigensystem with per-pair residual norms ||H v - w v||."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray


@dataclass
class GroundSpace:
    """Lowest eigenvalue, its multiplicity, and an orthonormal basis for it."""

    energy: float
    degeneracy: int
    basis: np.ndarray


def _require_hermitian(h):
    if not is_hermitian(h):
        raise DomainError("operator is not Hermitian")


def full_spectrum(h, *, compute_residuals: bool = True) -> EigenSolution:
    """All eigenvalues (ascending) and eigenvectors, dense route only."""
    _require_hermitian(h)
    m = as_matrix(h)
    dim = m.shape[0]
    if dim > DENSE_CUTOFF:
        raise ResourceCapError(
            f"full spectrum needs the dense route; dim {dim} > {DENSE_CUTOFF}"
        )
    if sp.issparse(m):
        m = m.toarray()
    w, v = np.linalg.eigh(m)
    if compute_residuals:
        resid = np.linalg.norm(m @ v - v * w, axis=0)
    else:
        resid = np.zeros(dim)
    return EigenSolution(eigenvalues=w, eigenvectors=v, residuals=resid)


def _sparse_spectral_scale(m, seed: int = 0x5CA1E) -> float:
    """Deterministic largest-|eigenvalue| estimate for Hermitian sparse m."""
    dim = m.shape[0]
    if dim <= 16:
        return float(np.max(np.abs(np.linalg.eigvalsh(m.toarray()))))
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(dim)
    vals = spla.eigsh(m, k=1, which="LM", v0=v0, return_eigenvectors=False)
    return float(np.max(np.abs(vals)))


def _window(e0: float, scale: float, degeneracy_tol: float) -> float:
    return e0 + degeneracy_tol * max(1.0, scale)


def ground_space(
    h,
    degeneracy_tol: float = DEGENERACY_TOL,
    *,
    method: str | None = None,
    tol: float = SOLVER_TOL,
    seed: int = 7,
) -> GroundSpace:
    """Lowest eigenvalue with multiplicity, grouped by a relative window.

    Eigenvalues within ``degeneracy_tol * max(1, ||H||)`` of the minimum
    count as one multiplet.  ``method`` is "dense", "krylov", or None
    (dense when the dimension allows, block Lanczos otherwise).
    """
    _require_hermitian(h)
    m = as_matrix(h)
    dim = m.shape[0]
    if method is None:
        method = "dense" if dim <= DENSE_CUTOFF else "krylov"
    if method not in ("dense", "krylov"):
        raise DomainError(f"method must be 'dense' or 'krylov', got {method!r}")

    if method == "dense":
        if dim > DENSE_CUTOFF:
            raise ResourceCapError(
                f"dense ground space refused at dim {dim} > {DENSE_CUTOFF}"
            )
        sol = full_spectrum(h, compute_residuals=False)
        w, v = sol.eigenvalues, sol.eigenvectors
        win = _window(w[0], float(np.max(np.abs(w))), degeneracy_tol)
        deg = int(np.searchsorted(w, win, side="right"))
        deg = max(deg, 1)
        return GroundSpace(energy=float(w[0]), degeneracy=deg, basis=v[:, :deg])

    msp = sp.csr_array(m) if not sp.issparse(m) else m
    scale = _sparse_spectral_scale(msp)
    k = min(dim, 6)
    while True:
        # block as wide as k so a k-fold multiplet survives the Krylov slice
        res = lowest_eigenpairs(msp, k, block_size=k, tol=tol, seed=seed)
        w = res.eigenvalues
        win = _window(float(w[0]), scale, degeneracy_tol)
        deg = int(np.sum(w <= win))
        if deg < k or k == dim:
            return GroundSpace(
                energy=float(w[0]), degeneracy=deg, basis=res.eigenvectors[:, :deg]
            )
        if k >= MAX_SPARSE_DEGENERACY:
            raise SolverError(
                f"ground-space degeneracy exceeds {MAX_SPARSE_DEGENERACY}; "
                "use the dense route"
            )
        k = min(dim, max(k + 1, 2 * k))


def spectral_gap(
    h,
    degeneracy_tol: float = DEGENERACY_TOL,
    *,
    method: str | None = None,
    tol: float = SOLVER_TOL,
    seed: int = 7,
) -> float:
    """Energy difference between the ground multiplet and the next level.

    Returns 0.0 when no eigenvalue lies above the degeneracy window (the
    operator is a multiple of the identity to within the window).
    """
    _require_hermitian(h)
    m = as_matrix(h)
    dim = m.shape[0]
    if method is None:
        method = "dense" if dim <= DENSE_CUTOFF else "krylov"

    if method == "dense":
        sol = full_spectrum(h, compute_residuals=False)
        w = sol.eigenvalues
        win = _window(float(w[0]), float(np.max(np.abs(w))), degeneracy_tol)
        above = w[w > win]
        return float(above[0] - w[0]) if above.size else 0.0

    msp = sp.csr_array(m) if not sp.issparse(m) else m
    scale = _sparse_spectral_scale(msp)
    k = min(dim, 6)
    while True:
        res = lowest_eigenpairs(msp, k, block_size=k, tol=tol, seed=seed)
        w = res.eigenvalues
        win = _window(float(w[0]), scale, degeneracy_tol)
        above = w[w > win]
        if above.size:
            return float(above[0] - w[0])
        if k == dim:
            return 0.0
        if k >= MAX_SPARSE_DEGENERACY:
            raise SolverError(
                f"no gap found below multiplicity {MAX_SPARSE_DEGENERACY}; "
                "use the dense route"
            )
        k = min(dim, max(k + 1, 2 * k))


# ---------------------------------------------------------------------------
# Equal-time correlations
# ---------------------------------------------------------------------------

_TWO_POINT_KINDS = ("sdots", "s3s3")


def two_point(state, x, y, volume: Volume, kind: str = "sdots") -> float:
    """<S_x . S_y> ("sdots") or <S3_x S3_y> ("s3s3") in ``state``.

    ``state`` is a StateVector, DensityMatrix, or plain vector.  x == y is
    allowed (on-site moment).  The value is the real part; for Hermitian
    observables the imaginary part is zero to rounding.
    """
    from .states import expectation

    if kind not in _TWO_POINT_KINDS:
        raise DomainError(f"kind must be one of {_TWO_POINT_KINDS}, got {kind!r}")
    x = tuple(int(c) for c in np.atleast_1d(x).tolist())
    y = tuple(int(c) for c in np.atleast_1d(y).tolist())
    for s in (x, y):
        if s not in volume.rank:
            raise DomainError(f"site {s} is not in the volume")
    ops = spin_matrices(_spin_for_local_dim(volume.local_dim))
    if x == y:
        if kind == "sdots":
            local = ops.casimir()
        else:
            local = ops.s3 @ ops.s3
        op = embed(local, [x], volume)
    else:
        if kind == "sdots":
            local = (
                np.kron(ops.s1, ops.s1)
                + np.kron(ops.s2, ops.s2)
                + np.kron(ops.s3, ops.s3)
            )
        else:
            local = np.kron(ops.s3, ops.s3)
        op = embed(local, [x, y], volume)
    return float(expectation(state, op).real)


def _spin_for_local_dim(n: int):
    """Spin value whose multiplet has dimension n."""
    from .spin_algebra import Spin

    return Spin(int(n) - 1)


def structure_factor(state, volume: Volume, momentum) -> float:
    """S(k) = <M(k)^dagger M(k)> / |volume|^2 with M(k) = sum_x e^{-i k.x} S3_x.

    Real and nonnegative for any valid state; 1/4 at k = (pi,...) for the
    two-sublattice alternating spin-1/2 product state, S(S+1)/(3 |volume|)
    at every k for the maximally mixed state.
    """
    from .states import expectation

    momentum = np.atleast_1d(np.asarray(momentum, dtype=float))
    if momentum.shape != (volume.dimension,):
        raise DomainError(
            f"momentum needs {volume.dimension} components, got {momentum.shape}"
        )
    ops = spin_matrices(_spin_for_local_dim(volume.local_dim))
    total = None
    for site in volume.sites:
        phase = np.exp(-1j * float(np.dot(momentum, site)))
        part = embed(phase * ops.s3, [site], volume)
        total = part if total is None else total + part
    num = expectation(state, total.adjoint() @ total).real
    return float(num) / volume.num_sites**2
