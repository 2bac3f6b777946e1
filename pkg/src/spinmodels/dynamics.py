"""Heisenberg-picture time evolution and locality (light-cone) scans.

Evolution is by exact eigendecomposition of the Hamiltonian — no
Trotterization anywhere: in the eigenbasis, conjugation by exp(itH) is an
entrywise phase exp(it(w_j - w_k)), and imaginary time replaces the phase by
exp(-beta(w_j - w_k)).  Operator evolution is therefore a dense-mode
operation; sparse Hamiltonians still get vector propagation through a
Krylov-based matrix-exponential action.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import (
    DegenerateInputError,
    DomainError,
    RangeLimitError,
    ResourceCapError,
    SolverError,
)
from .interactions import Interaction, assemble_hamiltonian
from .lattice import Volume, embed
from .spin_algebra import (
    DENSE_CUTOFF,
    Operator,
    as_matrix,
    commutator,
    is_hermitian,
    operator_norm,
)

#: Largest exponent fed to exp(); beyond this the call is refused.
RANGE_LIMIT = 700.0


class Propagator:
    """Cached eigendecomposition of a Hamiltonian, reused across time points.

    All evolutions for one Hamiltonian share a single Hermitian
    diagonalization; each time point then costs two dense multiplications.
    """

    def __init__(self, h, *, range_limit: float = RANGE_LIMIT):
        if not is_hermitian(h):
            raise DomainError("propagator requires a Hermitian Hamiltonian")
        m = as_matrix(h)
        dim = m.shape[0]
        if dim > DENSE_CUTOFF:
            raise ResourceCapError(
                f"eigendecomposition propagator refused at dim {dim} > {DENSE_CUTOFF}"
            )
        if sp.issparse(m):
            m = m.toarray()
        self.range_limit = float(range_limit)
        self.eigenvalues, self.eigenvectors = np.linalg.eigh(m)

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def _to_eigenbasis(self, a) -> np.ndarray:
        m = as_matrix(a)
        if m.shape[0] != self.dim:
            raise DomainError(
                f"operator dim {m.shape[0]} does not match Hamiltonian dim {self.dim}"
            )
        if sp.issparse(m):
            m = m.toarray()
        v = self.eigenvectors
        return v.conj().T @ m @ v

    def evolve(self, a, t: float) -> Operator:
        """alpha_t(A) = exp(itH) A exp(-itH).  t = 0 returns A unchanged."""
        t = float(t)
        if t == 0.0:
            return a if isinstance(a, Operator) else Operator(a)
        w = self.eigenvalues
        at = self._to_eigenbasis(a)
        phases = np.exp(1j * t * (w[:, None] - w[None, :]))
        v = self.eigenvectors
        return Operator(v @ (at * phases) @ v.conj().T)

    def evolve_imaginary(self, a, beta: float) -> Operator:
        """exp(-beta H) A exp(beta H).  Refused when beta * spread > limit."""
        beta = float(beta)
        if beta == 0.0:
            return a if isinstance(a, Operator) else Operator(a)
        w = self.eigenvalues
        spread = float(w[-1] - w[0])
        if abs(beta) * spread > self.range_limit:
            raise RangeLimitError(
                f"imaginary-time exponent {abs(beta) * spread:.3g} exceeds "
                f"range limit {self.range_limit}"
            )
        at = self._to_eigenbasis(a)
        factors = np.exp(-beta * (w[:, None] - w[None, :]))
        v = self.eigenvectors
        return Operator(v @ (at * factors) @ v.conj().T)

    def evolve_vector(self, psi: np.ndarray, t: float) -> np.ndarray:
        """Schroedinger evolution exp(-itH) psi."""
        psi = np.asarray(psi, dtype=np.complex128)
        if psi.shape != (self.dim,):
            raise DomainError(f"state shape {psi.shape} does not match dim {self.dim}")
        v = self.eigenvectors
        return v @ (np.exp(-1j * float(t) * self.eigenvalues) * (v.conj().T @ psi))


def evolve(h, a, t: float) -> Operator:
    """One-shot Heisenberg evolution; builds a Propagator and discards it."""
    return Propagator(h).evolve(a, t)


def evolve_imaginary(h, a, beta: float, *, range_limit: float = RANGE_LIMIT) -> Operator:
    """One-shot imaginary-time conjugation exp(-beta H) A exp(beta H)."""
    return Propagator(h, range_limit=range_limit).evolve_imaginary(a, beta)


def evolve_state(h, psi: np.ndarray, t: float) -> np.ndarray:
    """exp(-itH) psi; uses the sparse Krylov exponential above the dense cutoff."""
    m = as_matrix(h)
    if m.shape[0] <= DENSE_CUTOFF:
        return Propagator(h).evolve_vector(psi, t)
    if not is_hermitian(h):
        raise DomainError("evolution requires a Hermitian Hamiltonian")
    from scipy.sparse.linalg import expm_multiply

    psi = np.asarray(psi, dtype=np.complex128)
    if psi.shape != (m.shape[0],):
        raise DomainError(f"state shape {psi.shape} does not match dim {m.shape[0]}")
    return expm_multiply(-1j * float(t) * sp.csr_array(m), psi)


# ---------------------------------------------------------------------------
# Light-cone scans
# ---------------------------------------------------------------------------


@dataclass
class LRScan:
    """Commutator norms ||[alpha_t(A_0), B_x]|| on a (time, distance) grid."""

    times: np.ndarray
    distances: np.ndarray
    norms: np.ndarray  # shape (len(times), len(distances))
    a_norm: float
    b_norm: float
    metadata: dict = field(default_factory=dict)

    @property
    def bound(self) -> float:
        """The a-priori bound 2 ||A|| ||B|| on every entry."""
        return 2.0 * self.a_norm * self.b_norm

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.distances = np.asarray(self.distances, dtype=int)
        self.norms = np.asarray(self.norms, dtype=float)
        if self.norms.shape != (self.times.size, self.distances.size):
            raise DomainError(
                f"norms shape {self.norms.shape} does not match grids "
                f"({self.times.size}, {self.distances.size})"
            )
        if np.any(self.norms < 0):
            raise SolverError("negative commutator norm in scan")
        if float(np.max(self.norms, initial=0.0)) > self.bound + 1e-10:
            raise SolverError(
                "scan entry exceeds the a-priori commutator bound 2||A||||B||"
            )


@dataclass
class LRFit:
    """Exponential light-cone envelope bound * exp(-c (x - v t)) over a scan."""

    velocity: float
    decay_rate: float
    bound: float
    max_violation: float
    points_used: int
    metadata: dict = field(default_factory=dict)


def lr_scan(
    interaction: Interaction,
    volume: Volume,
    a_local,
    b_local,
    times,
    distances,
    *,
    dense_cutoff: int = DENSE_CUTOFF,
) -> LRScan:
    """Evolve A at the chain origin and tabulate ||[alpha_t(A), B_x]||.

    Requires a 1-d volume small enough for dense propagation.  The t = 0 row
    is exactly zero off-site: evolution returns A unchanged at t = 0 and
    embeddings on disjoint supports commute exactly.
    """
    if volume.dimension != 1:
        raise DomainError(f"light-cone scans run on chains; volume dims {volume.dims}")
    if volume.hilbert_dim > dense_cutoff:
        raise ResourceCapError(
            f"scan needs dense propagation; dim {volume.hilbert_dim} > {dense_cutoff}"
        )
    times = np.asarray(list(times), dtype=float)
    distances = np.asarray(list(distances), dtype=int)
    if times.size == 0 or distances.size == 0:
        raise DomainError("time and distance grids must be nonempty")
    length = volume.num_sites
    if np.any(distances < 0) or np.any(distances >= length):
        raise DomainError(f"distances must lie in 0..{length - 1}")

    h = assemble_hamiltonian(interaction, volume, dense_cutoff=dense_cutoff)
    a0 = embed(a_local, [(0,)], volume)
    b_ops = [embed(b_local, [(int(x),)], volume) for x in distances]
    a_norm = operator_norm(a0)
    b_norm = operator_norm(b_ops[0]) if b_ops else 0.0

    prop = Propagator(h)
    norms = np.zeros((times.size, distances.size))
    for i, t in enumerate(times):
        at = prop.evolve(a0, float(t))
        for j, b in enumerate(b_ops):
            norms[i, j] = operator_norm(commutator(at, b))
    return LRScan(
        times=times,
        distances=distances,
        norms=norms,
        a_norm=a_norm,
        b_norm=b_norm,
        metadata={
            "interaction": interaction.name,
            "length": int(length),
            "boundary": volume.boundary,
            "origin": 0,
        },
    )


def lr_fit(scan: LRScan, *, floor: float = 1e-12) -> LRFit:
    """Fit bound * exp(-c (x - v t)) over scan points above ``floor``.

    Least squares on log(norm / bound) against (distance, time) determines c
    and v; v is then raised (minimally) until the envelope dominates every
    scanned point, so ``max_violation`` is zero up to rounding.  This
    extraction procedure is a construction of this tool and carries no
    literature meaning beyond the scanned grid.
    """
    c0 = scan.bound
    if c0 <= 0:
        raise DegenerateInputError("scan bound is zero; nothing to fit")
    ts = np.repeat(scan.times, scan.distances.size)
    xs = np.tile(scan.distances.astype(float), scan.times.size)
    ns = scan.norms.ravel()
    mask = ns > floor
    if int(np.sum(mask)) < 3:
        raise DegenerateInputError(
            f"only {int(np.sum(mask))} scan points above floor {floor}; fit needs >= 3"
        )
    y = np.log(ns[mask] / c0)
    design = np.column_stack([xs[mask], ts[mask]])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    c = -float(coef[0])
    if c <= 0:
        raise DegenerateInputError("scan shows no spatial decay; cannot fit a cone")
    v = float(coef[1]) / c
    # minimal velocity raise so that norm <= bound * exp(-c (x - v t)) everywhere
    pos = (ns > 0) & (ts > 0)
    if np.any(pos):
        v_required = np.max((np.log(ns[pos] / c0) / c + xs[pos]) / ts[pos])
        v = max(v, float(v_required))
    v = max(v, 0.0)
    envelope = c0 * np.exp(-c * (xs - v * ts))
    max_violation = float(np.max(ns - envelope, initial=0.0))
    max_violation = max(max_violation, 0.0)
    return LRFit(
        velocity=v,
        decay_rate=c,
        bound=c0,
        max_violation=max_violation,
        points_used=int(np.sum(mask)),
        metadata={
            "floor": floor,
            "method": (
                "log-linear least squares in (distance, time); velocity raised "
                "minimally so the envelope dominates every scanned point. "
                "This extraction is a construction of this tool."
            ),
        },
    )
