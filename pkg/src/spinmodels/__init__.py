"""Exact diagonalization and verification for finite quantum spin systems.

Modules:
    spin_algebra  — spin-S matrices, Operator container, norms, commutators
    lattice       — finite volumes, embeddings, permutation unitaries
    interactions  — built-in models and Hamiltonian assembly
    krylov        — block Lanczos low-end eigensolver (sparse route)
    spectra       — spectra, ground spaces, gaps, correlations
    states        — state containers, Gibbs states, equilibrium criteria
    dynamics      — Heisenberg-picture evolution and light-cone scans
    symmetry      — symmetry generators and invariance residuals
    probes        — seeded random local observables
    cli           — JSON run-spec command line driver
"""

__version__ = "0.1.0"

from .errors import (
    DegenerateInputError,
    DimensionMismatchError,
    DomainError,
    RangeLimitError,
    ResourceCapError,
    SolverError,
    SpecFileError,
    SpinModelError,
)
from .spin_algebra import (
    DENSE_CUTOFF,
    SOLVER_TOL,
    STRUCTURE_TOL,
    Operator,
    Spin,
    SpinOperators,
    adjoint,
    anticommutator,
    commutator,
    is_hermitian,
    ladder_coefficient,
    operator_norm,
    pauli_matrices,
    spin_matrices,
)
from .lattice import (
    MAX_HILBERT_DIM,
    SitePermutation,
    Volume,
    basis_digits,
    basis_index,
    basis_vector,
    build_volume,
    chain_volume,
    embed,
    permutation_unitary,
)
from .interactions import (
    Interaction,
    aklt,
    assemble_hamiltonian,
    build_model_hamiltonian,
    empty,
    heisenberg,
    ising,
    lambda_norm,
    model_interaction,
    resolve_q,
    xxz_suq2_chain,
    xy_field,
)
from .krylov import KrylovResult, lowest_eigenpairs
from .spectra import (
    DEGENERACY_TOL,
    EigenSolution,
    GroundSpace,
    full_spectrum,
    ground_space,
    spectral_gap,
    structure_factor,
    two_point,
)
from .states import (
    DensityMatrix,
    GibbsState,
    StateVector,
    eeb_deficit,
    expectation,
    gibbs,
    kms_residual,
    stability_value,
)
from .dynamics import (
    RANGE_LIMIT,
    LRFit,
    LRScan,
    Propagator,
    evolve,
    evolve_imaginary,
    evolve_state,
    lr_fit,
    lr_scan,
)
from .symmetry import (
    GeneratorSet,
    default_probe_set,
    invariance_residual,
    state_invariance_residual,
    suq2_generators,
    total_spin,
)
from .probes import random_local_operator, random_probe_pairs
