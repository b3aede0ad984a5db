"""N-qubit Hilbert-space primitives: states, Pauli embeddings, projectors.

Basis convention (used everywhere in this package):
the computational basis is indexed by bitstrings, site 1 maps to the least
significant bit, and |up> is bit 0.  Hence basis index 0 is the fully
polarized state |up...up>, and for a single site sigma^z = diag(+1, -1).
Sites are 1-based throughout.

Everything is dense (2^N x 2^N complex matrices); the package targets
N <= 10 where exact dense algebra is cheap and, more importantly, exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ATOL_ALGEBRA = 1e-12   # algebraic identities (hermiticity, trace, norm)
ATOL_SPECTRUM = 1e-10  # spectral quantities (eigenvalues, reconstructions)

PAULI_AXES = ("x", "y", "z")

_PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


def pauli_matrix(axis: str) -> np.ndarray:
    """Single-site 2x2 Pauli matrix for axis 'x', 'y' or 'z'."""
    if axis not in _PAULI:
        raise ValueError(f"unknown Pauli axis {axis!r}, expected one of {PAULI_AXES}")
    return _PAULI[axis].copy()


def check_site(site: int, n_sites: int) -> None:
    """Validate a 1-based site label against the register size."""
    if not 1 <= site <= n_sites:
        raise IndexError(f"site {site} out of range for {n_sites} sites")


def _check_dim(matrix: np.ndarray, n_sites: int, what: str) -> None:
    dim = 2**n_sites
    if matrix.shape != (dim, dim):
        raise ValueError(f"{what} has shape {matrix.shape}, expected {(dim, dim)}")


def hermiticity_defect(matrix: np.ndarray) -> float:
    """Max-norm of M - M^dagger."""
    return float(np.max(np.abs(matrix - matrix.conj().T)))


@dataclass(frozen=True)
class StateVector:
    """Pure state of an n_sites register; amplitudes normalized to 1."""

    n_sites: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amps)
        if amps.shape != (2**self.n_sites,):
            raise ValueError(
                f"amplitude vector has shape {amps.shape}, expected ({2**self.n_sites},)"
            )
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if abs(norm2 - 1.0) > ATOL_ALGEBRA:
            raise ValueError(f"state vector squared-norm {norm2} is not 1")

    def to_density(self) -> "DensityOperator":
        return DensityOperator(self.n_sites, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityOperator:
    """Mixed (or pure) state: Hermitian, unit-trace, positive semidefinite."""

    n_sites: int
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", mat)
        _check_dim(mat, self.n_sites, "density matrix")
        if hermiticity_defect(mat) > ATOL_ALGEBRA:
            raise ValueError("density matrix is not Hermitian")
        trace = complex(np.trace(mat))
        if abs(trace - 1.0) > ATOL_ALGEBRA:
            raise ValueError(f"density matrix trace {trace} is not 1")
        min_eig = float(np.linalg.eigvalsh(mat)[0])
        if min_eig < -ATOL_SPECTRUM:
            raise ValueError(f"density matrix has negative eigenvalue {min_eig}")


@dataclass(frozen=True)
class Operator:
    """Dense operator on the register; hermiticity is asserted, not assumed."""

    n_sites: int
    matrix: np.ndarray
    hermitian: bool = field(default=False)

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", mat)
        _check_dim(mat, self.n_sites, "operator matrix")
        if self.hermitian and hermiticity_defect(mat) > ATOL_ALGEBRA:
            raise ValueError("operator flagged Hermitian fails the Hermiticity check")


def embed_pauli(site: int, axis: str, n_sites: int) -> Operator:
    """sigma^axis acting on `site`, identity elsewhere.

    With site 1 on the least significant bit the embedding is
    I_(2^(N-k)) kron sigma kron I_(2^(k-1)) for site k.
    """
    check_site(site, n_sites)
    sigma = pauli_matrix(axis)
    left = np.eye(2 ** (n_sites - site))
    right = np.eye(2 ** (site - 1))
    full = np.kron(left, np.kron(sigma, right))
    return Operator(n_sites, full, hermitian=True)


def projector(site: int, axis: str, sign: int, n_sites: int) -> Operator:
    """Projector (I +/- sigma_site^axis)/2 onto the +/- eigenspace."""
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    sigma = embed_pauli(site, axis, n_sites).matrix
    full = (np.eye(2**n_sites) + sign * sigma) / 2.0
    return Operator(n_sites, full, hermitian=True)


def all_up_state(n_sites: int) -> DensityOperator:
    """Rank-1 projector onto the fully polarized +z product state."""
    if n_sites < 1:
        raise ValueError("n_sites must be >= 1")
    dim = 2**n_sites
    mat = np.zeros((dim, dim), dtype=complex)
    mat[0, 0] = 1.0  # |up...up> is basis index 0
    return DensityOperator(n_sites, mat)


def maximally_mixed_state(n_sites: int) -> DensityOperator:
    """Identity / 2^N."""
    if n_sites < 1:
        raise ValueError("n_sites must be >= 1")
    dim = 2**n_sites
    return DensityOperator(n_sites, np.eye(dim, dtype=complex) / dim)


def expectation(state: DensityOperator, obs: Operator) -> complex:
    """Tr(rho * obs); real up to rounding when obs is Hermitian."""
    if state.n_sites != obs.n_sites:
        raise ValueError(
            f"dimension mismatch: state on {state.n_sites} sites, operator on {obs.n_sites}"
        )
    return complex(np.einsum("ij,ji->", state.matrix, obs.matrix))
