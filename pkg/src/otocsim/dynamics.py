"""Hamiltonian construction and exact unitary time evolution.

Units: the XY coupling constant is 1 and hbar = 1, so time is
dimensionless.  Evolution is exact via a cached Hermitian
eigendecomposition; backward evolution is just a negative time argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hilbert import (
    ATOL_ALGEBRA,
    ATOL_SPECTRUM,
    DensityOperator,
    Operator,
    check_site,
    embed_pauli,
    hermiticity_defect,
)

PairCoupling = tuple[int, str, int, str, float]  # (site_k, axis_a, site_l, axis_b, coeff)
LocalField = tuple[int, str, float]              # (site, axis, coeff)


@dataclass(frozen=True)
class Hamiltonian:
    """Hermitian generator of the dynamics on an n_sites register."""

    n_sites: int
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", mat)
        dim = 2**self.n_sites
        if mat.shape != (dim, dim):
            raise ValueError(f"Hamiltonian has shape {mat.shape}, expected {(dim, dim)}")
        if hermiticity_defect(mat) > ATOL_ALGEBRA:
            raise ValueError("Hamiltonian is not Hermitian")


@dataclass(frozen=True)
class Propagator:
    """Cached spectral decomposition H = V diag(eigenvalues) V^dagger.

    Immutable after construction; evolve/heisenberg assemble e^(-iHt)
    from it per time point.
    """

    n_sites: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def from_hamiltonian(cls, ham: Hamiltonian) -> "Propagator":
        evals, evecs = np.linalg.eigh(ham.matrix)
        prop = cls(ham.n_sites, evals, evecs)
        residual = np.max(np.abs((evecs * evals) @ evecs.conj().T - ham.matrix))
        if residual > ATOL_SPECTRUM:
            raise ValueError(f"eigendecomposition residual {residual} above tolerance")
        unit = np.max(np.abs(evecs.conj().T @ evecs - np.eye(len(evals))))
        if unit > ATOL_SPECTRUM:
            raise ValueError(f"eigenvector unitarity defect {unit} above tolerance")
        return prop

    def unitary(self, t: float) -> np.ndarray:
        """Dense e^(-iHt)."""
        if not np.isfinite(t):
            raise ValueError(f"evolution time must be finite, got {t}")
        phases = np.exp(-1j * self.eigenvalues * t)
        return (self.eigenvectors * phases) @ self.eigenvectors.conj().T


def build_xy_chain(n_sites: int) -> Hamiltonian:
    """Open-boundary chain H = -sum_k (x_k x_(k+1) + y_k y_(k+1))."""
    if n_sites < 2:
        raise ValueError("XY chain needs at least 2 sites")
    dim = 2**n_sites
    mat = np.zeros((dim, dim), dtype=complex)
    for k in range(1, n_sites):
        for axis in ("x", "y"):
            a = embed_pauli(k, axis, n_sites).matrix
            b = embed_pauli(k + 1, axis, n_sites).matrix
            mat -= a @ b
    return Hamiltonian(n_sites, mat)


def build_custom(
    n_sites: int,
    pair_couplings: Sequence[PairCoupling] = (),
    fields: Sequence[LocalField] = (),
    extra_terms: Sequence[np.ndarray] = (),
) -> Hamiltonian:
    """Sum of two-site couplings, local fields and raw Hermitian terms.

    Higher-body interactions are passed as full matrices in extra_terms;
    each must be Hermitian on its own.
    """
    dim = 2**n_sites
    mat = np.zeros((dim, dim), dtype=complex)
    for site_k, axis_a, site_l, axis_b, coeff in pair_couplings:
        check_site(site_k, n_sites)
        check_site(site_l, n_sites)
        mat += coeff * (
            embed_pauli(site_k, axis_a, n_sites).matrix
            @ embed_pauli(site_l, axis_b, n_sites).matrix
        )
    for site, axis, coeff in fields:
        check_site(site, n_sites)
        mat += coeff * embed_pauli(site, axis, n_sites).matrix
    for term in extra_terms:
        term = np.asarray(term, dtype=complex)
        if term.shape != (dim, dim):
            raise ValueError(f"extra term has shape {term.shape}, expected {(dim, dim)}")
        if hermiticity_defect(term) > ATOL_ALGEBRA:
            raise ValueError("extra term is not Hermitian")
        mat += term
    return Hamiltonian(n_sites, mat)


def evolve_matrix(matrix: np.ndarray, prop: Propagator, t: float) -> np.ndarray:
    """U(t) M U(t)^dagger on a raw matrix, U(t) = e^(-iHt)."""
    u = prop.unitary(t)
    return u @ matrix @ u.conj().T


def evolve(state: DensityOperator, prop: Propagator, t: float) -> DensityOperator:
    """Schroedinger evolution of a state; negative t evolves backwards."""
    if state.n_sites != prop.n_sites:
        raise ValueError("dimension mismatch between state and propagator")
    return DensityOperator(state.n_sites, evolve_matrix(state.matrix, prop, t))


def heisenberg(op: Operator, prop: Propagator, t: float) -> Operator:
    """Heisenberg-picture operator e^(iHt) op e^(-iHt)."""
    if op.n_sites != prop.n_sites:
        raise ValueError("dimension mismatch between operator and propagator")
    u = prop.unitary(t)
    return Operator(op.n_sites, u.conj().T @ op.matrix @ u, hermitian=op.hermitian)
