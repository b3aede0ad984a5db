"""Direct dense evaluation of Pauli OTOCs and the squared-commutator check.

This is the reference path the measurement protocols are validated
against: C(t) = Tr[rho W(t) V W(t) V] with W = sigma_i^a, V = sigma_j^b.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import Propagator, heisenberg
from .hilbert import ATOL_SPECTRUM, DensityOperator, PAULI_AXES, check_site, embed_pauli


@dataclass(frozen=True)
class OtocSpec:
    """Which correlator: W = sigma_(site_i)^(axis_a), V = sigma_(site_j)^(axis_b).

    site_i == site_j is allowed by the algebra; the disjoint-support
    reading (C(0) = 1) assumes distinct sites.
    """

    site_i: int
    axis_a: str
    site_j: int
    axis_b: str

    def __post_init__(self):
        if self.axis_a not in PAULI_AXES or self.axis_b not in PAULI_AXES:
            raise ValueError(f"axes must be in {PAULI_AXES}")

    def validate_for(self, n_sites: int) -> None:
        check_site(self.site_i, n_sites)
        check_site(self.site_j, n_sites)


def otoc_direct(state: DensityOperator, spec: OtocSpec, prop: Propagator, t: float) -> complex:
    """Exact complex C(t) = Tr[rho sigma_i^a(t) sigma_j^b sigma_i^a(t) sigma_j^b]."""
    if state.n_sites != prop.n_sites:
        raise ValueError("dimension mismatch between state and propagator")
    n = prop.n_sites
    spec.validate_for(n)
    w_t = heisenberg(embed_pauli(spec.site_i, spec.axis_a, n), prop, t).matrix
    v = embed_pauli(spec.site_j, spec.axis_b, n).matrix
    wv = w_t @ v
    value = complex(np.einsum("ij,ji->", state.matrix, wv @ wv))
    if abs(value) > 1.0 + ATOL_SPECTRUM:
        raise ValueError(f"OTOC magnitude {abs(value)} exceeds 1 beyond tolerance")
    return value


def commutator_norm(state: DensityOperator, spec: OtocSpec, prop: Propagator, t: float) -> float:
    """<|[W(t), V]|^2> = Tr(rho [W(t),V]^dagger [W(t),V]), nonnegative."""
    if state.n_sites != prop.n_sites:
        raise ValueError("dimension mismatch between state and propagator")
    n = prop.n_sites
    spec.validate_for(n)
    w_t = heisenberg(embed_pauli(spec.site_i, spec.axis_a, n), prop, t).matrix
    v = embed_pauli(spec.site_j, spec.axis_b, n).matrix
    comm = w_t @ v - v @ w_t
    value = complex(np.einsum("ij,ji->", state.matrix, comm.conj().T @ comm))
    return float(value.real)
