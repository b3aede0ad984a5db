"""The two ancilla-free measurement protocols.

Projective branch: four projective measurements of sigma_j^b / sigma_i^a
interleaved with forward, backward, forward evolution give 16 outcome
probabilities; the signed correlation of the outcomes reconstructs
Re C(t) via 2*corr - 1.

Rotation branch: three single-site rotations interleaved with the same
evolution pattern, followed by one expectation value of sigma_i^a;
a four-angle-set combination reconstructs Im C(t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .dynamics import Propagator
from .hilbert import DensityOperator, Operator, check_site, embed_pauli, projector
from .otoc import OtocSpec

# Fixed enumeration order of the 16 outcome sequences (o1, o2, o3, o4),
# +1 before -1, o1 outermost.  All reductions sum in this order so results
# are independent of any evaluation parallelism.
OUTCOME_SEQUENCES: tuple[tuple[int, int, int, int], ...] = tuple(
    (o1, o2, o3, o4)
    for o1 in (+1, -1)
    for o2 in (+1, -1)
    for o3 in (+1, -1)
    for o4 in (+1, -1)
)

# Branches whose parent probability falls below this are assigned joint
# probability 0 without forming the conditional state (the chain rule
# divides by the parent probability, but the joint stays well defined).
ZERO_BRANCH_CUTOFF = 1e-14

PROB_ATOL = 1e-12       # tolerance on individual probabilities
NORMALIZATION_ATOL = 1e-10  # tolerance on sum over the 16 sequences

DEFAULT_ANGLES = (math.pi / 2, math.pi / 2, math.pi / 2)


class DegenerateAnglesError(ValueError):
    """Rotation angles make the reconstruction prefactor vanish."""


@dataclass(frozen=True)
class RotationAngles:
    """Angle triple (theta1, theta2, theta3) of the rotation protocol."""

    theta1: float
    theta2: float
    theta3: float

    def __post_init__(self):
        for name in ("theta1", "theta2", "theta3"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def prefactor(self) -> float:
        """4 sin(t2) sin(t1 + t3/2) sin(t3/2); equals 2 at (pi/2, pi/2, pi/2)."""
        return (
            4.0
            * math.sin(self.theta2)
            * math.sin(self.theta1 + self.theta3 / 2.0)
            * math.sin(self.theta3 / 2.0)
        )


@dataclass(frozen=True)
class ProbabilityTable:
    """Probabilities of the 16 outcome sequences of the projective protocol."""

    probabilities: Mapping[tuple[int, int, int, int], float]

    def __post_init__(self):
        probs = dict(self.probabilities)
        if set(probs) != set(OUTCOME_SEQUENCES):
            raise ValueError("table must have exactly the 16 outcome sequences as keys")
        for seq in OUTCOME_SEQUENCES:
            p = probs[seq]
            if p < -PROB_ATOL or p > 1.0 + PROB_ATOL:
                raise ValueError(f"probability {p} for {seq} outside [0, 1] beyond tolerance")
            probs[seq] = min(max(p, 0.0), 1.0)  # clamp onto the simplex after the check
        total = math.fsum(probs[seq] for seq in OUTCOME_SEQUENCES)
        if abs(total - 1.0) > NORMALIZATION_ATOL:
            raise ValueError(f"probabilities sum to {total}, not 1")
        object.__setattr__(self, "probabilities", probs)

    def __getitem__(self, seq: tuple[int, int, int, int]) -> float:
        return self.probabilities[seq]


def outcome_probabilities(
    state: DensityOperator, spec: OtocSpec, prop: Propagator, t: float
) -> ProbabilityTable:
    """Exact joint probabilities for the four-measurement sequence.

    Measurement order is sigma_j^b, sigma_i^a, sigma_j^b, sigma_i^a with
    evolution +t, -t, +t in between; each measurement collapses the state
    projectively (Pi rho Pi / p).
    """
    if state.n_sites != prop.n_sites:
        raise ValueError("dimension mismatch between state and propagator")
    n = prop.n_sites
    spec.validate_for(n)
    projs = {
        ("j", s): projector(spec.site_j, spec.axis_b, s, n).matrix for s in (+1, -1)
    }
    projs.update(
        (("i", s), projector(spec.site_i, spec.axis_a, s, n).matrix) for s in (+1, -1)
    )
    u_fwd = prop.unitary(t)
    u_bwd = u_fwd.conj().T
    # (which site to measure, unitary applied before the measurement)
    steps = (("j", None), ("i", u_fwd), ("j", u_bwd), ("i", u_fwd))

    probs: dict[tuple[int, int, int, int], float] = {}

    def fill_zeros(prefix: tuple[int, ...]) -> None:
        for seq in OUTCOME_SEQUENCES:
            if seq[: len(prefix)] == prefix:
                probs[seq] = 0.0

    def descend(rho: np.ndarray, joint: float, outcomes: tuple[int, ...]) -> None:
        depth = len(outcomes)
        if depth == 4:
            probs[outcomes] = joint
            return
        which, u = steps[depth]
        rho_t = rho if u is None else u @ rho @ u.conj().T
        for sign in (+1, -1):
            pi = projs[(which, sign)]
            collapsed = pi @ rho_t @ pi
            p = float(np.trace(collapsed).real)
            if p < ZERO_BRANCH_CUTOFF:
                fill_zeros(outcomes + (sign,))
                continue
            descend(collapsed / p, joint * p, outcomes + (sign,))

    descend(state.matrix, 1.0, ())
    return ProbabilityTable(probs)


def corr_from_table(table: ProbabilityTable | Mapping[tuple[int, int, int, int], float]) -> float:
    """Signed correlation sum_o o1 o2 o3 o4 P_o, in [-1, 1]."""
    if not isinstance(table, ProbabilityTable):
        table = ProbabilityTable(table)
    return math.fsum(
        seq[0] * seq[1] * seq[2] * seq[3] * table[seq] for seq in OUTCOME_SEQUENCES
    )


def re_otoc_via_protocol(
    state: DensityOperator, spec: OtocSpec, prop: Propagator, t: float
) -> float:
    """Re C(t) reconstructed as 2*corr - 1 from the projective protocol."""
    return 2.0 * corr_from_table(outcome_probabilities(state, spec, prop, t)) - 1.0


def rotation_operator(site: int, axis: str, theta: float, n_sites: int) -> Operator:
    """Single-site rotation exp(-i sigma theta / 2) = cos(theta/2) - i sin(theta/2) sigma."""
    check_site(site, n_sites)
    sigma = embed_pauli(site, axis, n_sites).matrix
    mat = math.cos(theta / 2.0) * np.eye(2**n_sites) - 1j * math.sin(theta / 2.0) * sigma
    return Operator(n_sites, mat)


def _composite_rotation(
    spec: OtocSpec, prop: Propagator, t: float, angles: RotationAngles
) -> np.ndarray:
    """e^(-iHt) R_j^b(t3) e^(iHt) R_i^a(t2) e^(-iHt) R_j^b(t1)."""
    n = prop.n_sites
    r1 = rotation_operator(spec.site_j, spec.axis_b, angles.theta1, n).matrix
    r2 = rotation_operator(spec.site_i, spec.axis_a, angles.theta2, n).matrix
    r3 = rotation_operator(spec.site_j, spec.axis_b, angles.theta3, n).matrix
    u_fwd = prop.unitary(t)
    u_bwd = prop.unitary(-t)
    return u_fwd @ r3 @ u_bwd @ r2 @ u_fwd @ r1


def rotated_expectation(
    state: DensityOperator,
    spec: OtocSpec,
    prop: Propagator,
    t: float,
    angles: RotationAngles,
) -> float:
    """<sigma_i^a> after the rotate/evolve sequence of the imaginary-part protocol."""
    if state.n_sites != prop.n_sites:
        raise ValueError("dimension mismatch between state and propagator")
    spec.validate_for(prop.n_sites)
    r = _composite_rotation(spec, prop, t, angles)
    rotated = r @ state.matrix @ r.conj().T
    obs = embed_pauli(spec.site_i, spec.axis_a, prop.n_sites).matrix
    return float(np.einsum("ij,ji->", rotated, obs).real)


def angle_variants(angles: RotationAngles) -> tuple[RotationAngles, ...]:
    """The four sign-flipped angle sets entering the Im C reconstruction."""
    t1, t2, t3 = angles.theta1, angles.theta2, angles.theta3
    return (
        RotationAngles(-t1, -t2, -t3),
        RotationAngles(t1, t2, t3),
        RotationAngles(-t1, t2, -t3),
        RotationAngles(t1, -t2, t3),
    )


ANGLE_VARIANT_SIGNS = (+1.0, -1.0, -1.0, +1.0)

PREFACTOR_GUARD = 1e-6


def im_otoc_via_protocol(
    state: DensityOperator,
    spec: OtocSpec,
    prop: Propagator,
    t: float,
    angles: RotationAngles | None = None,
) -> float:
    """Im C(t) from the four-angle-set combination of rotated expectations."""
    if angles is None:
        angles = RotationAngles(*DEFAULT_ANGLES)
    prefactor = angles.prefactor()
    if abs(prefactor) <= PREFACTOR_GUARD:
        raise DegenerateAnglesError(
            f"reconstruction prefactor {prefactor} is below the guard {PREFACTOR_GUARD}; "
            "choose non-degenerate angles"
        )
    combo = math.fsum(
        sign * rotated_expectation(state, spec, prop, t, var)
        for sign, var in zip(ANGLE_VARIANT_SIGNS, angle_variants(angles))
    )
    return combo / prefactor
