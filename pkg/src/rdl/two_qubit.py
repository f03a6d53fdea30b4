"""Closed-form two-qubit model, the linearity-coefficient solve, and swap demos.

The model couples the system's third Pauli axis to the environment's first:
H = (omega/2) s3 (x) s1, so the propagator is

    U = cos(omega t / 2) I - i sin(omega t / 2) s3 (x) s1.

Under conjugation by U the reduced Bloch vector moves as

    alpha_1' = alpha_1 cos(omega t) - gamma_21 sin(omega t)
    alpha_2' = alpha_2 cos(omega t) + gamma_11 sin(omega t)
    alpha_3' = alpha_3

which is linear in the state exactly when gamma_11 and gamma_21 are affine
functions of alpha across the family.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .consistency import ConsistencyReport, check_subspace_consistency
from .errors import DimensionError, SingularSystemError
from .families import StateFamily, extract_two_qubit_params, product_family
from .maps import (
    MapVerdicts,
    SignedKraus,
    Superoperator,
    build_assignment,
    build_dynamical_map,
    decompose_signed_kraus,
    verdicts,
)
from .operators import (
    PAULIS,
    SIGMA_X,
    SIGMA_Z,
    frozen,
    max_norm,
    tensor,
    trace_distance,
)
from .subspace import Subspace, build_subspace

_CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class ModelParams:
    """Coupling strength and evolution time of the closed-form model."""

    omega: float
    t: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.t < 0:
            raise ValueError(f"t must be nonnegative, got {self.t}")

    @property
    def angle(self) -> float:
        return self.omega * self.t


def model_unitary(params: ModelParams) -> np.ndarray:
    """Propagator of the s3 (x) s1 coupling, in closed form."""
    half = params.angle / 2.0
    return np.cos(half) * np.eye(4, dtype=complex) - 1j * np.sin(half) * tensor(
        SIGMA_Z, SIGMA_X
    )


def swap_unitary(d: int) -> np.ndarray:
    """Unitary exchanging the two factors of a d x d product space."""
    if d < 2:
        raise DimensionError(f"swap needs factor dimension at least 2, got {d}")
    u = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            u[j * d + i, i * d + j] = 1.0
    return u


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    """(tr(s1 rho), tr(s2 rho), tr(s3 rho)) of a qubit operator."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DimensionError(f"expected a 2x2 matrix, got {rho.shape}")
    return np.array([np.trace(p @ rho).real for p in PAULIS])


def analytic_bloch_step(alpha, gamma11: float, gamma21: float, angle: float) -> np.ndarray:
    """Reduced Bloch vector after the model propagator with rotation ``angle``."""
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (3,):
        raise DimensionError(f"alpha must be a 3-vector, got shape {alpha.shape}")
    c, s = np.cos(angle), np.sin(angle)
    return np.array(
        [
            alpha[0] * c - gamma21 * s,
            alpha[1] * c + gamma11 * s,
            alpha[2],
        ]
    )


@dataclass(frozen=True, eq=False)
class LinearityCoefficients:
    """Affine law gamma_11 = a11 + b11 . alpha, gamma_21 = a21 + b21 . alpha."""

    a11: float
    b11: np.ndarray
    a21: float
    b21: np.ndarray

    def predict(self, alpha) -> tuple[float, float]:
        alpha = np.asarray(alpha, dtype=float)
        return float(self.a11 + self.b11 @ alpha), float(self.a21 + self.b21 @ alpha)


def solve_linearity_coefficients(records) -> LinearityCoefficients:
    """Fit the affine correlation law through exactly four Bloch records.

    ``records`` holds four (alpha, gamma11, gamma21) triples.  The 4x4 system
    with rows (1, alpha_1, alpha_2, alpha_3) is solved for both gamma
    channels at once; a condition number beyond 1e12 raises
    SingularSystemError.
    """
    records = list(records)
    if len(records) != 4:
        raise ValueError(f"need exactly 4 records, got {len(records)}")
    m = np.ones((4, 4))
    rhs = np.zeros((4, 2))
    for row, (alpha, g11, g21) in enumerate(records):
        alpha = np.asarray(alpha, dtype=float)
        if alpha.shape != (3,):
            raise DimensionError(f"record {row}: alpha must be a 3-vector, got {alpha.shape}")
        m[row, 1:] = alpha
        rhs[row] = (g11, g21)
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > _CONDITION_LIMIT:
        raise SingularSystemError(
            f"Bloch records are too close to dependent: condition number {cond:.3e}"
        )
    sol = np.linalg.solve(m, rhs)
    return LinearityCoefficients(
        a11=float(sol[0, 0]), b11=frozen(sol[1:, 0]), a21=float(sol[0, 1]), b21=frozen(sol[1:, 1])
    )


def linearity_residuals(family: StateFamily, coeffs: LinearityCoefficients) -> np.ndarray:
    """Per-member deviation of (gamma11, gamma21) from the affine law.

    Coefficients are re-extracted from each member by Pauli projection, so
    this checks the stored matrices, not any cached parameters.
    """
    if family.dims.d_s != 2 or family.dims.d_e != 2:
        raise DimensionError("linearity residuals are defined for two-qubit families")
    out = np.zeros((len(family), 2))
    for idx, member in enumerate(family.members):
        p = extract_two_qubit_params(member, family.tol)
        pred11, pred21 = coeffs.predict(p.alpha)
        out[idx] = (p.gamma[0, 0] - pred11, p.gamma[1, 0] - pred21)
    return out


@dataclass(frozen=True)
class PairDistance:
    before: float
    after: float
    increased: bool


@dataclass(frozen=True, eq=False)
class ExperimentReport:
    """Everything one experiment produces: verdicts, map, and probe distances."""

    consistency: ConsistencyReport
    subspace: Subspace
    superoperator: Superoperator
    kraus: SignedKraus
    map_verdicts: MapVerdicts
    pairs: tuple[PairDistance, ...]
    constant_output_deviation: float | None = None


def _distance_pairs(states, superop: Superoperator, tol: float) -> tuple[PairDistance, ...]:
    out = []
    images = [superop.apply(s) for s in states]
    for i in range(len(states)):
        for j in range(i + 1, len(states)):
            before = trace_distance(states[i], states[j])
            after = trace_distance(images[i], images[j])
            out.append(PairDistance(before, after, increased=after > before + tol))
    return tuple(out)


def swap_experiment(
    states_s,
    omega_e: np.ndarray,
    tols: ToleranceConfig = DEFAULT_TOL,
    tol_consistency: float | None = None,
) -> ExperimentReport:
    """Product family {rho (x) omega} under the swap propagator.

    The kernel of a one-environment-state product family is empty, so the
    check passes trivially; the induced map sends everything to the fixed
    environment state, which is completely positive, and no pair of probe
    states can move apart.
    """
    fam = product_family(states_s, omega_e, tol=tols)
    if fam.dims.d_s != fam.dims.d_e:
        raise DimensionError(
            f"swap needs equal factor dimensions, got {fam.dims.d_s} and {fam.dims.d_e}"
        )
    u = swap_unitary(fam.dims.d_s)
    sub = build_subspace(fam, tols.rank)
    report = check_subspace_consistency(sub, u, tol_consistency, tols)
    superop = build_dynamical_map(build_assignment(sub), u, consistency=report, tols=tols)
    kraus = decompose_signed_kraus(superop, tols.herm)
    v = verdicts(superop, tols.psd)
    omega = np.asarray(omega_e, dtype=complex)
    reduced = fam.reduced()
    deviation = max(max_norm(superop.apply(r) - omega) for r in reduced)
    pairs = _distance_pairs(reduced, superop, tols.psd)
    return ExperimentReport(
        consistency=report,
        subspace=sub,
        superoperator=superop,
        kraus=kraus,
        map_verdicts=v,
        pairs=pairs,
        constant_output_deviation=float(deviation),
    )


def custom_subspace_experiment(
    subspace: Subspace,
    u: np.ndarray,
    probe_pairs,
    tols: ToleranceConfig = DEFAULT_TOL,
    tol_consistency: float | None = None,
) -> ExperimentReport:
    """Run the full pipeline on a caller-supplied subspace.

    ``probe_pairs`` is a sequence of (rho, sigma) system-state pairs, each of
    which must lie in the reduced span (NotInSpanError otherwise).  Distance
    growth between probe images is flagged per pair; it can only occur when
    the map fails complete positivity.
    """
    report = check_subspace_consistency(subspace, u, tol_consistency, tols)
    superop = build_dynamical_map(build_assignment(subspace), u, consistency=report, tols=tols)
    kraus = decompose_signed_kraus(superop, tols.herm)
    v = verdicts(superop, tols.psd)
    pairs = []
    for rho, sigma in probe_pairs:
        subspace.expand_reduced(np.asarray(rho, dtype=complex))
        subspace.expand_reduced(np.asarray(sigma, dtype=complex))
        before = trace_distance(rho, sigma, tols)
        after = trace_distance(superop.apply(rho), superop.apply(sigma), tols)
        pairs.append(PairDistance(before, after, increased=after > before + tols.psd))
    return ExperimentReport(
        consistency=report,
        subspace=subspace,
        superoperator=superop,
        kraus=kraus,
        map_verdicts=v,
        pairs=tuple(pairs),
    )


def pauli_eigenstates() -> tuple[np.ndarray, ...]:
    """The six single-qubit states (I +/- s_i) / 2."""
    eye = np.eye(2, dtype=complex)
    out = []
    for p in PAULIS:
        out.append(frozen((eye + p) / 2.0))
        out.append(frozen((eye - p) / 2.0))
    return tuple(out)
