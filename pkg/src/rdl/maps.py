"""Assignment map, dynamical map, and its signed operator-sum decomposition.

The dynamical map is the composition

    reduce after conjugate after assign

where the assignment lifts a system operator into the spanned subspace via
its expansion over the independent reduced states.  The superoperator acts on
Hermitian-basis coordinates; the Choi matrix uses the unnormalized convention

    choi = sum_jk |j><k| (x) Phi(|j><k|)

so trace preservation reads: partial trace of choi over the output factor
equals the identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .consistency import ConsistencyReport
from .errors import DimensionError, HermiticityError, IncompleteDomainError, RdlError
from .operators import (
    BipartiteDims,
    adjoint_action,
    basis_coords,
    from_basis_coords,
    frozen,
    max_norm,
    partial_trace_env,
    require_unitary,
)
from .subspace import Subspace


@dataclass(frozen=True, eq=False)
class AssignmentMap:
    """Linear lift of system operators into the spanned joint subspace.

    Maps each independent reduced state to its stored joint partner and
    extends linearly (complex coefficients allowed) over their span.
    """

    subspace: Subspace

    @property
    def dims(self) -> BipartiteDims:
        return self.subspace.dims

    @property
    def pairs(self):
        return self.subspace.pairs

    def apply(self, x: np.ndarray, tol: float | None = None) -> np.ndarray:
        exp = self.subspace.expand_reduced(x, tol)
        return sum(di * joint for di, (_, joint) in zip(exp.coefficients, self.pairs))


def build_assignment(subspace: Subspace) -> AssignmentMap:
    """Assignment map induced by a subspace's independent pairs."""
    if subspace.reduced_dim == 0:
        raise DimensionError("subspace has no independent reduced states to lift")
    return AssignmentMap(subspace)


@dataclass(frozen=True, eq=False)
class Superoperator:
    """Matrix form of the dynamical map on Hermitian-basis coordinates.

    ``extension`` records how the map was completed outside the reduced span:
    "zero" kills the orthogonal complement, "none" asserts the span already
    fills the whole operator space.  ``domain_projector`` projects coordinate
    vectors onto the reduced span.  ``consistency_certified`` is True only
    when the caller supplied a passing consistency report at build time.
    """

    d_s: int
    matrix: np.ndarray  # (d_s^2, d_s^2) complex
    choi: np.ndarray  # (d_s^2, d_s^2) complex
    extension: str
    consistency_certified: bool
    domain_projector: np.ndarray  # (d_s^2, d_s^2) real symmetric

    def apply(self, x: np.ndarray) -> np.ndarray:
        return from_basis_coords(self.matrix @ basis_coords(x, self.d_s), self.d_s)


@dataclass(frozen=True)
class MapVerdicts:
    hermitian_preserving: bool
    trace_preserving: bool
    completely_positive: bool
    choi_min_eigenvalue: float


def _choi_from_matrix(matrix: np.ndarray, d_s: int) -> np.ndarray:
    choi = np.zeros((d_s * d_s, d_s * d_s), dtype=complex)
    for j in range(d_s):
        for k in range(d_s):
            unit = np.zeros((d_s, d_s), dtype=complex)
            unit[j, k] = 1.0
            out = from_basis_coords(matrix @ basis_coords(unit, d_s), d_s)
            choi[j * d_s : (j + 1) * d_s, k * d_s : (k + 1) * d_s] = out
    return choi


def build_dynamical_map(
    assignment: AssignmentMap,
    u: np.ndarray,
    consistency: ConsistencyReport | None = None,
    extension: str = "zero",
    tols: ToleranceConfig = DEFAULT_TOL,
) -> Superoperator:
    """Superoperator of reduce after conjugate after assign.

    Built column by column: each Hermitian basis element is projected onto
    the reduced span, lifted, conjugated by ``u``, and partial-traced.  With
    ``extension="zero"`` the orthogonal complement of the span maps to zero;
    ``extension="none"`` demands the span be the full operator space and
    raises IncompleteDomainError otherwise.
    """
    if extension not in ("zero", "none"):
        raise ValueError(f'extension must be "zero" or "none", got {extension!r}')
    sub = assignment.subspace
    d_s = sub.dims.d_s
    dim = d_s * d_s
    u = require_unitary(u, tols.unitary, "propagator")
    if u.shape[0] != sub.dims.joint:
        raise DimensionError(
            f"propagator side {u.shape[0]} does not match joint dimension {sub.dims.joint}"
        )
    if extension == "none" and sub.reduced_dim < dim:
        raise IncompleteDomainError(
            f"reduced span has dimension {sub.reduced_dim} < {dim}; "
            'an explicit extension is required (use extension="zero")'
        )

    red_rows = np.array([basis_coords(red, d_s).real for red, _ in sub.pairs])
    _, svals, vt = np.linalg.svd(red_rows, full_matrices=False)
    rank = int(np.sum(svals > sub.tol_rank))
    if rank != sub.reduced_dim:
        raise RdlError("independent reduced states lost rank while building the map")
    ortho = vt[:rank]
    projector = ortho.T @ ortho

    cols = []
    for k in range(dim):
        pc = projector[:, k]
        if np.linalg.norm(pc) <= 1e-15:
            cols.append(np.zeros(dim, dtype=complex))
            continue
        lifted = assignment.apply(from_basis_coords(pc.astype(complex), d_s))
        out = partial_trace_env(adjoint_action(u, lifted, tols), sub.dims)
        cols.append(basis_coords(out, d_s))
    matrix = np.column_stack(cols)

    return Superoperator(
        d_s=d_s,
        matrix=frozen(matrix),
        choi=frozen(_choi_from_matrix(matrix, d_s)),
        extension=extension,
        consistency_certified=bool(consistency is not None and consistency.consistent),
        domain_projector=frozen(projector),
    )


@dataclass(frozen=True, eq=False)
class SignedKraus:
    """Operator-sum form Phi(rho) = sum_i e_i E_i rho E_i^dag with e_i = +/-1.

    Terms are ordered by ascending Choi eigenvalue, so negative-weight
    operators come first.  For a trace-preserving map the signed completeness
    sum equals the identity.
    """

    terms: tuple[tuple[float, np.ndarray], ...]

    def reconstruct(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros_like(np.asarray(rho, dtype=complex))
        for e, op in self.terms:
            out += e * (op @ rho @ op.conj().T)
        return out

    def completeness_defect(self) -> float:
        """Max-norm of sum_i e_i E_i^dag E_i - I (zero iff trace preserving)."""
        if not self.terms:
            return 1.0
        d = self.terms[0][1].shape[0]
        acc = np.zeros((d, d), dtype=complex)
        for e, op in self.terms:
            acc += e * (op.conj().T @ op)
        return max_norm(acc - np.eye(d))


def _phase_fixed(vec: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first non-negligible entry is real positive."""
    for entry in vec:
        if abs(entry) > 1e-12:
            return vec * (entry.conjugate() / abs(entry))
    return vec


def decompose_signed_kraus(superop: Superoperator, tol: float = DEFAULT_TOL.herm) -> SignedKraus:
    """Signed Kraus operators from the Choi eigendecomposition.

    Eigenvalues within ``tol`` of zero are dropped; each kept eigenvector v
    becomes sqrt(|lambda|) unvec(v) with column-major unvec, carrying the
    sign of its eigenvalue.  Degenerate clusters are made deterministic by
    the eigensolver's ascending order plus a global phase fix per vector.
    """
    choi = superop.choi
    dev = max_norm(choi - choi.conj().T)
    if dev > tol:
        raise HermiticityError(
            f"Choi matrix is not Hermitian (max deviation {dev:.3e}); "
            "the map does not preserve Hermiticity"
        )
    evals, evecs = np.linalg.eigh((choi + choi.conj().T) / 2.0)
    d = superop.d_s
    terms = []
    for lam, vec in zip(evals, evecs.T):
        if abs(lam) <= tol:
            continue
        op = np.sqrt(abs(lam)) * _phase_fixed(vec).reshape(d, d, order="F")
        terms.append((float(np.sign(lam)), frozen(op)))
    return SignedKraus(terms=tuple(terms))


def verdicts(superop: Superoperator, tol: float = DEFAULT_TOL.psd) -> MapVerdicts:
    """Hermiticity preservation, trace preservation, and complete positivity.

    All three are read off the Choi matrix: Hermiticity of choi, partial
    trace over the output factor against the identity, and the minimum
    eigenvalue against -tol.
    """
    choi = superop.choi
    d_s = superop.d_s
    herm = max_norm(choi - choi.conj().T) <= tol
    tp = (
        max_norm(partial_trace_env(choi, BipartiteDims(d_s, d_s)) - np.eye(d_s)) <= tol
    )
    if herm:
        lo = float(np.linalg.eigvalsh((choi + choi.conj().T) / 2.0)[0])
    else:
        lo = float(np.min(np.linalg.eigvals(choi).real))
    return MapVerdicts(
        hermitian_preserving=herm,
        trace_preserving=tp,
        completely_positive=herm and lo >= -tol,
        choi_min_eigenvalue=lo,
    )
