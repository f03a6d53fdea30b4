"""Families of joint system-environment states and two-qubit parameterizations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import DimensionError, EmptyFamilyError, NotAStateError
from .operators import (
    PAULIS,
    BipartiteDims,
    frozen,
    partial_trace_env,
    require_density,
    require_hermitian,
    tensor,
)

_RANGE_SLACK = 1e-12  # coefficient-range checks allow this much roundoff


@dataclass(frozen=True, eq=False)
class TwoQubitParams:
    """Coefficients of a two-qubit state in the product-Pauli expansion.

    rho = (1/4) (I + sum_i alpha_i s_i (x) I + sum_j beta_j I (x) s_j
                   + sum_ij gamma_ij s_i (x) s_j)

    with s_1, s_2, s_3 the Pauli matrices.  alpha and beta are the system and
    environment Bloch vectors; gamma holds the correlation coefficients, row
    index on the system side.  All entries must lie in [-1, 1]; positivity of
    the assembled matrix is a separate check.
    """

    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=float)
        beta = np.asarray(self.beta, dtype=float)
        gamma = np.asarray(self.gamma, dtype=float)
        if alpha.shape != (3,) or beta.shape != (3,) or gamma.shape != (3, 3):
            raise DimensionError(
                f"expected shapes (3,), (3,), (3, 3); got {alpha.shape}, {beta.shape}, {gamma.shape}"
            )
        for name, arr in (("alpha", alpha), ("beta", beta), ("gamma", gamma)):
            worst = float(np.max(np.abs(arr)))
            if worst > 1.0 + _RANGE_SLACK:
                raise ValueError(f"{name} entries must lie in [-1, 1], worst is {worst:.6g}")
        object.__setattr__(self, "alpha", frozen(alpha))
        object.__setattr__(self, "beta", frozen(beta))
        object.__setattr__(self, "gamma", frozen(gamma))


def assemble_two_qubit(params: TwoQubitParams, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Build the 4x4 density matrix for ``params``.

    Raises NotAStateError (carrying the minimum eigenvalue) when the
    coefficients do not describe a positive matrix.
    """
    rho = np.eye(4, dtype=complex)
    for i in range(3):
        rho += params.alpha[i] * tensor(PAULIS[i], np.eye(2))
        rho += params.beta[i] * tensor(np.eye(2), PAULIS[i])
        for j in range(3):
            rho += params.gamma[i, j] * tensor(PAULIS[i], PAULIS[j])
    rho /= 4.0
    return require_density(rho, tol, "assembled two-qubit state")


def extract_two_qubit_params(rho: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> TwoQubitParams:
    """Read the product-Pauli coefficients back off a 4x4 Hermitian matrix.

    Exact inverse of :func:`assemble_two_qubit`:
    alpha_i = tr((s_i (x) I) rho), beta_j = tr((I (x) s_j) rho),
    gamma_ij = tr((s_i (x) s_j) rho).
    """
    rho = require_hermitian(rho, tol.herm, "two-qubit state")
    if rho.shape != (4, 4):
        raise DimensionError(f"expected a 4x4 matrix, got {rho.shape}")
    eye = np.eye(2)
    alpha = np.array([np.trace(tensor(p, eye) @ rho).real for p in PAULIS])
    beta = np.array([np.trace(tensor(eye, p) @ rho).real for p in PAULIS])
    gamma = np.array(
        [[np.trace(tensor(pi, pj) @ rho).real for pj in PAULIS] for pi in PAULIS]
    )
    return TwoQubitParams(alpha=alpha, beta=beta, gamma=gamma)


@dataclass(frozen=True, eq=False)
class StateFamily:
    """A finite set of joint density matrices on one system-environment split."""

    dims: BipartiteDims
    members: tuple[np.ndarray, ...]
    label: str = ""
    tol: ToleranceConfig = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        if len(self.members) == 0:
            raise EmptyFamilyError("a state family needs at least one member")
        validated = []
        for idx, m in enumerate(self.members):
            m = np.asarray(m, dtype=complex)
            if m.shape != (self.dims.joint, self.dims.joint):
                raise DimensionError(
                    f"member {idx} has shape {m.shape}, expected "
                    f"({self.dims.joint}, {self.dims.joint})"
                )
            validated.append(frozen(require_density(m, self.tol, f"member {idx}")))
        object.__setattr__(self, "members", tuple(validated))

    def __len__(self) -> int:
        return len(self.members)

    def reduced(self) -> tuple[np.ndarray, ...]:
        """Partial trace of every member over the environment."""
        return tuple(partial_trace_env(m, self.dims) for m in self.members)


def _format_matrix(m: np.ndarray) -> str:
    return np.array2string(np.asarray(m), precision=6, separator=",", suppress_small=True)


def product_family(
    states_s,
    omega_e: np.ndarray,
    label: str | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> StateFamily:
    """Family {rho_s (x) omega_e} with one fixed environment state."""
    states_s = list(states_s)
    if not states_s:
        raise EmptyFamilyError("no system states supplied")
    omega_e = require_density(np.asarray(omega_e, dtype=complex), tol, "environment state")
    d_e = omega_e.shape[0]
    d_s = np.asarray(states_s[0]).shape[0]
    dims = BipartiteDims(d_s=int(d_s), d_e=int(d_e))
    members = []
    for idx, s in enumerate(states_s):
        s = require_density(np.asarray(s, dtype=complex), tol, f"system state {idx}")
        if s.shape[0] != d_s:
            raise DimensionError(f"system state {idx} has side {s.shape[0]}, expected {d_s}")
        members.append(tensor(s, omega_e))
    if label is None:
        label = f"product family, omega_e={_format_matrix(omega_e)}"
    return StateFamily(dims=dims, members=tuple(members), label=label, tol=tol)


@dataclass(frozen=True)
class RejectedSample:
    """Why one draw was dropped while building a constrained family."""

    index: int
    reason: str  # "range" or "positivity"
    gamma11: float
    gamma21: float
    min_eigenvalue: float | None = None


def constrained_two_qubit_family(
    a11: float,
    a21: float,
    b11,
    b21,
    samples,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> tuple[StateFamily, tuple[RejectedSample, ...]]:
    """Two-qubit family whose correlations are affine functions of alpha.

    Each sample's gamma_11 and gamma_21 entries are overwritten with
    a11 + b11 . alpha and a21 + b21 . alpha.  Samples whose overwritten
    coefficients leave [-1, 1] or break positivity are rejected one by one;
    the rejects come back alongside the family.  Raises EmptyFamilyError when
    nothing survives.
    """
    b11 = np.asarray(b11, dtype=float)
    b21 = np.asarray(b21, dtype=float)
    if b11.shape != (3,) or b21.shape != (3,):
        raise DimensionError(f"b11 and b21 must be 3-vectors, got {b11.shape}, {b21.shape}")
    members = []
    rejected = []
    for idx, p in enumerate(samples):
        g11 = float(a11 + b11 @ p.alpha)
        g21 = float(a21 + b21 @ p.alpha)
        if max(abs(g11), abs(g21)) > 1.0 + _RANGE_SLACK:
            rejected.append(RejectedSample(idx, "range", g11, g21))
            continue
        gamma = np.array(p.gamma)
        gamma[0, 0] = g11
        gamma[1, 0] = g21
        constrained = TwoQubitParams(alpha=p.alpha, beta=p.beta, gamma=gamma)
        try:
            members.append(assemble_two_qubit(constrained, tol))
        except NotAStateError as err:
            rejected.append(RejectedSample(idx, "positivity", g11, g21, err.min_eigenvalue))
    if not members:
        raise EmptyFamilyError(
            f"all {len(rejected)} samples were rejected by the affine correlation constraint"
        )
    label = (
        f"constrained two-qubit family, a11={a11:.6g}, a21={a21:.6g}, "
        f"b11={np.array2string(b11, precision=6, separator=',')}, "
        f"b21={np.array2string(b21, precision=6, separator=',')}"
    )
    family = StateFamily(
        dims=BipartiteDims(2, 2), members=tuple(members), label=label, tol=tol
    )
    return family, tuple(rejected)


def full_two_qubit_family(eps: float = 0.2, tol: ToleranceConfig = DEFAULT_TOL) -> StateFamily:
    """Sixteen deterministic states spanning the whole two-qubit operator space.

    The maximally mixed state plus displacements of size ``eps`` along every
    product-Pauli direction.  Valid states for eps <= 0.25.
    """
    eye4 = np.eye(4, dtype=complex) / 4.0
    eye2 = np.eye(2)
    members = [eye4]
    for p in PAULIS:
        members.append(eye4 + eps * tensor(p, eye2))
    for p in PAULIS:
        members.append(eye4 + eps * tensor(eye2, p))
    for pi in PAULIS:
        for pj in PAULIS:
            members.append(eye4 + eps * tensor(pi, pj))
    return StateFamily(
        dims=BipartiteDims(2, 2),
        members=tuple(members),
        label=f"full-span two-qubit family, eps={eps:.6g}",
        tol=tol,
    )


def random_density_matrix(d: int, rng: np.random.Generator) -> np.ndarray:
    """Random full-rank density matrix from a normalized Ginibre draw."""
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_two_qubit_params(rng: np.random.Generator) -> TwoQubitParams:
    """Coefficients of a random valid two-qubit state."""
    return extract_two_qubit_params(random_density_matrix(4, rng))


def sample_two_qubit_params(rng: np.random.Generator, scale: float = 1.0) -> TwoQubitParams:
    """Uniform draw of all fifteen coefficients from [-scale, scale].

    No positivity guarantee; downstream assembly rejects bad draws.
    """
    if not 0 < scale <= 1.0:
        raise ValueError(f"scale must lie in (0, 1], got {scale}")
    return TwoQubitParams(
        alpha=rng.uniform(-scale, scale, size=3),
        beta=rng.uniform(-scale, scale, size=3),
        gamma=rng.uniform(-scale, scale, size=(3, 3)),
    )
