"""Tests for whether a propagator treats equal marginals equally.

The reduced dynamics of a family is linear exactly when the span of the
family passes the kernel test below: every spanned operator with vanishing
environment partial trace must still have vanishing partial trace after
conjugation by the propagator.  The pairwise and hull checks probe the same
condition through finitely many state pairs instead of the kernel basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import DimensionError, SamplingExhaustedError
from .families import StateFamily
from .operators import (
    adjoint_action,
    frozen,
    hs_norm,
    max_norm,
    partial_trace_env,
    require_unitary,
)
from .subspace import Subspace, build_subspace

_MARGINAL_FACTOR = 10.0  # violations in (tol, 10 tol] are flagged as marginal
_BISECTION_STEPS = 60
_MIN_PERTURBATION = 1e-7  # smaller scalings probe nothing but numerical noise


@dataclass(frozen=True, eq=False)
class ConsistencyReport:
    """Outcome of one consistency check.

    ``consistent`` is True iff max_violation <= tolerance.  Violations up to
    ten times the tolerance additionally set ``marginal``, signalling a
    verdict that sits in the numerical grey zone.  ``witness`` is a Hermitian
    operator (with vanishing environment partial trace) whose evolved partial
    trace realizes max_violation; it is None for clean passes.
    ``pairs_tested`` counts probed state pairs where that notion applies;
    zero means the check was vacuous.
    """

    consistent: bool
    max_violation: float
    tolerance: float
    witness: np.ndarray | None = None
    pairs_tested: int | None = None
    marginal: bool = False


def _report(max_violation, tol, witness=None, pairs_tested=None) -> ConsistencyReport:
    consistent = max_violation <= tol
    marginal = (not consistent) and max_violation <= _MARGINAL_FACTOR * tol
    return ConsistencyReport(
        consistent=consistent,
        max_violation=float(max_violation),
        tolerance=float(tol),
        witness=None if witness is None else frozen(witness),
        pairs_tested=pairs_tested,
        marginal=marginal,
    )


def _violation(u: np.ndarray, y: np.ndarray, dims, tols: ToleranceConfig) -> float:
    return max_norm(partial_trace_env(adjoint_action(u, y, tols), dims))


def check_subspace_consistency(
    subspace: Subspace,
    u: np.ndarray,
    tol: float | None = None,
    tols: ToleranceConfig = DEFAULT_TOL,
) -> ConsistencyReport:
    """Kernel test: does conjugation by ``u`` preserve vanishing marginals?

    Evaluates the evolved partial trace of every kernel basis element and
    reports the worst max-norm.  An empty kernel passes trivially.
    """
    if tol is None:
        tol = tols.consistency
    u = require_unitary(u, tols.unitary, "propagator")
    if u.shape[0] != subspace.dims.joint:
        raise DimensionError(
            f"propagator side {u.shape[0]} does not match joint dimension {subspace.dims.joint}"
        )
    worst = 0.0
    witness = None
    for y in subspace.kernel_basis:
        v = _violation(u, y, subspace.dims, tols)
        if v > worst:
            worst = v
            witness = y
    if worst <= tol:
        witness = None
    return _report(worst, tol, witness)


def check_pairwise_consistency(
    family: StateFamily,
    u: np.ndarray,
    tol: float | None = None,
    match_tol: float | None = None,
    tols: ToleranceConfig = DEFAULT_TOL,
) -> ConsistencyReport:
    """Compare evolved marginals across member pairs that share a marginal.

    Pairs whose reduced states agree within ``match_tol`` are evolved and
    compared within ``tol``.  With no matching pairs the verdict is vacuous:
    consistent with pairs_tested = 0.
    """
    if tol is None:
        tol = tols.consistency
    if match_tol is None:
        match_tol = tols.rank
    u = require_unitary(u, tols.unitary, "propagator")
    if u.shape[0] != family.dims.joint:
        raise DimensionError(
            f"propagator side {u.shape[0]} does not match joint dimension {family.dims.joint}"
        )
    reduced = family.reduced()
    evolved = [partial_trace_env(adjoint_action(u, m, tols), family.dims) for m in family.members]
    worst = 0.0
    witness = None
    tested = 0
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            if max_norm(reduced[i] - reduced[j]) > match_tol:
                continue
            tested += 1
            v = max_norm(evolved[i] - evolved[j])
            if v > worst:
                worst = v
                witness = family.members[i] - family.members[j]
    if worst <= tol:
        witness = None
    return _report(worst, tol, witness, pairs_tested=tested)


def _positivity_scaling(sigma: np.ndarray, y: np.ndarray, psd_tol: float) -> float | None:
    """Largest epsilon (halving from 1) keeping sigma + eps y positive.

    Gives up (returns None) once the scaling drops below a floor where the
    perturbed state would differ from sigma only at noise level; without the
    floor, any direction would "succeed" at an epsilon inside the positivity
    tolerance and a blocked direction could never be told from an open one.
    """
    eps = 1.0
    for _ in range(_BISECTION_STEPS):
        if np.linalg.eigvalsh(sigma + eps * y)[0] >= -psd_tol:
            return eps
        eps /= 2.0
        if eps < _MIN_PERTURBATION:
            return None
    return None


def check_hull_consistency(
    family: StateFamily,
    u: np.ndarray,
    seed: int,
    tol: float | None = None,
    trials: int = 100,
    tol_rank: float | None = None,
    tols: ToleranceConfig = DEFAULT_TOL,
) -> ConsistencyReport:
    """Sampled equal-marginal state pairs instead of the kernel basis.

    Each trial mixes the members with random convex weights, perturbs the mix
    along a random kernel direction scaled until positivity survives, and
    compares the evolved marginals of the perturbed and unperturbed states.
    Agrees with :func:`check_subspace_consistency` on the verdict because any
    equal-marginal pair differs by a kernel element and vice versa.

    Requires an explicit ``seed``.  Raises SamplingExhaustedError when the
    kernel is nonempty but no trial admits a positivity-preserving scaling.
    """
    if tol is None:
        tol = tols.consistency
    if tol_rank is None:
        tol_rank = tols.rank
    u = require_unitary(u, tols.unitary, "propagator")
    if u.shape[0] != family.dims.joint:
        raise DimensionError(
            f"propagator side {u.shape[0]} does not match joint dimension {family.dims.joint}"
        )
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    sub = build_subspace(family, tol_rank)
    if sub.kernel_dim == 0:
        return _report(0.0, tol, pairs_tested=0)

    rng = np.random.default_rng(seed)
    members = family.members
    worst = 0.0
    witness = None
    tested = 0
    for _ in range(trials):
        weights = rng.exponential(size=len(members))
        weights /= weights.sum()
        sigma = sum(w * m for w, m in zip(weights, members))
        coeffs = rng.normal(size=sub.kernel_dim)
        y = sum(c * k for c, k in zip(coeffs, sub.kernel_basis))
        n = hs_norm(y)
        if n <= tol_rank:
            continue
        y = y / n
        eps = _positivity_scaling(sigma, y, tols.psd)
        if eps is None:
            continue
        perturbed = sigma + eps * y
        v = max_norm(
            partial_trace_env(adjoint_action(u, perturbed, tols), family.dims)
            - partial_trace_env(adjoint_action(u, sigma, tols), family.dims)
        )
        tested += 1
        if v > worst:
            worst = v
            witness = eps * y
    if tested == 0:
        raise SamplingExhaustedError(
            f"no positivity-preserving perturbation found in {trials} trials"
        )
    if worst <= tol:
        witness = None
    return _report(worst, tol, witness, pairs_tested=tested)
