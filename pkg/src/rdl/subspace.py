"""Spanned subspace of joint states, its reduced side, and its traceless kernel.

The family members are Hermitian, so their coordinates in a Hermitian operator
basis are real and the whole construction runs on real coordinate matrices.
That keeps every basis element of the span, and of the kernel, exactly
Hermitian by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL
from .errors import DimensionError, NotInSpanError, RdlError
from .families import StateFamily
from .operators import (
    BipartiteDims,
    basis_coords,
    from_basis_coords,
    frozen,
    max_norm,
    partial_trace_env,
)


@dataclass(frozen=True, eq=False)
class ReducedExpansion:
    """Least-squares expansion of a system operator over the independent reduced states."""

    coefficients: np.ndarray  # complex, one per independent pair
    remainder: np.ndarray  # x - sum_i d_i rho_s_i
    residual: float  # max-norm of the remainder


@dataclass(frozen=True, eq=False)
class Subspace:
    """Span of a state family together with its reduced-side structure.

    ``span_basis`` is an orthonormal Hermitian basis of the span of all
    members.  ``pairs`` holds (reduced, joint) matrices for a maximal
    independent set of reduced states, scanned greedily in family order.
    ``kernel_basis`` spans the part of the span killed by the environment
    partial trace; its dimension always equals span_dim - reduced_dim.
    """

    dims: BipartiteDims
    span_basis: tuple[np.ndarray, ...]
    pairs: tuple[tuple[np.ndarray, np.ndarray], ...]
    kernel_basis: tuple[np.ndarray, ...]
    tol_rank: float

    @property
    def span_dim(self) -> int:
        return len(self.span_basis)

    @property
    def reduced_dim(self) -> int:
        return len(self.pairs)

    @property
    def kernel_dim(self) -> int:
        return len(self.kernel_basis)

    def expand_reduced(self, x: np.ndarray, tol: float | None = None) -> ReducedExpansion:
        """Expand a d_s x d_s operator over the independent reduced states.

        Solves the least-squares problem min || x - sum_i d_i rho_s_i || in
        Hilbert-Schmidt norm; complex coefficients are allowed.  Raises
        NotInSpanError when the max-norm residual exceeds ``tol`` (defaults
        to the subspace's rank tolerance).
        """
        if tol is None:
            tol = self.tol_rank
        x = np.asarray(x, dtype=complex)
        d_s = self.dims.d_s
        if x.shape != (d_s, d_s):
            raise DimensionError(f"expected a {d_s}x{d_s} operator, got shape {x.shape}")
        cols = np.column_stack([basis_coords(red, d_s) for red, _ in self.pairs])
        b = basis_coords(x, d_s)
        d, *_ = np.linalg.lstsq(cols, b, rcond=None)
        recon = sum(di * red for di, (red, _) in zip(d, self.pairs))
        remainder = x - recon
        residual = max_norm(remainder)
        if residual > tol:
            raise NotInSpanError(
                f"operator lies outside the reduced span: residual {residual:.3e} > {tol:.3e}",
                residual=residual,
            )
        return ReducedExpansion(
            coefficients=frozen(d), remainder=frozen(remainder), residual=residual
        )


def _select_pairs(ops, dims: BipartiteDims, tol_rank: float):
    """Greedy scan, in input order, for reduced operators that grow the rank."""
    pairs = []
    kept_rows = []
    for op in ops:
        red = partial_trace_env(op, dims)
        c = basis_coords(red, dims.d_s).real
        n = np.linalg.norm(c)
        if n <= tol_rank:
            continue
        row = c / n
        candidate = np.vstack(kept_rows + [row]) if kept_rows else row[None, :]
        if np.linalg.svd(candidate, compute_uv=False)[-1] > tol_rank:
            pairs.append((frozen(red), frozen(np.asarray(op, dtype=complex))))
            kept_rows.append(row)
        if len(pairs) == dims.d_s * dims.d_s:
            break
    return tuple(pairs)


def select_independent(family: StateFamily, tol_rank: float = DEFAULT_TOL.rank):
    """Maximal independent set of reduced states, scanned in family order.

    Returns (reduced, joint) matrix pairs.  A candidate joins when stacking
    its unit-normalized reduced coordinates keeps the smallest singular value
    of the pile above ``tol_rank``.
    """
    return _select_pairs(family.members, family.dims, tol_rank)


def build_subspace_from_operators(
    ops,
    dims: BipartiteDims,
    tol_rank: float = DEFAULT_TOL.rank,
) -> Subspace:
    """Span construction for arbitrary Hermitian joint operators.

    Same machinery as :func:`build_subspace` but without density-matrix
    validation, so callers can hand in a custom operator subspace directly.
    """
    ops = [np.asarray(op, dtype=complex) for op in ops]
    if not ops:
        raise DimensionError("need at least one operator to span a subspace")
    d_j = dims.joint
    for idx, op in enumerate(ops):
        if op.shape != (d_j, d_j):
            raise DimensionError(f"operator {idx} has shape {op.shape}, expected ({d_j}, {d_j})")

    rows = []
    for op in ops:
        c = basis_coords(op, d_j).real
        n = np.linalg.norm(c)
        if n > 0:
            rows.append(c / n)
    if not rows:
        raise DimensionError("all supplied operators are zero")
    _, svals, vt = np.linalg.svd(np.array(rows), full_matrices=False)
    r = int(np.sum(svals > tol_rank))
    span_basis = tuple(frozen(from_basis_coords(vt[i].astype(complex), d_j)) for i in range(r))

    pairs = _select_pairs(ops, dims, tol_rank)

    # Kernel: combinations of span elements annihilated by the partial trace.
    t = np.array([basis_coords(partial_trace_env(e, dims), dims.d_s).real for e in span_basis])
    u, svals_t, _ = np.linalg.svd(t, full_matrices=True)
    rank_t = int(np.sum(svals_t > tol_rank))
    kernel_basis = tuple(
        frozen(sum(u[i, j] * span_basis[i] for i in range(r)))
        for j in range(rank_t, r)
    )

    if rank_t != len(pairs):
        raise RdlError(
            f"rank bookkeeping disagrees: partial-trace image has rank {rank_t} "
            f"but the greedy scan found {len(pairs)} independent reduced operators; "
            f"the input sits too close to the rank tolerance {tol_rank:.1e}"
        )

    return Subspace(
        dims=dims,
        span_basis=span_basis,
        pairs=pairs,
        kernel_basis=kernel_basis,
        tol_rank=tol_rank,
    )


def build_subspace(family: StateFamily, tol_rank: float = DEFAULT_TOL.rank) -> Subspace:
    """Span of the family, independent reduced pairs, and the traceless kernel."""
    return build_subspace_from_operators(family.members, family.dims, tol_rank)
