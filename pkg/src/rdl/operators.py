"""Dense operator plumbing: tensor products, partial traces, Hermitian bases.

Everything works on plain complex ndarrays.  Bipartite matrices follow the
system-major index convention: the joint basis vector |i>_S |k>_E sits at
row i * d_e + k, so the system index is the slow one.  All Hilbert-Schmidt
inner products are tr(A^dag B).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import DimensionError, HermiticityError, NotAStateError, UnitarityError


def frozen(a: np.ndarray) -> np.ndarray:
    """Copy ``a`` into a read-only array (shared values stay immutable)."""
    out = np.array(a)
    out.setflags(write=False)
    return out


SIGMA_X = frozen(np.array([[0, 1], [1, 0]], dtype=complex))
SIGMA_Y = frozen(np.array([[0, -1j], [1j, 0]], dtype=complex))
SIGMA_Z = frozen(np.array([[1, 0], [0, -1]], dtype=complex))
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


@dataclass(frozen=True)
class BipartiteDims:
    """System and environment dimensions of a bipartite operator."""

    d_s: int
    d_e: int

    def __post_init__(self):
        if not (isinstance(self.d_s, int) and isinstance(self.d_e, int)):
            raise DimensionError(f"dimensions must be integers, got {self.d_s!r}, {self.d_e!r}")
        if self.d_s < 2:
            raise DimensionError(f"system dimension must be at least 2, got {self.d_s}")
        if self.d_e < 1:
            raise DimensionError(f"environment dimension must be at least 1, got {self.d_e}")

    @property
    def joint(self) -> int:
        return self.d_s * self.d_e


def max_norm(x: np.ndarray) -> float:
    """Largest absolute entry of ``x`` (0.0 for empty input)."""
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product tr(a^dag b)."""
    return complex(np.trace(a.conj().T @ b))


def hs_norm(a: np.ndarray) -> float:
    return float(np.sqrt(abs(hs_inner(a, a))))


def _require_square(x: np.ndarray, what: str = "matrix") -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise DimensionError(f"{what} must be square, got shape {x.shape}")
    return x


def is_hermitian(x: np.ndarray, tol: float = DEFAULT_TOL.herm) -> bool:
    x = np.asarray(x)
    return x.ndim == 2 and x.shape[0] == x.shape[1] and max_norm(x - x.conj().T) <= tol


def require_hermitian(x: np.ndarray, tol: float = DEFAULT_TOL.herm, what: str = "matrix") -> np.ndarray:
    x = _require_square(x, what)
    dev = max_norm(x - x.conj().T)
    if dev > tol:
        raise HermiticityError(f"{what} is not Hermitian: max |X - X^dag| = {dev:.3e} > {tol:.3e}")
    return x


def is_unitary(u: np.ndarray, tol: float = DEFAULT_TOL.unitary) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return max_norm(u.conj().T @ u - np.eye(u.shape[0])) <= tol


def require_unitary(u: np.ndarray, tol: float = DEFAULT_TOL.unitary, what: str = "matrix") -> np.ndarray:
    u = _require_square(u, what)
    dev = max_norm(u.conj().T @ u - np.eye(u.shape[0]))
    if dev > tol:
        raise UnitarityError(f"{what} is not unitary: max |U^dag U - I| = {dev:.3e} > {tol:.3e}")
    return u


def min_eigenvalue(h: np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    return float(np.linalg.eigvalsh(h)[0])


def require_density(rho: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL, what: str = "state") -> np.ndarray:
    """Validate that ``rho`` is a density matrix within tolerance.

    Checks Hermiticity, unit trace, and positive semidefiniteness, raising
    HermiticityError or NotAStateError accordingly.  Returns the validated
    array as complex ndarray.
    """
    rho = require_hermitian(rho, tol.herm, what)
    tr_dev = abs(np.trace(rho) - 1.0)
    if tr_dev > tol.trace:
        raise NotAStateError(f"{what} has trace {complex(np.trace(rho)):.6g}, expected 1")
    lo = min_eigenvalue(rho)
    if lo < -tol.psd:
        raise NotAStateError(
            f"{what} is not positive semidefinite: min eigenvalue {lo:.3e}",
            min_eigenvalue=lo,
        )
    return rho


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor (Kronecker) product with the first factor index slow.

    (A (x) B)[(i * d_b + k), (j * d_b + l)] = A[i, j] * B[k, l].
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or b.ndim != 2:
        raise DimensionError(f"tensor expects two matrices, got shapes {a.shape}, {b.shape}")
    return np.kron(a, b)


def partial_trace_env(x: np.ndarray, dims: BipartiteDims) -> np.ndarray:
    """Trace out the environment factor of a joint operator.

    Y[i, j] = sum_k X[(i * d_e + k), (j * d_e + k)].
    """
    x = _require_square(x, "joint operator")
    if x.shape[0] != dims.joint:
        raise DimensionError(
            f"joint operator has side {x.shape[0]}, expected d_s * d_e = {dims.joint}"
        )
    x4 = x.reshape(dims.d_s, dims.d_e, dims.d_s, dims.d_e)
    return np.einsum("ikjk->ij", x4)


def adjoint_action(u: np.ndarray, x: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Conjugation U X U^dag, with ``u`` validated as unitary."""
    u = require_unitary(u, tol.unitary, "propagator")
    x = _require_square(x, "operator")
    if x.shape != u.shape:
        raise DimensionError(f"operator shape {x.shape} does not match propagator {u.shape}")
    return u @ x @ u.conj().T


@functools.lru_cache(maxsize=None)
def hermitian_basis(d: int) -> tuple[np.ndarray, ...]:
    """Orthonormal Hermitian basis of d x d operators under tr(A B).

    Element 0 is I/sqrt(d); the remaining d^2 - 1 elements are traceless:
    symmetric off-diagonal pairs, then antisymmetric pairs, then diagonal
    elements.  For d = 2 this is exactly (I, sigma_x, sigma_y, sigma_z)
    divided by sqrt(2).
    """
    if d < 1:
        raise DimensionError(f"basis dimension must be positive, got {d}")
    mats = [np.eye(d, dtype=complex) / np.sqrt(d)]
    for k in range(1, d):
        for j in range(k):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = m[k, j] = 1 / np.sqrt(2)
            mats.append(m)
    for k in range(1, d):
        for j in range(k):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j / np.sqrt(2)
            m[k, j] = 1j / np.sqrt(2)
            mats.append(m)
    for ell in range(1, d):
        diag = np.zeros(d)
        diag[:ell] = 1.0
        diag[ell] = -float(ell)
        mats.append(np.diag(diag).astype(complex) / np.sqrt(ell * (ell + 1)))
    return tuple(frozen(m) for m in mats)


@functools.lru_cache(maxsize=None)
def _basis_stack(d: int) -> np.ndarray:
    return frozen(np.stack(hermitian_basis(d)))


def basis_coords(x: np.ndarray, d: int) -> np.ndarray:
    """Coordinates of ``x`` in hermitian_basis(d): c_k = tr(B_k x).

    Hermitian input gives real coordinates (up to roundoff).
    """
    x = _require_square(x, "operator")
    if x.shape[0] != d:
        raise DimensionError(f"operator has side {x.shape[0]}, expected {d}")
    return np.einsum("kij,ji->k", _basis_stack(d), x)


def from_basis_coords(c: np.ndarray, d: int) -> np.ndarray:
    """Inverse of :func:`basis_coords`."""
    c = np.asarray(c, dtype=complex)
    if c.shape != (d * d,):
        raise DimensionError(f"coordinate vector has shape {c.shape}, expected ({d * d},)")
    return np.einsum("k,kij->ij", c, _basis_stack(d))


def trace_distance(rho: np.ndarray, sigma: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Trace distance (1/2) sum_i |lambda_i(rho - sigma)| between Hermitian operators."""
    rho = require_hermitian(rho, tol.herm, "first argument")
    sigma = require_hermitian(sigma, tol.herm, "second argument")
    if rho.shape != sigma.shape:
        raise DimensionError(f"shape mismatch: {rho.shape} vs {sigma.shape}")
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(rho - sigma))))
