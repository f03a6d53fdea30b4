"""Exception types shared across the toolkit."""


class RdlError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(RdlError):
    """Operands have incompatible, non-square, or otherwise wrong shapes."""


class UnitarityError(RdlError):
    """A matrix that should be unitary is not, within tolerance."""


class HermiticityError(RdlError):
    """A matrix that should be Hermitian is not, within tolerance."""


class NotAStateError(RdlError):
    """A matrix fails the density-matrix checks (Hermitian, unit trace, positive).

    ``min_eigenvalue`` carries the offending eigenvalue when positivity is what
    failed, and is None otherwise.
    """

    def __init__(self, message: str, min_eigenvalue: float | None = None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class EmptyFamilyError(RdlError):
    """A state family ended up with no members."""


class NotInSpanError(RdlError):
    """An operator lies outside the span it was asked to be expanded in."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class SingularSystemError(RdlError):
    """A linear solve hit a numerically singular coefficient matrix."""


class SamplingExhaustedError(RdlError):
    """Random sampling failed to produce a single usable draw."""


class IncompleteDomainError(RdlError):
    """A map defined only on a proper subspace was requested on the full space."""
