"""Shared numerical tolerance settings."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class ToleranceConfig:
    """Thresholds used by every validation and verdict in the package.

    All checks route through one of these fields so that a single config value
    can tighten or loosen the whole pipeline at once.
    """

    herm: float = 1e-9  # max-norm bound on X - X^dag
    trace: float = 1e-9  # |tr(rho) - 1| bound
    unitary: float = 1e-9  # max-norm bound on U^dag U - I
    psd: float = 1e-9  # eigenvalue floor: min eig >= -psd
    rank: float = 1e-8  # singular-value cutoff for rank and span membership
    consistency: float = 1e-8  # marginal-equality violation threshold

    def override_all(self, value: float) -> ToleranceConfig:
        """Return a copy with every threshold replaced by ``value``."""
        if not value > 0:
            raise ValueError(f"tolerance override must be positive, got {value}")
        return ToleranceConfig(
            **{f.name: float(value) for f in dataclasses.fields(self)}
        )


DEFAULT_TOL = ToleranceConfig()
