"""Free constants of the theory.

xi couples the two degenerate inner products into the nondegenerate one;
varsigma is the constant in the fifth connection rule; k parametrizes the
Lie-derivative convention for lower indices (the distinguished value is -1).
``mode`` selects the coefficient b of the algebraic operator part: b = 1 for
dimensionless curve parameters, b = varsigma for dimensional ones.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["Constants"]


@dataclass(frozen=True)
class Constants:
    xi: float = 1.0
    varsigma: float = 1.0
    k: float = -1.0
    mode: str = "dimensionless"

    def __post_init__(self):
        if self.xi == 0.0:
            raise ValueError("xi must be nonzero")
        if self.varsigma == 0.0:
            raise ValueError("varsigma must be nonzero")
        if self.mode not in ("dimensionless", "dimensional"):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def fifth_coefficient(self) -> float:
        """Coefficient b of the lambda term in the operator correspondence."""
        return 1.0 if self.mode == "dimensionless" else self.varsigma

    @property
    def root_xi(self) -> float:
        return abs(self.xi) ** 0.5
