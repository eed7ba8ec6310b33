"""
Precision context schema shared by every numeric service.
"""

from contextlib import AbstractContextManager
from typing import Any

from mpmath import mp, mpf
from pydantic import BaseModel, Field

from ..constants import DEFAULT_DIGITS, GUARD_DIGITS, MIN_DIGITS

# Arbitrary-precision real; values carry the precision they were computed at.
BigReal = mpf


class PrecisionContext(BaseModel):
    """Decimal working precision for a computation."""
    digits: int = Field(default=DEFAULT_DIGITS, ge=MIN_DIGITS, description="Decimal digits of working precision")

    class Config:
        frozen = True

    def activate(self, extra: int = 0) -> AbstractContextManager[Any]:
        """Run a block at this precision plus `extra` digits."""
        return mp.workdps(self.digits + extra)

    def guarded(self) -> AbstractContextManager[Any]:
        return self.activate(GUARD_DIGITS)

    def raised_to(self, digits: int) -> "PrecisionContext":
        """Context with at least `digits` digits."""
        if digits <= self.digits:
            return self
        return PrecisionContext(digits=digits)

    def with_extra(self, extra: int) -> "PrecisionContext":
        return PrecisionContext(digits=self.digits + extra)

    def tolerance(self) -> mpf:
        """Agreement tolerance 10^(-digits+10) used by the invariants."""
        with self.activate():
            return mp.mpf(10) ** (GUARD_DIGITS - self.digits)

    def round(self, value: Any) -> mpf:
        """Round a value to this context's precision."""
        with self.activate():
            return +mp.mpf(value)
