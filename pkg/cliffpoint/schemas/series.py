"""
Schemas for threshold crossings of the series sum 1/(m*k + c).
"""

from typing import Optional

from mpmath import mpf
from pydantic import BaseModel, Field

from ..constants import MARGIN_SAFETY_FACTOR
from .numerics import PrecisionContext


class SeriesSpec(BaseModel):
    """Series with terms f(k) = 1/(m*k + c), k = 0, 1, 2, ..."""
    m: int = Field(ge=1, description="Step of the denominators")
    c: int = Field(default=1, ge=1, description="Offset of the denominators")

    class Config:
        frozen = True

    def term(self, k: int) -> int:
        """Denominator of the k-th term."""
        return self.m * k + self.c

    def shifted(self, K: int) -> "SeriesSpec":
        """Tail after K directly summed terms: f(x) = 1/(m*x + K*m + c)."""
        return SeriesSpec(m=self.m, c=K * self.m + self.c)


class EMParams(BaseModel):
    """Euler-Maclaurin solve parameters."""
    K: int = Field(ge=0, description="Initial terms summed directly")
    J: int = Field(ge=1, description="Number of B_2j correction terms")
    threshold: Optional[mpf] = Field(default=None, description="Crossing threshold; 2*pi when unset")
    ctx: PrecisionContext = Field(default_factory=PrecisionContext, description="Working precision")
    safety_factor: int = Field(
        default=MARGIN_SAFETY_FACTOR,
        ge=1,
        description="Margin, in remainder bounds, below which the crossing is re-certified",
    )

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    def doubled(self) -> "EMParams":
        """Stability variant: twice the initial terms, two more corrections."""
        return EMParams(
            K=2 * self.K,
            J=self.J + 2,
            threshold=self.threshold,
            ctx=self.ctx,
            safety_factor=self.safety_factor,
        )


class CrossingChecks(BaseModel):
    """The four verification checks of a crossing candidate."""
    below_threshold: bool = Field(description="(1) estimated sum < threshold")
    next_term_crosses: bool = Field(description="(2) estimated sum + next term > threshold")
    bound_below_term: bool = Field(description="(3) remainder bound < next term")
    bound_below_margin: bool = Field(description="(4) remainder bound < threshold - estimated sum")

    class Config:
        frozen = True

    def all_passed(self) -> bool:
        return (
            self.below_threshold
            and self.next_term_crosses
            and self.bound_below_term
            and self.bound_below_margin
        )


class CrossingResult(BaseModel):
    """Largest total index M with partial sum through M below the threshold."""
    spec: SeriesSpec = Field(description="Series that was solved")
    K: int = Field(ge=0, description="Initial terms summed directly")
    J: int = Field(ge=0, description="Euler-Maclaurin order (0 for a direct scan)")
    M: int = Field(ge=0, description="Largest index with partial sum < threshold")
    tail_M: int = Field(ge=0, description="Index within the Euler-Maclaurin tail")
    M_real: Optional[mpf] = Field(default=None, description="Real solution of the tail equation")
    threshold: mpf = Field(description="Threshold that was crossed")
    sum_estimate: mpf = Field(description="Estimated sum_{k=0}^{M} f(k)")
    remainder_bound: mpf = Field(description="Bound on the Euler-Maclaurin remainder")
    margin: mpf = Field(description="threshold - sum_estimate")
    next_term: mpf = Field(description="f(M + 1)")
    checks: CrossingChecks = Field(description="Verification checks")
    digits: int = Field(description="Working precision in decimal digits")
    method: str = Field(default="euler_maclaurin", description="euler_maclaurin or direct")
    recertified: bool = Field(default=False, description="Tight margin confirmed at doubled K and J + 2")

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @property
    def rigorous(self) -> bool:
        return self.checks.all_passed()
