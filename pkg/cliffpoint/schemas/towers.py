"""
Schemas for huge numbers in level-index form exp^h(f).
"""

from functools import total_ordering
from typing import Dict, List

from mpmath import mp, mpf
from pydantic import BaseModel, Field, validator


@total_ordering
class TowerReal(BaseModel):
    """
    The number exp^h(f): f with the natural exponential applied h times.

    The top is kept in [0, 1), which makes the ordering lexicographic
    on (height, top).
    """
    height: int = Field(ge=0, description="Number of exponentials h")
    top: mpf = Field(description="Top value f in [0, 1)")

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @validator("top", pre=True)
    def validate_top(cls, v):
        if not isinstance(v, mpf):
            v = mp.mpf(v)
        if not mp.isfinite(v):
            raise ValueError("tower top must be finite")
        if v < 0:
            raise ValueError(f"tower top must be nonnegative, got {mp.nstr(v, 10)}")
        if v >= 1:
            raise ValueError(f"tower top must be below 1, got {mp.nstr(v, 10)}; use normalize")
        return v

    def __lt__(self, other: "TowerReal") -> bool:
        if not isinstance(other, TowerReal):
            return NotImplemented
        return (self.height, self.top) < (other.height, other.top)

    def describe(self, places: int = 6) -> str:
        """exp^h(f) with f to `places` significant digits."""
        return f"exp^{self.height}({mp.nstr(self.top, places)})"


class NamedConstants(BaseModel):
    """Skewes numbers and the largest known prime as towers."""
    S1: TowerReal = Field(description="exp(exp(exp(79)))")
    S2: TowerReal = Field(description="exp(exp(exp(exp(7.705))))")
    P: TowerReal = Field(description="2^43112609 - 1")
    log10_P: mpf = Field(description="log10 P")
    ln_P: mpf = Field(description="ln P")
    P_digits: int = Field(description="Decimal digits of P")
    bays_hudson: mpf = Field(description="Location of the first known pi(x) > li(x) crossing region")

    class Config:
        frozen = True
        arbitrary_types_allowed = True


class SkewesReport(BaseModel):
    """Comparison of the Skewes numbers with the progression mod the largest known prime."""
    constants: NamedConstants = Field(description="Towers compared")
    N0: TowerReal = Field(description="exp(exp(P)), the term count for q = P")
    S1_vs_S2: str = Field(description="Ordering of S1 against S2")
    N0_vs_S2: str = Field(description="Ordering of N0 against S2")
    loglog_S2: mpf = Field(description="log log S2")
    log3_S2: mpf = Field(description="log log log S2")
    log3_P: mpf = Field(description="log log log P")
    log3_P_exceeds_e: bool = Field(description="log log log P > e, so N0 > exp^5(e)")
    S2_top: mpf = Field(description="f with S2 = exp^5(f)")
    N0_top: mpf = Field(description="e, with N0 ~ exp^5(e)")
    ratio: mpf = Field(description="N0_top / S2_top")
    log4_S2: mpf = Field(description="Level-4 entry log^4 S2 = exp(S2_top)")
    log4_N0: mpf = Field(description="Level-4 entry log^4 N0")
    log4_N0_bound: mpf = Field(description="(log^4 S2)^ratio = exp(e), the level-4 form of N0 ~ S2^ratio")
    level4_relation_holds: bool = Field(description="log^4 N0 >= (log^4 S2)^ratio")
    log10_log10_P: mpf = Field(description="log10 log10 P")
    heuristic: bool = Field(default=True, description="M(q,1) = 0 is assumed")

    class Config:
        frozen = True
        arbitrary_types_allowed = True


class Section8Report(BaseModel):
    """Cutoff for the progression with modulus q = P^P, in the log domain."""
    log10_log10_q: mpf = Field(description="log10 log10 q = log10(P log10 P)")
    log3_N0: TowerReal = Field(description="log log log N0 ~ P log P")
    log10_log3_N0: mpf = Field(description="log10 of log^3 N0")
    log3_exceeds: bool = Field(description="log^3 N0 > 10^(10^7) * 10^7")
    log4_N0: mpf = Field(description="log^4 N0")
    log5_N0: mpf = Field(description="log^5 N0")
    log5_exceeds_16_95: bool = Field(description="log^5 N0 > 16.95")
    e_to_e: mpf = Field(description="e^e")
    N0: TowerReal = Field(description="N0 as a tower")
    tower_of_e: TowerReal = Field(description="exp^6(e)")
    N0_vs_tower_of_e: str = Field(description="Ordering of N0 against exp^6(e)")
    phi_proportion: mpf = Field(description="phi(q)/q = 1 - 1/P")
    log10_one_minus_proportion: mpf = Field(description="log10(1/P)")
    heuristic: bool = Field(default=True, description="M(q,1) = 0 is assumed")

    class Config:
        frozen = True
        arbitrary_types_allowed = True


class LemmaReport(BaseModel):
    """Numerical checks of the inequalities behind the tower comparisons."""
    ratio_root: mpf = Field(description="Root of e^(pi t) - pi t - e^(2t) in (0.2, 1)")
    ratio_checks: Dict[str, bool] = Field(description="e^(pi t) - pi t > e^(2t) at each t")
    doubling_threshold: mpf = Field(description="log 2")
    doubling_checks: Dict[str, bool] = Field(description="exp(exp(2y)) > exp(exp(y))^2 at each y")
    quotient_checks: Dict[str, bool] = Field(description="exp(exp(2t))/(t-1) > exp(exp(t)) at each t")
    failures: List[str] = Field(default_factory=list, description="Points where a check failed")

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    def all_hold(self) -> bool:
        return not self.failures
