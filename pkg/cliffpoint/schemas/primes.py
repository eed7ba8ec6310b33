"""
Schemas for primes in arithmetic progressions and cutoff estimates.
"""

import math
from typing import Optional

from mpmath import mpf
from pydantic import BaseModel, Field, validator


class APClass(BaseModel):
    """Residue class p = a (mod q) with gcd(a, q) = 1."""
    q: int = Field(ge=2, description="Modulus")
    a: int = Field(ge=1, description="Residue, 1 <= a < q")

    class Config:
        frozen = True

    @validator("a")
    def validate_residue(cls, v, values):
        q = values.get("q")
        if q is None:
            return v
        if v >= q:
            raise ValueError(f"residue {v} must be below the modulus {q}")
        if math.gcd(v, q) != 1:
            raise ValueError(f"gcd({v}, {q}) != 1: the progression holds at most one prime")
        return v

    def contains(self, n: int) -> bool:
        return n % self.q == self.a

    def label(self) -> str:
        return f"({self.q},{self.a})"


class MertensEstimate(BaseModel):
    """Estimate of M(q,a) from a reciprocal sum: recip_sum - loglog(x)/phi(q)."""
    ap: APClass = Field(description="Progression")
    x: int = Field(ge=3, description="Summation limit")
    value: mpf = Field(description="Estimated M(q,a)")
    recip_sum: mpf = Field(description="Sum of 1/p over p <= x in the progression")
    loglog_x: mpf = Field(description="log log x")
    phi_q: int = Field(ge=1, description="Euler phi of q")
    prime_count: int = Field(ge=0, description="Primes summed")
    digits: int = Field(description="Working precision in decimal digits")

    class Config:
        frozen = True
        arbitrary_types_allowed = True


class CutoffEstimate(BaseModel):
    """
    Where the sum of 1/p over a progression first reaches 2*pi, estimated
    by dropping the o(1) term of the Mertens-type asymptotic.

    x = exp(exp(loglog_x)) is the prime bound and N0 ~ x / (phi(q) log x)
    the number of terms summed.
    """
    ap: Optional[APClass] = Field(default=None, description="Progression; None for all primes")
    label: Optional[str] = Field(default=None, description="Worked example label")
    phi_q: int = Field(ge=1, description="Density denominator")
    mqa_used: mpf = Field(description="Mertens-type constant used")
    loglog_x: mpf = Field(description="phi(q) * (2*pi - M)")
    log_x: mpf = Field(description="exp(loglog_x)")
    log10_x: mpf = Field(description="log10 of the prime bound")
    x_leading: mpf = Field(description="Mantissa of x")
    x_exponent: int = Field(description="floor(log10 x)")
    log10_N0: mpf = Field(description="log10 of the term count")
    N0_leading: mpf = Field(description="Mantissa of N0")
    N0_exponent: int = Field(description="floor(log10 N0)")
    digits: int = Field(description="Working precision in decimal digits")
    rigorous: bool = Field(default=False, description="Always False: the o(1) term is dropped")

    class Config:
        frozen = True
        arbitrary_types_allowed = True
