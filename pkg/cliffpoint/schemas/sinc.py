"""
Schemas for the sinc sum/integral identity and its box-density engine.
"""

from fractions import Fraction
from typing import Any, List, Optional, Tuple

from mpmath import mp, mpf
from pydantic import BaseModel, Field, validator


def exact_fraction(value: Any) -> Fraction:
    """Exact rational value of an int, str, float, Fraction or mpf."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, float)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, mpf):
        if not mp.isfinite(value):
            raise ValueError("width must be finite")
        man, exp = value.man_exp
        return Fraction(man) * Fraction(2) ** exp
    raise TypeError(f"cannot use {type(value).__name__} as an exact real")


class SincSequence(BaseModel):
    """Widths a_0, ..., a_N of the sinc factors sinc(a_k x)."""
    a: List[Fraction] = Field(description="Positive widths, stored as exact rationals")

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @validator("a", pre=True)
    def coerce_widths(cls, v):
        if isinstance(v, (str, bytes)) or not hasattr(v, "__iter__"):
            raise ValueError("widths must be a list")
        widths = [exact_fraction(x) for x in v]
        if not widths:
            raise ValueError("a sinc sequence needs at least one width")
        for w in widths:
            if w <= 0:
                raise ValueError(f"widths must be positive, got {w}")
        return widths

    @property
    def N(self) -> int:
        return len(self.a) - 1

    def total(self) -> Fraction:
        """Sum of all widths."""
        return sum(self.a, Fraction(0))

    def product(self) -> Fraction:
        result = Fraction(1)
        for w in self.a:
            result *= w
        return result

    def extended(self, width: Any) -> "SincSequence":
        return SincSequence(a=list(self.a) + [width])


class PiecewisePoly(BaseModel):
    """
    Compactly supported piecewise polynomial.

    pieces[i] holds the coefficients (constant term first) of the polynomial
    in the global variable t on [breakpoints[i], breakpoints[i+1]]; the value
    is 0 outside [breakpoints[0], breakpoints[-1]].
    """
    breakpoints: List[Fraction] = Field(description="Strictly increasing knots")
    pieces: List[List[Fraction]] = Field(description="Per-interval coefficient lists")

    class Config:
        frozen = True
        arbitrary_types_allowed = True

    @validator("breakpoints")
    def validate_breakpoints(cls, v):
        if len(v) < 2:
            raise ValueError("a piecewise polynomial needs at least two knots")
        for left, right in zip(v, v[1:]):
            if not left < right:
                raise ValueError("knots must be strictly increasing")
        return v

    @validator("pieces")
    def validate_pieces(cls, v, values):
        knots = values.get("breakpoints")
        if knots is not None and len(v) != len(knots) - 1:
            raise ValueError(f"expected {len(knots) - 1} pieces, got {len(v)}")
        return v

    def support(self) -> Tuple[Fraction, Fraction]:
        return self.breakpoints[0], self.breakpoints[-1]

    @property
    def degree(self) -> int:
        return max(len(c) for c in self.pieces) - 1

    @property
    def piece_count(self) -> int:
        return len(self.pieces)


class IdentityReport(BaseModel):
    """Both sides of the sinc sum/integral identity for one sequence."""
    length: int = Field(ge=1, description="Number of widths")
    total_width: mpf = Field(description="Sum of the widths")
    condition_holds: bool = Field(description="Sum of the widths <= 2*pi")
    lhs: mpf = Field(description="1/2 + sum_{n>=1} prod sinc(a_k n)")
    rhs: mpf = Field(description="integral_0^inf prod sinc(a_k x) dx")
    difference: mpf = Field(description="lhs - rhs")
    lhs_direct: Optional[mpf] = Field(default=None, description="Truncated direct sum, when feasible")
    method_agreement: Optional[mpf] = Field(default=None, description="|direct - exact| for the left side")
    direct_terms: Optional[int] = Field(default=None, description="Terms used by the direct sum")
    direct_tolerance: mpf = Field(description="Tail tolerance asked of the direct sum")
    direct_skipped: Optional[str] = Field(default=None, description="Why the direct cross-check did not run")
    digits: int = Field(description="Working precision in decimal digits")

    class Config:
        frozen = True
        arbitrary_types_allowed = True
