"""
Arbitrary-precision substrate: exact Bernoulli numbers, constants, the
digamma oracle and the fixed-point summation shared by the series modules.

All mpmath work happens inside `PrecisionContext.activate()`; results are
rounded to the caller's context before they are returned.
"""

import logging
import math
import threading
from fractions import Fraction
from typing import Callable, Iterable, List, Union

from mpmath import mp, mpf

from ..constants import GUARD_DIGITS, MERTENS_B
from ..schemas.numerics import BigReal, PrecisionContext

logger = logging.getLogger(__name__)

# Exact integer fraction in lowest terms with a positive denominator.
BigRational = Fraction

RealLike = Union[int, str, Fraction, mpf]

_LOG2_10 = math.log2(10)


class NumericsError(Exception):
    """Base exception for numeric substrate errors."""
    pass

class DomainError(NumericsError, ValueError):
    """Raised when an argument lies outside a function's domain."""
    pass

class PrecisionError(NumericsError):
    """Raised when a computation cannot reach the requested precision."""
    pass


# ============================================================================
# BERNOULLI NUMBERS
# ============================================================================

_bernoulli_table: List[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli(n: int) -> BigRational:
    """
    Exact Bernoulli number B_n with B_1 = -1/2.

    Extends a memoized table with the recurrence
    sum_{j=0}^{n} C(n+1, j) B_j = 0.
    """
    if n < 0:
        raise DomainError(f"Bernoulli index must be nonnegative, got {n}")
    if n >= 3 and n % 2 == 1:
        return Fraction(0)
    with _bernoulli_lock:
        table = _bernoulli_table
        while len(table) <= n:
            k = len(table)
            if k >= 3 and k % 2 == 1:
                table.append(Fraction(0))
                continue
            s = sum((math.comb(k + 1, j) * table[j] for j in range(k)), Fraction(0))
            table.append(-s / (k + 1))
        return table[n]


def to_mpf(value: RealLike) -> mpf:
    """Convert an int, decimal string, Fraction or mpf at the current precision."""
    if isinstance(value, Fraction):
        return mp.mpf(value.numerator) / value.denominator
    return mp.mpf(value)


# ============================================================================
# CONSTANTS
# ============================================================================

def const_two_pi(ctx: PrecisionContext) -> BigReal:
    """2*pi to ctx.digits."""
    with ctx.activate():
        return 2 * mp.pi


def const_mertens_B(ctx: PrecisionContext) -> BigReal:
    """Meissel-Mertens constant, from a stored 50-digit literal."""
    with ctx.activate():
        return mp.mpf(MERTENS_B)


def const_euler_gamma(ctx: PrecisionContext) -> BigReal:
    with ctx.activate():
        return +mp.euler


# ============================================================================
# DIGAMMA
# ============================================================================

def digamma(x: RealLike, ctx: PrecisionContext) -> BigReal:
    """
    psi(x) for x > 0.

    Shifts x above 10 + digits/2 with psi(x) = psi(x+1) - 1/x, then sums the
    asymptotic series log x - 1/(2x) - sum B_2k / (2k x^(2k)) until the
    next term drops below 10^-(digits + guard).
    """
    with ctx.guarded():
        x = to_mpf(x)
        if x <= 0:
            raise DomainError(f"digamma needs a positive argument, got {mp.nstr(x, 15)}")
        shift = mp.mpf(0)
        bound = 10 + ctx.digits // 2
        while x < bound:
            shift -= 1 / x
            x += 1
        eps = mp.mpf(10) ** (-(ctx.digits + GUARD_DIGITS))
        x2 = x * x
        power = x2
        total = mp.log(x) - 1 / (2 * x)
        k = 1
        while True:
            b = bernoulli(2 * k)
            term = to_mpf(b) / (2 * k * power)
            total -= term
            if abs(term) < eps:
                break
            k += 1
            if k > 4 * ctx.digits + 100:
                logger.error(f"digamma series stalled at x={mp.nstr(x, 10)}")
                raise PrecisionError("digamma asymptotic series did not converge")
            power *= x2
        result = total + shift
    return ctx.round(result)


# ============================================================================
# SUMMATION AND ROOT FINDING
# ============================================================================

def fixed_point_bits(ctx: PrecisionContext) -> int:
    """Binary fraction bits carrying ctx.digits plus guard digits."""
    return int(math.ceil((ctx.digits + GUARD_DIGITS) * _LOG2_10)) + 8


def fixed_point_reciprocal_sum(denominators: Iterable[int], ctx: PrecisionContext) -> BigReal:
    """
    Sum of 1/d over positive integers d, in the given order.

    Each term is floored to a fixed binary point carrying GUARD_DIGITS extra
    digits, so n terms lose at most n units in the last guard place.
    """
    bits = fixed_point_bits(ctx)
    one = 1 << bits
    acc = 0
    for d in denominators:
        acc += one // d
    with ctx.activate():
        return mp.ldexp(mp.mpf(acc), -bits)


def bisect_increasing(
    fn: Callable[[mpf], mpf],
    lo: mpf,
    hi: mpf,
    width: mpf,
    max_steps: int = 100_000,
) -> mpf:
    """
    Root of an increasing function bracketed by fn(lo) <= 0 < fn(hi).

    Halves the bracket until it is narrower than `width` and returns the
    lower end.
    """
    steps = 0
    while hi - lo >= width:
        mid = (lo + hi) / 2
        if fn(mid) > 0:
            hi = mid
        else:
            lo = mid
        steps += 1
        if steps > max_steps:
            raise PrecisionError("bisection did not narrow the bracket")
    logger.debug(f"bisection finished after {steps} steps")
    return lo
