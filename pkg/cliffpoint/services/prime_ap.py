"""
Reciprocal sums of primes in arithmetic progressions, Mertens-type constant
estimates and the cutoff where those sums reach 2*pi.

Dropping the o(1) term of

    sum_{p <= x, p = a (mod q)} 1/p = log log x / phi(q) + M(q,a) + o(1)

and setting the left side to 2*pi gives log log x = phi(q) (2*pi - M(q,a)).
The number of terms is then about x / (phi(q) log x). None of these
estimates is rigorous.
"""

import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from mpmath import mp

from ..constants import (
    CUTOFF_EXAMPLES,
    CUTOFF_GUARD_DIGITS,
    PUBLISHED_MQA,
)
from ..schemas.numerics import BigReal, PrecisionContext
from ..schemas.primes import APClass, CutoffEstimate, MertensEstimate
from .numerics import RealLike, const_mertens_B, fixed_point_reciprocal_sum, to_mpf
from .sieve import PrimeAPError, SieveCache, SieveLimitError

logger = logging.getLogger(__name__)


class CutoffDomainError(PrimeAPError):
    """The constant is too large for the sum to ever need to reach 2*pi."""
    pass


# ============================================================================
# ARITHMETIC
# ============================================================================

def factorize(n: int) -> Dict[int, int]:
    """Prime factorization by trial division."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    factors: Dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def euler_phi(q: int) -> int:
    """Euler's phi function."""
    if q < 1:
        raise ValueError(f"phi needs a positive argument, got {q}")
    result = q
    for p in factorize(q):
        result = result // p * (p - 1)
    return result


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def norton_limit(q: int, a: int) -> Fraction:
    """Limit of M(q,a) as q grows with a fixed: 1/a when a is prime, else 0."""
    APClass(q=q, a=a)
    return Fraction(1, a) if is_prime(a) else Fraction(0)


# ============================================================================
# RECIPROCAL SUMS
# ============================================================================

def _check_range(x: int, cache: SieveCache) -> None:
    if x > cache.limit:
        logger.error(f"x={x} exceeds the sieve limit {cache.limit}")
        raise SieveLimitError(f"x={x} exceeds the sieve limit {cache.limit}; sieve further first")


def progression_primes(ap: APClass, x: int, cache: SieveCache) -> List[int]:
    """Primes p <= x with p = a (mod q), increasing."""
    _check_range(x, cache)
    primes = cache.primes(x)
    return primes[primes % ap.q == ap.a].tolist()


def recip_sum_ap(ap: APClass, x: int, ctx: PrecisionContext, cache: SieveCache) -> BigReal:
    """sum of 1/p over primes p <= x with p = a (mod q), in increasing p."""
    return fixed_point_reciprocal_sum(progression_primes(ap, x, cache), ctx)


def recip_sum_all(x: int, ctx: PrecisionContext, cache: SieveCache) -> BigReal:
    _check_range(x, cache)
    return fixed_point_reciprocal_sum(cache.primes(x).tolist(), ctx)


def prime_residue_partition(q: int, x: int, ctx: PrecisionContext, cache: SieveCache) -> Tuple[BigReal, BigReal]:
    """
    (sum over coprime classes plus the primes dividing q, sum over all primes),
    both up to x. The two agree up to rounding.
    """
    if q < 2:
        raise ValueError(f"modulus must be at least 2, got {q}")
    parts = [recip_sum_ap(APClass(q=q, a=a), x, ctx, cache) for a in range(1, q) if math.gcd(a, q) == 1]
    divisors = [p for p in factorize(q) if p <= x]
    with ctx.activate():
        total = mp.fsum(parts) + fixed_point_reciprocal_sum(divisors, ctx)
    return ctx.round(total), recip_sum_all(x, ctx, cache)


def mertens_estimate(ap: APClass, x: int, ctx: PrecisionContext, cache: SieveCache) -> MertensEstimate:
    """M(q,a) ~ sum_{p <= x, p = a (q)} 1/p - log log x / phi(q)."""
    if x < 3:
        raise ValueError(f"x must be at least 3, got {x}")
    primes = progression_primes(ap, x, cache)
    recip = fixed_point_reciprocal_sum(primes, ctx)
    phi = euler_phi(ap.q)
    with ctx.activate():
        loglog = mp.log(mp.log(x))
        value = recip - loglog / phi
    logger.debug(f"M{ap.label()} at x={x}: {mp.nstr(value, 10)} from {len(primes)} primes")
    return MertensEstimate(
        ap=ap,
        x=x,
        value=value,
        recip_sum=recip,
        loglog_x=loglog,
        phi_q=phi,
        prime_count=len(primes),
        digits=ctx.digits,
    )


# ============================================================================
# CUTOFFS
# ============================================================================

def _cutoff(
    ap: Optional[APClass],
    phi: int,
    mqa: RealLike,
    ctx: PrecisionContext,
    label: Optional[str],
) -> CutoffEstimate:
    with mp.workdps(30):
        rough = phi * (2 * mp.pi - to_mpf(mqa))
        if rough <= 0:
            name = ap.label() if ap is not None else "all primes"
            logger.error(f"M={mqa} for {name} is not below 2*pi")
            raise CutoffDomainError(f"constant {mqa} must be below 2*pi")
        # floor(log10 N0) has about loglog_x / ln 10 digits.
        exponent_digits = int(rough / mp.log(10)) + 1
    work = ctx.raised_to(exponent_digits + CUTOFF_GUARD_DIGITS)
    with work.activate():
        m_value = to_mpf(mqa)
        loglog_x = phi * (2 * mp.pi - m_value)
        log_x = mp.exp(loglog_x)
        ln10 = mp.log(10)
        log10_x = log_x / ln10
        x_exponent = int(mp.floor(log10_x))
        x_leading = mp.power(10, log10_x - x_exponent)
        log10_N0 = (log_x - mp.log(phi) - mp.log(log_x)) / ln10
        N0_exponent = int(mp.floor(log10_N0))
        N0_leading = mp.power(10, log10_N0 - N0_exponent)
    logger.warning(
        f"cutoff {label or (ap.label() if ap else 'all primes')}: N0 ~ "
        f"{mp.nstr(N0_leading, 3)}e{N0_exponent} (estimate, not rigorous)"
    )
    return CutoffEstimate(
        ap=ap,
        label=label,
        phi_q=phi,
        mqa_used=m_value,
        loglog_x=loglog_x,
        log_x=log_x,
        log10_x=log10_x,
        x_leading=x_leading,
        x_exponent=x_exponent,
        log10_N0=log10_N0,
        N0_leading=N0_leading,
        N0_exponent=N0_exponent,
        digits=work.digits,
    )


def cutoff_from_mertens(
    ap: APClass,
    mqa: RealLike,
    ctx: PrecisionContext,
    label: Optional[str] = None,
) -> CutoffEstimate:
    """
    Cutoff for the progression from its constant M(q,a).

    Pass M as a decimal string to keep all of its digits; the working
    precision is raised until floor(log10 N0) is exact.
    """
    return _cutoff(ap, euler_phi(ap.q), mqa, ctx, label)


def all_primes_cutoff(ctx: PrecisionContext) -> CutoffEstimate:
    """Cutoff for the sum of 1/p over all primes, using Mertens' constant B."""
    B = const_mertens_B(ctx)
    return _cutoff(None, 1, B, ctx, "all primes")


def worked_examples(ctx: PrecisionContext) -> List[CutoffEstimate]:
    """Examples A-F from the published constants, followed by the all-primes case."""
    results = []
    for label, (q, a) in CUTOFF_EXAMPLES.items():
        results.append(cutoff_from_mertens(APClass(q=q, a=a), PUBLISHED_MQA[(q, a)], ctx, label=label))
    results.append(all_primes_cutoff(ctx))
    return results
