"""
Exact threshold crossings of slowly divergent series sum 1/(m*k + c).

The first K terms are summed directly; the tail 1/(m*x + K*m + c) is
estimated with the Euler-Maclaurin formula

    sum_{k=0}^{M} f(k) = int_0^M f + (f(0) + f(M))/2
                         + sum_{j=1}^{J} B_2j/(2j)! (f^(2j-1)(M) - f^(2j-1)(0)) + R,

    |R| <= |B_{2J+2}/(2J+2)!| * M * |f^(2J+2)(0)|,

and the crossing index is certified by four checks on the candidate.
"""

import logging
import math
from fractions import Fraction
from typing import List, Optional, Tuple

from mpmath import mp, mpf

from ..constants import (
    BISECTION_WIDTH,
    CROSSING_GUARD_DIGITS,
    DIRECT_SUM_LIMIT,
    GUARD_DIGITS,
    SCAN_HALF_WIDTH,
    TABLE1_PARAMS,
)
from ..schemas.numerics import BigReal, PrecisionContext
from ..schemas.series import CrossingChecks, CrossingResult, EMParams, SeriesSpec
from .numerics import (
    BigRational,
    NumericsError,
    PrecisionError,
    bernoulli,
    bisect_increasing,
    const_two_pi,
    digamma,
    fixed_point_bits,
    fixed_point_reciprocal_sum,
    to_mpf,
)

logger = logging.getLogger(__name__)

_LOG10_E = math.log10(math.e)


class CrossingError(NumericsError):
    """Base exception for crossing computations."""
    pass

class ChecksFailed(CrossingError):
    """No candidate in the scan window passed all four checks."""
    pass

class PrecisionInsufficientError(CrossingError, PrecisionError):
    """The margin at the candidate cannot be certified at this precision."""
    pass

class DirectSumLimitError(CrossingError):
    """Direct summation was asked for more terms than is feasible."""
    pass


# ============================================================================
# PARTIAL SUMS
# ============================================================================

def direct_partial_sum(spec: SeriesSpec, n: int, ctx: PrecisionContext) -> BigReal:
    """sum_{k=0}^{n-1} 1/(m*k + c), in increasing k with guard digits."""
    if n < 0:
        raise ValueError(f"term count must be nonnegative, got {n}")
    if n > DIRECT_SUM_LIMIT:
        raise DirectSumLimitError(f"{n} terms exceeds the direct summation limit {DIRECT_SUM_LIMIT}")
    m, c = spec.m, spec.c
    return fixed_point_reciprocal_sum(range(c, m * n + c, m), ctx)


def digamma_partial_sum(spec: SeriesSpec, n: int, ctx: PrecisionContext) -> BigReal:
    """Closed form (psi(n + c/m) - psi(c/m)) / m of the first n terms."""
    if n < 1:
        raise ValueError(f"term count must be positive, got {n}")
    # The difference of two psi values loses about log10(psi) digits.
    inner = ctx.with_extra(GUARD_DIGITS)
    with inner.activate():
        offset = mp.mpf(spec.c) / spec.m
        high = digamma(mp.mpf(n) + offset, inner)
        low = digamma(offset, inner)
        value = (high - low) / spec.m
    return ctx.round(value)


def direct_crossing(
    spec: SeriesSpec,
    threshold: mpf,
    ctx: PrecisionContext,
    limit: int = DIRECT_SUM_LIMIT,
) -> CrossingResult:
    """
    Largest M with sum_{k=0}^{M} f(k) < threshold, by adding terms one at a
    time until the running sum reaches the threshold.
    """
    bits = fixed_point_bits(ctx)
    one = 1 << bits
    with ctx.activate(GUARD_DIGITS):
        target = int(mp.floor(mp.ldexp(to_mpf(threshold), bits)))
    if target <= 0:
        raise CrossingError("threshold must be positive")
    m, c = spec.m, spec.c
    acc = 0
    k = 0
    denom = c
    while True:
        step = one // denom
        if acc + step >= target:
            break
        acc += step
        k += 1
        denom += m
        if k > limit:
            raise DirectSumLimitError(f"no crossing within {limit} terms")
    if k == 0:
        raise CrossingError("the first term already reaches the threshold")
    M = k - 1
    with ctx.activate():
        total = mp.ldexp(mp.mpf(acc), -bits)
        next_term = mp.mpf(1) / (m * (M + 1) + c)
        thr = to_mpf(threshold)
        margin = thr - total
        zero = mp.mpf(0)
        checks = CrossingChecks(
            below_threshold=total < thr,
            next_term_crosses=total + next_term > thr,
            bound_below_term=True,
            bound_below_margin=margin > 0,
        )
    logger.info(f"direct scan m={m} c={c}: M={M}")
    return CrossingResult(
        spec=spec,
        K=M + 1,
        J=0,
        M=M,
        tail_M=0,
        threshold=thr,
        sum_estimate=total,
        remainder_bound=zero,
        margin=margin,
        next_term=next_term,
        checks=checks,
        digits=ctx.digits,
        method="direct",
    )


# ============================================================================
# EULER-MACLAURIN TAIL
# ============================================================================

def em_constant_part(spec_tail: SeriesSpec, J: int) -> BigRational:
    """
    Exact M-independent part of the tail estimate:
    f(0)/2 + sum_{j=1}^{J} B_2j m^(2j-1) / (2j c'^(2j)).
    """
    m, c = spec_tail.m, spec_tail.c
    total = Fraction(1, 2 * c)
    for j in range(1, J + 1):
        total += bernoulli(2 * j) * Fraction(m ** (2 * j - 1), 2 * j * c ** (2 * j))
    return total


def remainder_bound(spec_tail: SeriesSpec, M: mpf, J: int, ctx: PrecisionContext) -> BigReal:
    """|B_{2J+2}| * M * m^(2J+2) / c'^(2J+3), the remainder bound at x = 0."""
    m, c = spec_tail.m, spec_tail.c
    b = abs(bernoulli(2 * J + 2))
    coeff = b * Fraction(m ** (2 * J + 2), c ** (2 * J + 3))
    with ctx.activate():
        return to_mpf(coeff) * M


def _correction_coeffs(spec_tail: SeriesSpec, J: int) -> List[mpf]:
    """B_2j * m^(2j-1) / (2j) for j = 1..J at the current precision."""
    m = spec_tail.m
    return [to_mpf(bernoulli(2 * j) * Fraction(m ** (2 * j - 1), 2 * j)) for j in range(1, J + 1)]


def _tail_estimate(spec_tail: SeriesSpec, M: mpf, coeffs: List[mpf], constant: mpf, log_c: mpf) -> mpf:
    """Estimate at real M; runs at the caller's precision."""
    m = spec_tail.m
    u = m * M + spec_tail.c
    estimate = (mp.log(u) - log_c) / m + constant + 1 / (2 * u)
    inv_u2 = 1 / (u * u)
    power = inv_u2
    for coeff in coeffs:
        estimate -= coeff * power
        power *= inv_u2
    return estimate


def em_tail_estimate(
    spec_tail: SeriesSpec,
    M: int,
    J: int,
    ctx: PrecisionContext,
) -> Tuple[BigReal, BigReal]:
    """
    Euler-Maclaurin estimate of sum_{k=0}^{M} 1/(m*k + c') and its
    remainder bound.
    """
    if M < 0:
        raise ValueError(f"M must be nonnegative, got {M}")
    with ctx.guarded():
        constant = to_mpf(em_constant_part(spec_tail, J))
        log_c = mp.log(spec_tail.c)
        coeffs = _correction_coeffs(spec_tail, J)
        estimate = _tail_estimate(spec_tail, mp.mpf(M), coeffs, constant, log_c)
    bound = remainder_bound(spec_tail, mp.mpf(M), J, ctx)
    return ctx.round(estimate), bound


# ============================================================================
# CROSSING SOLVER
# ============================================================================

def crossing_digits(m: int, threshold: float) -> int:
    """
    Working digits for a crossing: the index grows like e^(m*threshold), so
    it needs about m*threshold*log10(e) digits, plus guard digits.
    """
    return int(math.ceil(m * threshold * _LOG10_E)) + CROSSING_GUARD_DIGITS


def table1_params(m: int) -> Tuple[int, int]:
    """
    (K, J) for m: the published choice where there is one, otherwise a
    heuristic that keeps the remainder well below the terms near M.
    """
    if m in TABLE1_PARAMS:
        return TABLE1_PARAMS[m]
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    return 50000, max(16, (3 * m) // 5)


def _resolve_threshold(params: EMParams, ctx: PrecisionContext) -> mpf:
    if params.threshold is None:
        return const_two_pi(ctx)
    with ctx.activate():
        return to_mpf(params.threshold)


def _solve_crossing(spec: SeriesSpec, params: EMParams) -> CrossingResult:
    """
    Largest M_total with sum_{k=0}^{M_total} 1/(m*k + c) < threshold.

    Sums K terms directly, brackets the real root of the tail estimate by
    doubling, bisects to width 0.25 and scans the integers around the root
    for the candidate that passes all four checks.
    """
    m, K, J = spec.m, params.K, params.J
    approx = float(params.threshold) if params.threshold is not None else 2 * math.pi
    ctx = params.ctx.raised_to(crossing_digits(m, approx))
    threshold = _resolve_threshold(params, ctx)

    head = direct_partial_sum(spec, K, ctx)
    tail = spec.shifted(K)
    with ctx.activate():
        first_tail_term = mp.mpf(1) / tail.c
        crosses_in_head = head + first_tail_term >= threshold
    if crosses_in_head:
        logger.info(f"m={m}: crossing lies within the first {K} terms, scanning directly")
        return direct_crossing(spec, threshold, ctx, limit=K + 1)

    with ctx.guarded():
        target = to_mpf(threshold) - head
        constant = to_mpf(em_constant_part(tail, J))
        log_c = mp.log(tail.c)
        coeffs = _correction_coeffs(tail, J)

        def excess(M: mpf) -> mpf:
            return _tail_estimate(tail, M, coeffs, constant, log_c) - target

        lo, hi = mp.mpf(0), mp.mpf(1)
        while excess(hi) <= 0:
            lo, hi = hi, 2 * hi
        logger.debug(f"m={m}: bracket [{mp.nstr(lo, 8)}, {mp.nstr(hi, 8)}]")
        M_real = bisect_increasing(excess, lo, hi, mp.mpf(BISECTION_WIDTH))
        base = int(mp.floor(M_real))

    noise = ctx.tolerance()
    chosen: Optional[CrossingResult] = None
    for M in range(max(0, base - SCAN_HALF_WIDTH), base + SCAN_HALF_WIDTH + 1):
        estimate, bound = em_tail_estimate(tail, M, J, ctx)
        with ctx.activate():
            total = head + estimate
            next_term = mp.mpf(1) / tail.term(M + 1)
            margin = threshold - total
            checks = CrossingChecks(
                below_threshold=total < threshold,
                next_term_crosses=total + next_term > threshold,
                bound_below_term=bound < next_term,
                bound_below_margin=margin > bound,
            )
            if abs(margin) <= noise:
                logger.error(f"m={m}: margin {mp.nstr(margin, 5)} is below the precision noise floor")
                raise PrecisionInsufficientError(
                    f"margin at M={K + M} cannot be certified with {ctx.digits} digits"
                )
        logger.debug(f"m={m}: candidate tail M={M} checks={checks.model_dump()}")
        if checks.all_passed():
            chosen = CrossingResult(
                spec=spec,
                K=K,
                J=J,
                M=K + M,
                tail_M=M,
                M_real=ctx.round(M_real),
                threshold=threshold,
                sum_estimate=total,
                remainder_bound=bound,
                margin=margin,
                next_term=next_term,
                checks=checks,
                digits=ctx.digits,
            )
            break
        if checks.below_threshold and checks.next_term_crosses:
            logger.error(f"m={m}: candidate M={K + M} failed the remainder checks")
            raise ChecksFailed(
                f"m={m}, K={K}, J={J}: remainder bound {mp.nstr(bound, 5)} is too large at M={K + M}; "
                f"raise K, J or the precision"
            )

    if chosen is None:
        logger.error(f"m={m}: no candidate near {base} passed the checks")
        raise ChecksFailed(f"m={m}, K={K}, J={J}: no integer near {K + base} passed all four checks")
    logger.info(f"m={m}: M={chosen.M} (K={K}, J={J}, {ctx.digits} digits)")
    return chosen


def _clears_margin(result: CrossingResult, factor: int) -> bool:
    if result.method != "euler_maclaurin":
        return True
    with mp.workdps(result.digits):
        return result.margin > factor * result.remainder_bound


def solve_crossing(spec: SeriesSpec, params: EMParams) -> CrossingResult:
    """
    Largest M_total with sum_{k=0}^{M_total} 1/(m*k + c) < threshold.

    When the margin of the answer is within `safety_factor` remainder bounds,
    the crossing is solved again with doubled K and J + 2 and must give the
    same index with a clear margin there.

    Raises:
        ChecksFailed: no candidate passes the four checks
        PrecisionInsufficientError: the margin cannot be certified
    """
    result = _solve_crossing(spec, params)
    factor = params.safety_factor
    if _clears_margin(result, factor):
        return result

    raised = params.doubled()
    logger.warning(
        f"m={spec.m}: margin {mp.nstr(result.margin, 5)} is within {factor}x the remainder bound "
        f"at K={params.K}, J={params.J}; re-certifying at K={raised.K}, J={raised.J}"
    )
    check = _solve_crossing(spec, raised)
    if check.M != result.M or not _clears_margin(check, factor):
        logger.error(f"m={spec.m}: margin at M={result.M} not certified at K={raised.K}, J={raised.J}")
        raise PrecisionInsufficientError(
            f"m={spec.m}: margin at M={result.M} stays within {factor}x the remainder bound; "
            f"raise K, J or the precision"
        )
    return result.model_copy(update={"recertified": True})


def recompute_stability(spec: SeriesSpec, params: EMParams) -> bool:
    """True iff doubling K and adding two correction terms gives the same M."""
    baseline = solve_crossing(spec, params)
    doubled = solve_crossing(spec, params.doubled())
    return baseline.M == doubled.M
