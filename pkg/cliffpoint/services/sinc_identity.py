"""
Both sides of the sinc sum/integral identity

    1/2 + sum_{n>=1} prod_k sinc(a_k n)  =  integral_0^inf prod_k sinc(a_k x) dx,

which holds while sum a_k <= 2*pi.

With U the density of a sum of uniforms on [-a_k, a_k], the product of
sincs is the Fourier transform of U, so the integral is pi*U(0) and, by
Poisson summation, the sum is pi * sum_j U(2*pi*j). Both only need U at a
few points, which are evaluated exactly; truncated direct summation is kept
as an independent check.
"""

import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple

from mpmath import mp, mpf

from ..constants import DEFAULT_DIRECT_TOL, DIRECT_LHS_TERM_CAP, GUARD_DIGITS, MAX_SINC_LENGTH
from ..schemas.numerics import BigReal, PrecisionContext
from ..schemas.sinc import IdentityReport, PiecewisePoly, SincSequence, exact_fraction
from .numerics import RealLike, to_mpf
from .piecewise import LHSConvergenceError, OutOfDeskScaleError, density_of, density_value_at

logger = logging.getLogger(__name__)


# ============================================================================
# SEQUENCES
# ============================================================================

def odd_reciprocals(N: int) -> SincSequence:
    """a_k = 1/(2k+1) for k = 0..N."""
    if N < 0:
        raise ValueError(f"N must be nonnegative, got {N}")
    return SincSequence(a=[Fraction(1, 2 * k + 1) for k in range(N + 1)])


def constant_sequence(value: RealLike, count: int) -> SincSequence:
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    return SincSequence(a=[value] * count)


# ============================================================================
# SINC AND DENSITIES
# ============================================================================

def sinc(x: RealLike, ctx: PrecisionContext) -> BigReal:
    """sin(x)/x, with sinc(0) = 1 and a short series near zero."""
    with ctx.guarded():
        x = to_mpf(x)
        if abs(x) < mp.mpf(10) ** (-(ctx.digits // 2)):
            x2 = x * x
            value = 1 - x2 / 6 + x2 * x2 / 120
        else:
            value = mp.sin(x) / x
    return ctx.round(value)


def _check_desk_scale(seq: SincSequence) -> None:
    if len(seq.a) > MAX_SINC_LENGTH:
        logger.error(f"sequence of length {len(seq.a)} is beyond exact evaluation")
        raise OutOfDeskScaleError(
            f"length {len(seq.a)} exceeds {MAX_SINC_LENGTH}; the identity cannot be evaluated exactly here"
        )


@lru_cache(maxsize=64)
def _density(widths: Tuple[Fraction, ...]) -> PiecewisePoly:
    return density_of(widths)


@lru_cache(maxsize=256)
def _density_point(widths: Tuple[Fraction, ...], t: Fraction) -> Fraction:
    return density_value_at(widths, t)


def sequence_density(seq: SincSequence) -> PiecewisePoly:
    """The convolved box density U of the sequence."""
    _check_desk_scale(seq)
    return _density(tuple(seq.a))


# ============================================================================
# BOTH SIDES
# ============================================================================

def rhs_integral(seq: SincSequence, ctx: PrecisionContext) -> BigReal:
    """integral_0^inf prod sinc(a_k x) dx = pi * U(0)."""
    _check_desk_scale(seq)
    at_zero = _density_point(tuple(seq.a), Fraction(0))
    with ctx.activate():
        return mp.pi * to_mpf(at_zero)


def lhs_sum_poisson(seq: SincSequence, ctx: PrecisionContext) -> BigReal:
    """
    1/2 + sum_{n>=1} prod sinc(a_k n) = pi * (U(0) + 2 sum_{j>=1} U(2*pi*j)).

    Only lattice points inside the support contribute, so the sum is finite.
    """
    _check_desk_scale(seq)
    widths = tuple(seq.a)
    inner = ctx.with_extra(GUARD_DIGITS)
    with inner.activate():
        support = to_mpf(seq.total())
        two_pi = 2 * mp.pi
        total = to_mpf(_density_point(widths, Fraction(0)))
        j = 1
        while two_pi * j < support:
            total += 2 * to_mpf(_density_point(widths, exact_fraction(two_pi * j)))
            j += 1
        value = mp.pi * total
    if j > 1:
        logger.debug(f"{j - 1} nonzero lattice points beyond the origin")
    return ctx.round(value)


def direct_term_count(seq: SincSequence, tol: RealLike) -> int:
    """
    Smallest T, at least 1/min(a), with the tail bound
    1 / ((L-1) * prod(a) * T^(L-1)) below tol.
    """
    L = len(seq.a)
    if L < 2:
        raise ValueError("the direct tail bound needs at least two widths")
    floor_T = math.ceil(1 / min(seq.a))
    with mp.workdps(30):
        tol = to_mpf(tol)
        if tol <= 0:
            raise ValueError("tolerance must be positive")
        bound = (1 / ((L - 1) * to_mpf(seq.product()) * tol)) ** (mp.mpf(1) / (L - 1))
        tail_T = int(mp.ceil(bound))
    return max(floor_T, tail_T, 1)


def lhs_sum_direct(
    seq: SincSequence,
    ctx: PrecisionContext,
    tol: Optional[RealLike] = None,
) -> BigReal:
    """
    1/2 + sum_{n=1}^{T} prod sinc(a_k n), truncated where the tail is below tol.

    A single width uses the closed form pi/(2a), valid for 0 < a < 2*pi.
    """
    if tol is None:
        tol = DEFAULT_DIRECT_TOL
    if len(seq.a) == 1:
        with ctx.guarded():
            a = to_mpf(seq.a[0])
            if a >= 2 * mp.pi:
                logger.error(f"closed form for a single width needs a < 2*pi, got {mp.nstr(a, 10)}")
                raise LHSConvergenceError("single-width closed form needs 0 < a < 2*pi")
            value = mp.pi / (2 * a)
        return ctx.round(value)

    T = direct_term_count(seq, tol)
    if T > DIRECT_LHS_TERM_CAP:
        logger.error(f"direct sum would need {T} terms")
        raise LHSConvergenceError(
            f"tolerance needs {T} terms (cap {DIRECT_LHS_TERM_CAP}); use the Poisson evaluation"
        )
    with ctx.guarded():
        widths = [to_mpf(a) for a in seq.a]
        total = mp.mpf(1) / 2
        for n in range(1, T + 1):
            term = mp.mpf(1)
            for w in widths:
                x = w * n
                term *= mp.sin(x) / x
            total += term
    logger.debug(f"direct sum used {T} terms")
    return ctx.round(total)


def identity_check(
    seq: SincSequence,
    ctx: PrecisionContext,
    tol: Optional[RealLike] = None,
) -> IdentityReport:
    """Evaluate both sides, the condition sum a_k <= 2*pi and the cross-method check."""
    _check_desk_scale(seq)
    rhs = rhs_integral(seq, ctx)
    lhs = lhs_sum_poisson(seq, ctx)
    with ctx.guarded():
        total_width = to_mpf(seq.total())
        condition = total_width <= 2 * mp.pi
    with ctx.activate():
        difference = lhs - rhs
        total_width = +total_width

    if tol is None:
        tol = DEFAULT_DIRECT_TOL
    direct: Optional[mpf] = None
    agreement: Optional[mpf] = None
    terms: Optional[int] = None
    skipped: Optional[str] = None
    try:
        direct = lhs_sum_direct(seq, ctx, tol)
        if len(seq.a) > 1:
            terms = direct_term_count(seq, tol)
        with ctx.activate():
            agreement = abs(direct - lhs)
    except LHSConvergenceError as exc:
        logger.warning(f"no direct cross-check: {exc}")
        skipped = str(exc)
    with ctx.activate():
        direct_tolerance = to_mpf(tol)

    if not condition:
        logger.info(f"sum of widths {mp.nstr(total_width, 12)} exceeds 2*pi; difference {mp.nstr(difference, 8)}")
    return IdentityReport(
        length=len(seq.a),
        total_width=total_width,
        condition_holds=condition,
        lhs=lhs,
        rhs=rhs,
        difference=difference,
        lhs_direct=direct,
        method_agreement=agreement,
        direct_terms=terms,
        direct_tolerance=direct_tolerance,
        direct_skipped=skipped,
        digits=ctx.digits,
    )
