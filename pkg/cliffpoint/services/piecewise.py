"""
Exact piecewise-polynomial densities of sums of uniform variables.

Coefficients are Fractions in the global variable t, so convolving box
densities with rational widths is exact. An mpf width or evaluation point is
taken as the binary rational it stores. Single values of a density with too
many pieces to build are summed directly over the sign vectors of the widths.
"""

import bisect
import logging
import math
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

from mpmath import mpf

from ..constants import MAX_PIECES
from ..schemas.numerics import BigReal, PrecisionContext
from ..schemas.sinc import PiecewisePoly, exact_fraction
from .numerics import DomainError, NumericsError, to_mpf

logger = logging.getLogger(__name__)

Poly = List[Fraction]
Point = Union[int, Fraction, mpf]


class SincIdentityError(NumericsError):
    """Base exception for the sinc identity engine."""
    pass

class OutOfDeskScaleError(SincIdentityError):
    """The exact evaluation would need more pieces or terms than allowed."""
    pass

class LHSConvergenceError(SincIdentityError):
    """The truncated sum cannot reach the requested tolerance."""
    pass


# ============================================================================
# POLYNOMIAL ARITHMETIC
# ============================================================================

def _trim(p: Poly) -> Poly:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_add(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return _trim(out)


def poly_sub(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    return poly_add(p, [-c for c in q])


def poly_mul(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _trim(out)


def poly_antiderivative(p: Sequence[Fraction]) -> Poly:
    """Antiderivative vanishing at 0."""
    return [Fraction(0)] + [c / (i + 1) for i, c in enumerate(p)]


def poly_compose_linear(p: Sequence[Fraction], alpha: Fraction, beta: Fraction) -> Poly:
    """Coefficients of p(alpha + beta*t) in t."""
    out: Poly = [Fraction(0)]
    linear = [Fraction(alpha), Fraction(beta)]
    for c in reversed(p):
        out = poly_add(poly_mul(out, linear), [c])
    return out


def poly_eval(p: Sequence[Fraction], t: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * t + c
    return acc


# ============================================================================
# DENSITIES
# ============================================================================

def box_density(a: Point) -> PiecewisePoly:
    """Uniform density on [-a, a] with height 1/(2a)."""
    width = exact_fraction(a)
    if width <= 0:
        raise DomainError(f"box half-width must be positive, got {width}")
    return PiecewisePoly(breakpoints=[-width, width], pieces=[[1 / (2 * width)]])


def _pair_contributions(
    s0: Fraction, s1: Fraction, P: Poly, r0: Fraction, r1: Fraction, Q: Poly
) -> List[Tuple[Fraction, Fraction, Poly]]:
    """
    integral of P(s) Q(t - s) ds over s in [s0, s1] with t - s in [r0, r1],
    as polynomials in t on up to three sub-intervals of [s0 + r0, s1 + r1].
    """
    # Q(t - s) P(s) = sum_i t^i R_i(s)
    R: Dict[int, Poly] = {}
    for k, qk in enumerate(Q):
        if qk == 0:
            continue
        for i in range(k + 1):
            coeff = qk * math.comb(k, i) * (-1) ** (k - i)
            power = [Fraction(0)] * (k - i) + [coeff]
            R[i] = poly_add(R.get(i, [Fraction(0)]), poly_mul(power, P))
    antiderivs = {i: poly_antiderivative(r) for i, r in R.items()}

    # Limits as (alpha, beta) meaning alpha + beta*t.
    lower_fixed, lower_moving = (s0, Fraction(0)), (-r1, Fraction(1))
    upper_fixed, upper_moving = (s1, Fraction(0)), (-r0, Fraction(1))
    a, b = sorted((s0 + r1, s1 + r0))
    if s0 + r1 <= s1 + r0:
        # Middle: s runs over [t - r1, t - r0].
        middle = (lower_moving, upper_moving)
    else:
        middle = (lower_fixed, upper_fixed)
    spans = [
        (s0 + r0, a, lower_fixed, upper_moving),
        (a, b, middle[0], middle[1]),
        (b, s1 + r1, lower_moving, upper_fixed),
    ]

    out = []
    for left, right, lower, upper in spans:
        if not left < right:
            continue
        total: Poly = [Fraction(0)]
        for i, F in antiderivs.items():
            inner = poly_sub(poly_compose_linear(F, *upper), poly_compose_linear(F, *lower))
            shifted = [Fraction(0)] * i + inner
            total = poly_add(total, shifted)
        out.append((left, right, total))
    return out


def convolve(p: PiecewisePoly, q: PiecewisePoly) -> PiecewisePoly:
    """
    Exact convolution (p * q)(t) = integral p(s) q(t - s) ds.

    The knots of the result are the pairwise sums of the input knots.
    """
    knots = sorted({s + r for s in p.breakpoints for r in q.breakpoints})
    if len(knots) - 1 > MAX_PIECES:
        logger.error(f"convolution needs {len(knots) - 1} pieces")
        raise OutOfDeskScaleError(f"convolution would need {len(knots) - 1} pieces (limit {MAX_PIECES})")
    pieces: List[Poly] = [[Fraction(0)] for _ in range(len(knots) - 1)]
    for i, P in enumerate(p.pieces):
        s0, s1 = p.breakpoints[i], p.breakpoints[i + 1]
        for j, Q in enumerate(q.pieces):
            r0, r1 = q.breakpoints[j], q.breakpoints[j + 1]
            for left, right, poly in _pair_contributions(s0, s1, P, r0, r1, Q):
                start = bisect.bisect_left(knots, left)
                stop = bisect.bisect_left(knots, right)
                for k in range(start, stop):
                    pieces[k] = poly_add(pieces[k], poly)
    logger.debug(f"convolved {p.piece_count} x {q.piece_count} pieces into {len(pieces)}")
    return PiecewisePoly(breakpoints=knots, pieces=pieces)


def _knot_count(widths: Sequence[Fraction]) -> int:
    """Knots of the convolved density, counted up to MAX_PIECES + 2."""
    knots = {Fraction(0)}
    for a in widths:
        knots = {k + s for k in knots for s in (-a, a)}
        if len(knots) > MAX_PIECES + 1:
            break
    return len(knots)


def _convolve_box(p: PiecewisePoly, a: Fraction) -> PiecewisePoly:
    """
    p convolved with the box density on [-a, a], as (F(t + a) - F(t - a)) / 2a
    with F the running integral of p.
    """
    knots = p.breakpoints
    # F on each piece, then 0 to the left and 1 to the right of the support.
    running: List[Poly] = []
    level = Fraction(0)
    for i, piece in enumerate(p.pieces):
        A = poly_antiderivative(piece)
        F = poly_add(A, [level - poly_eval(A, knots[i])])
        running.append(F)
        level = poly_eval(F, knots[i + 1])
    ahead = [poly_compose_linear(F, a, Fraction(1)) for F in running]
    behind = [poly_compose_linear(F, -a, Fraction(1)) for F in running]

    def lookup(shifted: List[Poly], x: Fraction) -> Poly:
        if x <= knots[0]:
            return [Fraction(0)]
        if x >= knots[-1]:
            return [Fraction(1)]
        return shifted[bisect.bisect_right(knots, x) - 1]

    merged = sorted({k - a for k in knots} | {k + a for k in knots})
    scale = 1 / (2 * a)
    pieces = []
    for left, right in zip(merged, merged[1:]):
        mid = (left + right) / 2
        diff = poly_sub(lookup(ahead, mid + a), lookup(behind, mid - a))
        pieces.append([c * scale for c in diff])
    return PiecewisePoly(breakpoints=merged, pieces=pieces)


def density_of(widths: Sequence[Point]) -> PiecewisePoly:
    """
    Density of the sum of independent uniforms on [-a_k, a_k].

    Raises:
        OutOfDeskScaleError: the density would have more than MAX_PIECES pieces
    """
    if not widths:
        raise DomainError("need at least one width")
    exact = [exact_fraction(a) for a in widths]
    pieces = _knot_count(exact) - 1
    if pieces > MAX_PIECES:
        logger.error(f"density of {len(exact)} widths needs more than {MAX_PIECES} pieces")
        raise OutOfDeskScaleError(
            f"density of {len(exact)} widths would need more than {MAX_PIECES} pieces; "
            f"evaluate it pointwise with density_value_at"
        )
    density = box_density(exact[0])
    for a in exact[1:]:
        if a <= 0:
            raise DomainError(f"box half-width must be positive, got {a}")
        density = _convolve_box(density, a)
    return density


def _signed_sums(widths: Sequence[int], start: int) -> Dict[int, int]:
    """start + sum e_k w_k over sign vectors e, with prod(e) summed per value."""
    sums = {start: 1}
    for w in widths:
        grown: Dict[int, int] = {}
        for v, sign in sums.items():
            grown[v + w] = grown.get(v + w, 0) + sign
            grown[v - w] = grown.get(v - w, 0) - sign
        sums = {v: s for v, s in grown.items() if s}
    return sums


def density_value_at(widths: Sequence[Point], t: Point) -> Fraction:
    """
    Exact U(t) for the sum of uniforms on [-a_k, a_k], without building pieces.

    Uses U(t) = sum_e prod(e) (t + sum e_k a_k)_+^(n-1) / ((n-1)! prod 2a_k)
    over sign vectors e. The widths are split in two halves and the partial
    sums of one half are matched against sorted power sums of the other, on
    integers after clearing denominators.
    """
    a = [exact_fraction(w) for w in widths]
    if not a:
        raise DomainError("need at least one width")
    for w in a:
        if w <= 0:
            raise DomainError(f"box half-width must be positive, got {w}")
    t = exact_fraction(t)
    n = len(a)
    if n == 1:
        if abs(t) < a[0]:
            return 1 / (2 * a[0])
        return 1 / (4 * a[0]) if abs(t) == a[0] else Fraction(0)

    scale = math.lcm(t.denominator, *(w.denominator for w in a))
    b = [int(w * scale) for w in a]
    deg = n - 1
    half = n // 2
    left = _signed_sums(b[:half], int(t * scale))
    right = sorted(_signed_sums(b[half:], 0).items())
    values = [y for y, _ in right]

    # suffix[k][i] = sum over j >= i of sign_j * y_j^k
    suffix = [[0] * (len(right) + 1) for _ in range(deg + 1)]
    for i in range(len(right) - 1, -1, -1):
        y, power = right[i]
        for k in range(deg + 1):
            suffix[k][i] = suffix[k][i + 1] + power
            power *= y
    binom = [math.comb(deg, k) for k in range(deg + 1)]

    total = 0
    for x, sign in left.items():
        i = bisect.bisect_right(values, -x)
        if i == len(right):
            continue
        acc = 0
        for k in range(deg + 1):
            acc = acc * x + binom[k] * suffix[k][i]
        total += sign * acc
    denom = math.factorial(deg) * math.prod(2 * w for w in b)
    return Fraction(total * scale, denom)


# ============================================================================
# EVALUATION
# ============================================================================

def integral(p: PiecewisePoly) -> Fraction:
    """Exact integral over the support."""
    total = Fraction(0)
    for i, piece in enumerate(p.pieces):
        F = poly_antiderivative(piece)
        total += poly_eval(F, p.breakpoints[i + 1]) - poly_eval(F, p.breakpoints[i])
    return total


def _value_exact(p: PiecewisePoly, t: Fraction) -> Fraction:
    knots = p.breakpoints
    if t < knots[0] or t > knots[-1]:
        return Fraction(0)
    idx = bisect.bisect_left(knots, t)
    if idx < len(knots) and knots[idx] == t:
        # Average of the one-sided limits at a knot.
        left = poly_eval(p.pieces[idx - 1], t) if idx > 0 else Fraction(0)
        right = poly_eval(p.pieces[idx], t) if idx < len(p.pieces) else Fraction(0)
        return (left + right) / 2
    return poly_eval(p.pieces[idx - 1], t)


def value_at(p: PiecewisePoly, t: Point, ctx: PrecisionContext = None) -> Union[Fraction, BigReal]:
    """
    p(t). Rational points give an exact Fraction; an mpf point is evaluated
    exactly at the binary rational it holds and rounded to ctx. At a knot the
    mean of the one-sided limits is returned.
    """
    if isinstance(t, mpf):
        if ctx is None:
            ctx = PrecisionContext()
        exact = _value_exact(p, exact_fraction(t))
        with ctx.activate():
            return to_mpf(exact)
    return _value_exact(p, Fraction(t))


def density_at(p: PiecewisePoly, t: Point, ctx: PrecisionContext = None) -> Union[Fraction, BigReal]:
    return value_at(p, t, ctx)
