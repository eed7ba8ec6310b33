"""
Level-index arithmetic for numbers far beyond floating-point range.

A TowerReal (h, f) stands for exp^h(f) with f in [0, 1). Comparison is
lexicographic; logarithms lower the height; products and sums with ordinary
reals are carried through the logarithm and dropped once they fall below the
working precision of an unexpandable tower.
"""

import logging
import re
from typing import Callable, Dict, Union

from mpmath import mp, mpf

from ..constants import (
    BAYS_HUDSON_CROSSING,
    LARGEST_KNOWN_PRIME_EXPONENT,
    LEMMA_DOUBLING_POINTS,
    LEMMA_QUOTIENT_POINTS,
    LEMMA_RATIO_POINTS,
    SKEWES_1_TOP,
    SKEWES_2_TOP,
    TOWER_EXPANSION_LIMIT,
    TOWER_SNAP_DIGITS,
    Ordering,
)
from ..schemas.numerics import BigReal, PrecisionContext
from ..schemas.towers import LemmaReport, NamedConstants, Section8Report, SkewesReport, TowerReal
from .numerics import DomainError, NumericsError, RealLike, bisect_increasing, to_mpf

logger = logging.getLogger(__name__)

TowerLike = Union[TowerReal, RealLike]


class TowerError(NumericsError):
    """Base exception for tower arithmetic."""
    pass

class OverLoggingError(TowerError):
    """A logarithm would leave the nonnegative reals."""
    pass

class TowerParseError(TowerError, ValueError):
    """A tower expression could not be parsed."""
    pass

class UnexpandableError(TowerError):
    """The tower is too large to write as an ordinary real."""
    pass


# ============================================================================
# CANONICAL FORM
# ============================================================================

def normalize(h: int, f: RealLike, ctx: PrecisionContext) -> TowerReal:
    """
    Canonical (h', f') with exp^h'(f') = exp^h(f) and f' in [0, 1).

    A top within 10^-(digits-5) of 1 is taken as exactly 1.
    """
    if h < 0:
        raise DomainError(f"tower height must be nonnegative, got {h}")
    with ctx.guarded():
        f = to_mpf(f)
        if f < 0:
            raise DomainError(f"tower top must be nonnegative, got {mp.nstr(f, 10)}")
        snap = mp.mpf(10) ** (TOWER_SNAP_DIGITS - ctx.digits)
        while f >= 1 or abs(f - 1) < snap:
            if abs(f - 1) < snap:
                f = mp.mpf(0)
            else:
                f = mp.log(f)
            h += 1
    return TowerReal(height=h, top=ctx.round(f))


def to_tower(x: TowerLike, ctx: PrecisionContext) -> TowerReal:
    if isinstance(x, TowerReal):
        return normalize(x.height, x.top, ctx)
    return normalize(0, x, ctx)


def compare(x: TowerLike, y: TowerLike, ctx: PrecisionContext) -> Ordering:
    """
    Order two towers by (height, top). Heights one apart are compared at
    the lower height so tops that snapped across 1 still meet.
    """
    a, b = to_tower(x, ctx), to_tower(y, ctx)
    tol = ctx.tolerance()
    with ctx.guarded():
        if a.height == b.height:
            fa, fb = a.top, b.top
        elif abs(a.height - b.height) == 1:
            if a.height < b.height:
                fa, fb = a.top, mp.exp(b.top)
            else:
                fa, fb = mp.exp(a.top), b.top
        else:
            return Ordering.LESS if a.height < b.height else Ordering.GREATER
        if abs(fa - fb) <= tol:
            return Ordering.EQUAL
        return Ordering.LESS if fa < fb else Ordering.GREATER


# ============================================================================
# CONVERSIONS
# ============================================================================

def expand(x: TowerReal, ctx: PrecisionContext) -> BigReal:
    """exp^h(f) as an ordinary real; refused once a value passed to exp exceeds the limit."""
    with ctx.guarded():
        v = to_mpf(x.top)
        for level in range(x.height):
            if v > TOWER_EXPANSION_LIMIT:
                raise UnexpandableError(
                    f"{x.describe()} needs exp of {mp.nstr(v, 8)} at level {level + 1}"
                )
            v = mp.exp(v)
    return ctx.round(v)


def is_expandable(x: TowerReal, ctx: PrecisionContext) -> bool:
    try:
        expand(x, ctx)
    except UnexpandableError:
        return False
    return True


def from_log(L: TowerLike, ctx: PrecisionContext) -> TowerReal:
    """The tower exp(L)."""
    if isinstance(L, TowerReal):
        t = to_tower(L, ctx)
        return TowerReal(height=t.height + 1, top=t.top)
    with ctx.guarded():
        value = to_mpf(L)
        if value < 0:
            return normalize(0, mp.exp(value), ctx)
    return normalize(1, value, ctx)


def tower_log(x: TowerLike, ctx: PrecisionContext) -> TowerReal:
    """ln x as a tower; x must be at least 1."""
    t = to_tower(x, ctx)
    if t.height == 0:
        logger.error(f"log of {t.describe()} is negative")
        raise OverLoggingError(f"log of {mp.nstr(t.top, 10)} < 1 is negative")
    return TowerReal(height=t.height - 1, top=t.top)


def _apply_plain(x: TowerReal, op: Callable[[mpf], mpf], ctx: PrecisionContext, name: str) -> TowerReal:
    try:
        value = expand(x, ctx)
    except UnexpandableError:
        logger.debug(f"{name} below precision of {x.describe()}, dropped")
        return x
    with ctx.guarded():
        result = op(value)
        if result < 0:
            raise OverLoggingError(f"{name} of {x.describe()} is negative")
    return normalize(0, result, ctx)


def shift(x: TowerLike, delta: RealLike, ctx: PrecisionContext) -> TowerReal:
    """x + delta; negligible relative to an unexpandable tower."""
    t = to_tower(x, ctx)
    with ctx.guarded():
        d = to_mpf(delta)
    return _apply_plain(t, lambda v: v + d, ctx, "shift")


def scale(x: TowerLike, factor: RealLike, ctx: PrecisionContext) -> TowerReal:
    """x * factor for factor > 0, carried out on ln x."""
    t = to_tower(x, ctx)
    with ctx.guarded():
        c = to_mpf(factor)
        if c <= 0:
            raise DomainError("scale factor must be positive")
        log_c = mp.log(c)
    if is_expandable(t, ctx):
        return _apply_plain(t, lambda v: v * c, ctx, "scale")
    return from_log(shift(tower_log(t, ctx), log_c, ctx), ctx)


def loglog(x: TowerLike, k: int, ctx: PrecisionContext) -> Union[BigReal, TowerReal]:
    """
    The k-fold natural logarithm of x, as a plain real when it can be
    written out and as a tower otherwise.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    t = to_tower(x, ctx)
    if k > t.height:
        logger.error(f"{k}-fold log of {t.describe()} is negative")
        raise OverLoggingError(f"cannot take {k} logarithms of {t.describe()}")
    result = TowerReal(height=t.height - k, top=t.top)
    try:
        return expand(result, ctx)
    except UnexpandableError:
        return result


def iterated_log10(x: TowerLike, k: int, ctx: PrecisionContext) -> Union[BigReal, TowerReal]:
    """log10 applied k times."""
    t = to_tower(x, ctx)
    with ctx.guarded():
        inv_ln10 = 1 / mp.log(10)
    for _ in range(k):
        if is_expandable(t, ctx):
            value = expand(t, ctx)
            with ctx.guarded():
                if value <= 0:
                    raise OverLoggingError("log10 of zero")
                value = mp.log10(value)
                if value < 0:
                    raise OverLoggingError(f"log10 of {mp.nstr(value, 8)} leaves the nonnegative reals")
            t = normalize(0, value, ctx)
        else:
            t = scale(tower_log(t, ctx), inv_ln10, ctx)
    try:
        return expand(t, ctx)
    except UnexpandableError:
        return t


# ============================================================================
# PARSING AND NAMED NUMBERS
# ============================================================================

_NUMBER = re.compile(r"^[+]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def parse_tower(expr: str, ctx: PrecisionContext) -> TowerReal:
    """
    Parse a right-associative chain such as "e^e^e^79" or "10^10^34", a
    plain decimal, or one of the names S1, S2, P.
    """
    text = expr.replace(" ", "")
    named = named_constants(ctx)
    if text in ("S1", "S2", "P"):
        return getattr(named, text)
    parts = text.split("^")
    if not parts or not _NUMBER.match(parts[-1]) and parts[-1] not in ("e", "P"):
        raise TowerParseError(f"cannot parse tower expression {expr!r}")
    top = parts[-1]
    if top == "P":
        value = named.P
    elif top == "e":
        value = normalize(1, 1, ctx)
    else:
        value = normalize(0, top, ctx)
    with ctx.guarded():
        ln10 = mp.log(10)
    for base in reversed(parts[:-1]):
        if base == "e":
            value = from_log(value, ctx)
        elif base == "10":
            value = from_log(scale(value, ln10, ctx), ctx)
        else:
            raise TowerParseError(f"unsupported base {base!r} in {expr!r}; use e or 10")
    return value


def named_constants(ctx: PrecisionContext) -> NamedConstants:
    """S1 = exp^3(79), S2 = exp^4(7.705) and the largest known prime P."""
    with ctx.guarded():
        ln_P = LARGEST_KNOWN_PRIME_EXPONENT * mp.log(2)
        log10_P = LARGEST_KNOWN_PRIME_EXPONENT * mp.log10(2)
        digits_P = int(mp.floor(log10_P)) + 1
        bays_hudson = mp.mpf(BAYS_HUDSON_CROSSING)
    return NamedConstants(
        S1=normalize(3, SKEWES_1_TOP, ctx),
        S2=normalize(4, SKEWES_2_TOP, ctx),
        P=from_log(ctx.round(ln_P), ctx),
        log10_P=ctx.round(log10_P),
        ln_P=ctx.round(ln_P),
        P_digits=digits_P,
        bays_hudson=ctx.round(bays_hudson),
    )


# ============================================================================
# REPORTS
# ============================================================================

def skewes_report(ctx: PrecisionContext) -> SkewesReport:
    """
    Compare S1, S2 and N0 = exp(exp(P)), the term count for the progression
    with modulus the largest known prime P (with M(q,1) = 0).
    """
    named = named_constants(ctx)
    N0 = from_log(from_log(named.P, ctx), ctx)
    log3_P = loglog(named.P, 3, ctx)
    log4_S2 = loglog(named.S2, 4, ctx)
    log4_N0 = loglog(N0, 4, ctx)
    with ctx.activate():
        e = mp.mpf(mp.e)
        s2_top = mp.log(mp.mpf(SKEWES_2_TOP))
        ratio = e / s2_top
        # Level 4: log log^4 N0 ~ ratio * log log^4 S2.
        log4_bound = log4_S2 ** ratio
    report = SkewesReport(
        constants=named,
        N0=N0,
        S1_vs_S2=compare(named.S1, named.S2, ctx).value,
        N0_vs_S2=compare(N0, named.S2, ctx).value,
        loglog_S2=loglog(named.S2, 2, ctx),
        log3_S2=loglog(named.S2, 3, ctx),
        log3_P=log3_P,
        log3_P_exceeds_e=log3_P > e,
        S2_top=s2_top,
        N0_top=e,
        ratio=ratio,
        log4_S2=log4_S2,
        log4_N0=log4_N0,
        log4_N0_bound=log4_bound,
        level4_relation_holds=log4_N0 >= log4_bound,
        log10_log10_P=iterated_log10(named.P, 2, ctx),
    )
    logger.info(f"S2 = exp^5({mp.nstr(s2_top, 6)}), N0 ~ exp^5(e), ratio {mp.nstr(ratio, 6)}")
    return report


def section8_report(ctx: PrecisionContext) -> Section8Report:
    """
    Modulus q = P^P with M(q,1) = 0. Then log log x = 2*pi*phi(q),
    log N0 ~ log x and log^3 N0 ~ log phi(q) ~ P log P.
    """
    named = named_constants(ctx)
    ln_P = named.ln_P
    # ln phi(q) = P ln P + ln(1 - 1/P); the second term is far below precision.
    ln_phi = scale(named.P, ln_P, ctx)
    with ctx.guarded():
        ln_two_pi = mp.log(2 * mp.pi)
    log3_N0 = shift(ln_phi, ln_two_pi, ctx)
    # log^4 N0 = ln P + ln ln P, written out.
    with ctx.guarded():
        log4 = ln_P + mp.log(ln_P)
        log5 = mp.log(log4)
        e_to_e = mp.exp(mp.e)
        log10_log3 = named.log10_P + mp.log10(ln_P)
        log10_loglog_q = named.log10_P + mp.log10(named.log10_P)
        threshold = mp.mpf(10) ** 7 + 7
        proportion = 1 - mp.exp(-ln_P)
    # N0 = exp(exp(exp(log^3 N0))) in tower form.
    N0 = from_log(from_log(from_log(log3_N0, ctx), ctx), ctx)
    tower_of_e = normalize(6, mp.e, ctx)
    report = Section8Report(
        log10_log10_q=ctx.round(log10_loglog_q),
        log3_N0=log3_N0,
        log10_log3_N0=ctx.round(log10_log3),
        log3_exceeds=log10_log3 > threshold,
        log4_N0=ctx.round(log4),
        log5_N0=ctx.round(log5),
        log5_exceeds_16_95=log5 > mp.mpf("16.95"),
        e_to_e=ctx.round(e_to_e),
        N0=N0,
        tower_of_e=tower_of_e,
        N0_vs_tower_of_e=compare(N0, tower_of_e, ctx).value,
        phi_proportion=ctx.round(proportion),
        log10_one_minus_proportion=ctx.round(-named.log10_P),
    )
    logger.info(f"q = P^P: log^5 N0 = {mp.nstr(log5, 6)}, N0 = {N0.describe()}")
    return report


def _ratio_gap(t: mpf) -> mpf:
    return mp.exp(mp.pi * t) - mp.pi * t - mp.exp(2 * t)


def inequality_lemmas(ctx: PrecisionContext) -> LemmaReport:
    """
    Check at sample points:
      e^(pi t) - pi t > e^(2t) for t >= 0.4, with the crossing near .391;
      exp(exp(2y)) > exp(exp(y))^2 for y > log 2;
      exp(exp(2t))/(t-1) > exp(exp(t)) for t > 1.
    The last two are compared after taking one logarithm.
    """
    failures = []
    ratio_checks: Dict[str, bool] = {}
    doubling_checks: Dict[str, bool] = {}
    quotient_checks: Dict[str, bool] = {}
    with ctx.guarded():
        root = bisect_increasing(_ratio_gap, mp.mpf("0.2"), mp.mpf(1), mp.mpf(10) ** (-(ctx.digits // 2)))
        for point in LEMMA_RATIO_POINTS:
            ratio_checks[point] = bool(_ratio_gap(mp.mpf(point)) > 0)
        for point in LEMMA_DOUBLING_POINTS:
            y = mp.mpf(point)
            # log of both sides: exp(2y) vs 2 exp(y)
            doubling_checks[point] = bool(mp.exp(2 * y) > 2 * mp.exp(y))
        for point in LEMMA_QUOTIENT_POINTS:
            t = mp.mpf(point)
            quotient_checks[point] = bool(mp.exp(2 * t) - mp.log(t - 1) > mp.exp(t))
        log2 = mp.log(2)
    for name, checks in (("ratio", ratio_checks), ("doubling", doubling_checks), ("quotient", quotient_checks)):
        failures.extend(f"{name}@{p}" for p, ok in checks.items() if not ok)
    if failures:
        logger.warning(f"inequality checks failed at {failures}")
    return LemmaReport(
        ratio_root=ctx.round(root),
        ratio_checks=ratio_checks,
        doubling_threshold=ctx.round(log2),
        doubling_checks=doubling_checks,
        quotient_checks=quotient_checks,
        failures=failures,
    )
