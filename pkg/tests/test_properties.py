"""
Property-based tests of the numeric invariants.
"""

from fractions import Fraction

from hypothesis import assume, given, settings
from hypothesis import strategies as st
from mpmath import mp

from cliffpoint.constants import Ordering
from cliffpoint.schemas.numerics import PrecisionContext
from cliffpoint.schemas.series import SeriesSpec
from cliffpoint.schemas.sinc import SincSequence
from cliffpoint.services.euler_maclaurin import digamma_partial_sum, direct_partial_sum, em_tail_estimate
from cliffpoint.services.piecewise import density_of, integral, value_at
from cliffpoint.services.sinc_identity import lhs_sum_direct, lhs_sum_poisson, rhs_integral
from cliffpoint.services.towers import compare, expand, loglog, normalize

PROPERTY_SETTINGS = settings(max_examples=200, deadline=None)

# Widths in (0.1, 3) with small denominators keep the exact densities cheap.
widths = st.fractions(min_value=Fraction(1, 10), max_value=3, max_denominator=12).filter(lambda w: w > Fraction(1, 10))


@PROPERTY_SETTINGS
@given(
    m=st.sampled_from([1, 2, 5, 10]),
    c=st.sampled_from([101, 1001]),
    M=st.sampled_from([10 ** 3, 10 ** 5, 10 ** 9]),
    J=st.sampled_from([1, 3, 5]),
)
def test_remainder_bound_holds(m, c, M, J):
    """The tail estimate is within its remainder bound of the exact tail."""
    ctx = PrecisionContext(digits=60)
    spec = SeriesSpec(m=m, c=c)
    estimate, bound = em_tail_estimate(spec, M, J, ctx)
    exact = digamma_partial_sum(spec, M + 1, ctx)
    with ctx.activate():
        assert abs(estimate - exact) <= bound


@PROPERTY_SETTINGS
@given(
    m=st.integers(min_value=1, max_value=20),
    c=st.integers(min_value=1, max_value=50),
    n=st.integers(min_value=1, max_value=4),
)
def test_direct_sum_matches_digamma(m, c, n):
    """Direct summation and the digamma closed form agree."""
    ctx = PrecisionContext(digits=40)
    count = 10 ** n
    spec = SeriesSpec(m=m, c=c)
    direct = direct_partial_sum(spec, count, ctx)
    oracle = digamma_partial_sum(spec, count, ctx)
    with ctx.activate():
        assert abs(direct - oracle) < ctx.tolerance()


@PROPERTY_SETTINGS
@given(a=st.lists(widths, min_size=2, max_size=6))
def test_lhs_methods_agree(a):
    """Truncated direct summation agrees with the Poisson evaluation."""
    ctx = PrecisionContext(digits=30)
    seq = SincSequence(a=a)
    L = len(a)
    # Tolerance whose tail bound is met after about 500 terms.
    tol = 1 / ((L - 1) * seq.product() * Fraction(500) ** (L - 1))
    tol_text = mp.nstr(mp.mpf(tol.numerator) / tol.denominator, 20)
    direct = lhs_sum_direct(seq, ctx, tol_text)
    exact = lhs_sum_poisson(seq, ctx)
    with mp.workdps(40):
        assert abs(direct - exact) < 10 * mp.mpf(tol_text)


@PROPERTY_SETTINGS
@given(
    a=st.lists(widths, min_size=1, max_size=6),
    t=st.fractions(min_value=-20, max_value=20, max_denominator=50),
)
def test_density_mass_and_symmetry(a, t):
    """Convolved box densities have unit mass, even symmetry and no negative values."""
    density = density_of(a)
    total = sum(a, Fraction(0))
    assert integral(density) == 1
    assert density.support() == (-total, total)
    assert value_at(density, t) == value_at(density, -t)
    assert value_at(density, t) >= 0


@PROPERTY_SETTINGS
@given(a0=widths, rest=st.lists(widths, min_size=1, max_size=4))
def test_integral_plateau(a0, rest):
    """The integral is pi/(2 a_0) while the other widths sum to at most a_0."""
    scale = sum(rest, Fraction(0))
    assume(scale > 0)
    # Shrink the remaining widths so they sum to at most a_0.
    if scale > a0:
        rest = [w * a0 / scale for w in rest]
    ctx = PrecisionContext(digits=40)
    value = rhs_integral(SincSequence(a=[a0] + rest), ctx)
    with mp.workdps(50):
        expected = mp.pi / (2 * (mp.mpf(a0.numerator) / a0.denominator))
        assert abs(value - expected) < ctx.tolerance()


@PROPERTY_SETTINGS
@given(a=st.lists(widths, min_size=1, max_size=6))
def test_identity_difference_nonnegative(a):
    """The left side never falls below the right side."""
    ctx = PrecisionContext(digits=30)
    seq = SincSequence(a=a)
    lhs = lhs_sum_poisson(seq, ctx)
    rhs = rhs_integral(seq, ctx)
    with ctx.activate():
        assert lhs - rhs >= -ctx.tolerance()


reals = st.floats(min_value=1, max_value=1e300, allow_nan=False, allow_infinity=False)


@PROPERTY_SETTINGS
@given(x=reals, y=reals)
def test_tower_order_embedding(x, y):
    """Comparing tower forms agrees with comparing the plain reals."""
    ctx = PrecisionContext(digits=40)
    ordering = compare(mp.mpf(x), mp.mpf(y), ctx)
    if x < y:
        assert ordering == Ordering.LESS
    elif x > y:
        assert ordering == Ordering.GREATER
    else:
        assert ordering == Ordering.EQUAL


@PROPERTY_SETTINGS
@given(x=reals)
def test_tower_round_trip(x):
    """Normalizing then expanding returns the original value."""
    ctx = PrecisionContext(digits=40)
    value = mp.mpf(x)
    tower = normalize(0, value, ctx)
    assert 0 <= tower.top < 1
    back = expand(tower, ctx)
    with ctx.guarded():
        assert abs(back / value - 1) < ctx.tolerance()


@PROPERTY_SETTINGS
@given(x=st.floats(min_value=20, max_value=1e300), y=st.floats(min_value=20, max_value=1e300))
def test_loglog_is_monotone(x, y):
    """Iterated logarithms preserve order."""
    assume(x < y)
    ctx = PrecisionContext(digits=40)
    for k in (1, 2):
        assert loglog(mp.mpf(x), k, ctx) <= loglog(mp.mpf(y), k, ctx)
