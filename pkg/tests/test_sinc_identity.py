"""
Tests for the box-density engine and both sides of the sinc identity.
"""

from fractions import Fraction

import pytest
from mpmath import mp

from cliffpoint.schemas.numerics import PrecisionContext
from cliffpoint.schemas.sinc import PiecewisePoly, SincSequence, exact_fraction
from cliffpoint.services.numerics import DomainError
from cliffpoint.services.piecewise import (
    LHSConvergenceError,
    OutOfDeskScaleError,
    box_density,
    convolve,
    density_at,
    density_of,
    density_value_at,
    integral,
    value_at
)
from cliffpoint.services.sinc_identity import (
    constant_sequence,
    direct_term_count,
    identity_check,
    lhs_sum_direct,
    lhs_sum_poisson,
    odd_reciprocals,
    rhs_integral,
    sequence_density,
    sinc
)


@pytest.fixture
def ctx():
    return PrecisionContext(digits=50)


def _close(x, y, digits: int = 40) -> bool:
    with mp.workdps(digits + 10):
        return abs(x - y) < mp.mpf(10) ** -digits


def test_sinc_values(ctx):
    """Test sinc at zero, pi and one."""
    assert sinc(0, ctx) == 1
    assert _close(sinc(mp.mpf("1e-40"), ctx), 1)
    with ctx.activate():
        assert abs(sinc(mp.pi, ctx)) < mp.mpf(10) ** -45
    assert mp.nstr(sinc(1, ctx), 12) == "0.841470984808"


def test_sinc_sequence_validation():
    """Test widths are coerced to exact rationals and validated."""
    seq = SincSequence(a=[1, "1/3", 0.5, Fraction(1, 5)])
    assert seq.a == [Fraction(1), Fraction(1, 3), Fraction(1, 2), Fraction(1, 5)]
    assert seq.N == 3
    assert seq.total() == Fraction(1) + Fraction(1, 3) + Fraction(1, 2) + Fraction(1, 5)
    assert seq.extended("1/7").a[-1] == Fraction(1, 7)

    with pytest.raises(ValueError):
        SincSequence(a=[])
    with pytest.raises(ValueError):
        SincSequence(a=[1, 0])
    with pytest.raises(ValueError):
        SincSequence(a=[1, -2])


def test_exact_fraction_of_mpf():
    """Test an mpf converts to the binary rational it stores."""
    assert exact_fraction(mp.mpf("0.375")) == Fraction(3, 8)
    with pytest.raises(TypeError):
        exact_fraction(object())


def test_piecewise_poly_validation():
    """Test knot and piece validation."""
    with pytest.raises(ValueError):
        PiecewisePoly(breakpoints=[Fraction(1), Fraction(0)], pieces=[[Fraction(1)]])
    with pytest.raises(ValueError):
        PiecewisePoly(breakpoints=[Fraction(0), Fraction(1)], pieces=[[Fraction(1)], [Fraction(2)]])


def test_box_density():
    """Test the uniform density on [-a, a]."""
    box = box_density(1)
    assert box.support() == (Fraction(-1), Fraction(1))
    assert value_at(box, 0) == Fraction(1, 2)
    assert integral(box) == 1
    assert density_at(box_density(2), 3) == 0
    # Mean of the one-sided limits at a knot.
    assert value_at(box, 1) == Fraction(1, 4)

    with pytest.raises(DomainError):
        box_density(0)


def test_convolve_two_boxes_is_triangle():
    """Test box(1) * box(1) is the triangle on [-2, 2]."""
    tri = convolve(box_density(1), box_density(1))
    assert tri.support() == (Fraction(-2), Fraction(2))
    assert value_at(tri, 0) == Fraction(1, 2)
    assert value_at(tri, 1) == Fraction(1, 4)
    assert value_at(tri, Fraction(-3, 2)) == Fraction(1, 8)
    assert integral(tri) == 1
    assert tri.degree == 1


def test_convolve_unequal_boxes_has_plateau():
    """Test box(1) * box(1/2) is flat on [-1/2, 1/2]."""
    density = convolve(box_density(1), box_density(Fraction(1, 2)))
    assert density.support() == (Fraction(-3, 2), Fraction(3, 2))
    assert value_at(density, 0) == Fraction(1, 2)
    assert value_at(density, Fraction(1, 2)) == Fraction(1, 2)
    assert value_at(density, Fraction(5, 4)) == Fraction(1, 8)
    assert integral(density) == 1


def test_density_of_many_widths():
    """Test mass, support and symmetry of a longer convolution."""
    widths = [Fraction(1), Fraction(1, 3), Fraction(1, 5), Fraction(1, 7)]
    density = density_of(widths)
    total = sum(widths, Fraction(0))
    assert density.support() == (-total, total)
    assert integral(density) == 1
    for t in (Fraction(1, 10), Fraction(2, 3), Fraction(6, 5)):
        assert value_at(density, t) == value_at(density, -t)
    assert density.degree == 3


def test_density_of_matches_general_convolution():
    """Test the box convolution agrees with the general convolution."""
    widths = [Fraction(1), Fraction(1, 2), Fraction(1, 3)]
    general = convolve(convolve(box_density(widths[0]), box_density(widths[1])), box_density(widths[2]))
    boxed = density_of(widths)
    assert boxed.breakpoints == general.breakpoints
    for t in (Fraction(0), Fraction(1, 7), Fraction(2, 3), Fraction(3, 2), Fraction(11, 6)):
        assert value_at(boxed, t) == value_at(general, t)


def test_density_value_at_matches_pieces():
    """Test pointwise evaluation agrees exactly with the built density."""
    widths = [Fraction(1), Fraction(1, 3), Fraction(1, 5), Fraction(1, 7), Fraction(2, 9)]
    density = density_of(widths)
    for t in (Fraction(0), Fraction(1, 10), Fraction(-2, 3), Fraction(1), Fraction(17, 10), Fraction(3)):
        assert density_value_at(widths, t) == value_at(density, t)
    assert density_value_at([1, 1], 0) == Fraction(1, 2)
    assert density_value_at([1, 1, 1, 1, 1, 1, 1], 0) == value_at(density_of([1] * 7), 0)


def test_density_value_at_single_box():
    """Test the one-width case including the knot convention."""
    assert density_value_at([2], 1) == Fraction(1, 4)
    assert density_value_at([2], 2) == Fraction(1, 8)
    assert density_value_at([2], 3) == 0
    with pytest.raises(DomainError):
        density_value_at([1, 0], 0)


def test_long_density_is_refused_before_building():
    """Test a density with too many pieces is refused up front."""
    with pytest.raises(OutOfDeskScaleError):
        density_of(odd_reciprocals(23).a)


def test_identity_for_longest_odd_sequence(ctx):
    """Test the identity at the longest accepted sequence length."""
    report = identity_check(odd_reciprocals(23), ctx)
    assert report.length == 24
    assert report.condition_holds
    with ctx.activate():
        assert abs(report.difference) < ctx.tolerance()
    assert report.method_agreement is not None
    assert report.method_agreement < mp.mpf("1e-5")


def test_identity_for_long_constant_sequence(ctx):
    """Test a long constant sequence, whose density has few pieces."""
    report = identity_check(constant_sequence(Fraction(1, 4), 24), ctx)
    assert report.condition_holds
    with ctx.activate():
        assert abs(report.difference) < ctx.tolerance()


def test_value_at_mpf_point(ctx):
    """Test evaluation at a finite-precision point."""
    tri = convolve(box_density(1), box_density(1))
    value = value_at(tri, mp.mpf("0.5"), ctx)
    assert _close(value, mp.mpf("0.375"))


def test_rhs_single_width(ctx):
    """Test the integral of sinc(x) is pi/2."""
    assert _close(rhs_integral(SincSequence(a=[1]), ctx), mp.pi / 2)


def test_rhs_plateau_then_drop(ctx):
    """Test the odd-reciprocal integrals stay at pi/2 through 1/13 and drop at 1/15."""
    plateau = rhs_integral(odd_reciprocals(6), ctx)
    dropped = rhs_integral(odd_reciprocals(7), ctx)
    with ctx.activate():
        assert _close(plateau, mp.pi / 2)
        assert dropped < mp.pi / 2
        assert mp.pi / 2 - dropped > mp.mpf(10) ** -12


def test_rhs_plateau_with_wide_first_factor(ctx):
    """Test the integral is pi/(2 a_0) while the remaining widths sum to at most a_0."""
    seq = SincSequence(a=[2, "1/2", "1/3", "1/7"])
    with ctx.activate():
        assert _close(rhs_integral(seq, ctx), mp.pi / 4)


def test_lhs_single_width_closed_form(ctx):
    """Test 1/2 + sum sinc(n) = pi/2."""
    seq = SincSequence(a=[1])
    assert _close(lhs_sum_direct(seq, ctx), mp.pi / 2)
    assert _close(lhs_sum_poisson(seq, ctx), mp.pi / 2)


def test_lhs_single_wide_width_refused(ctx):
    """Test the closed form is refused for a >= 2*pi."""
    with pytest.raises(LHSConvergenceError):
        lhs_sum_direct(SincSequence(a=[7]), ctx)


def test_direct_term_count():
    """Test the truncation length from the tail bound."""
    assert direct_term_count(SincSequence(a=[1, 1]), "0.25") == 4
    assert direct_term_count(SincSequence(a=[1] * 7), "1e-6") == 8
    assert direct_term_count(SincSequence(a=["1/100", 1, 1]), "1") == 100
    with pytest.raises(ValueError):
        direct_term_count(SincSequence(a=[1]), "1e-4")


def test_lhs_methods_agree_for_two_widths(ctx):
    """Test direct and Poisson sums agree to the tolerance."""
    seq = SincSequence(a=[1, 1])
    direct = lhs_sum_direct(seq, ctx, "1e-4")
    exact = lhs_sum_poisson(seq, ctx)
    with ctx.activate():
        assert abs(direct - exact) < mp.mpf("1e-3")


def test_direct_sum_cap():
    """Test an unreachable tolerance is refused."""
    with pytest.raises(LHSConvergenceError):
        lhs_sum_direct(SincSequence(a=[1, 1]), PrecisionContext(), "1e-9")


def test_identity_holds_for_odd_reciprocals(ctx):
    """Test equality for a_k = 1/(2k+1), N = 0..3."""
    for N in range(4):
        report = identity_check(odd_reciprocals(N), ctx)
        assert report.condition_holds
        with ctx.activate():
            assert abs(report.difference) < mp.mpf(10) ** -30
        assert report.length == N + 1


def test_identity_fails_for_seven_ones(ctx):
    """Test the left side exceeds the right once the widths pass 2*pi."""
    seq = constant_sequence(1, 7)
    report = identity_check(seq, ctx)
    assert not report.condition_holds
    with ctx.activate():
        assert report.difference > 0
        U = sequence_density(seq)
        gap = 2 * mp.pi * value_at(U, 2 * mp.pi, ctx)
        assert abs(report.difference - gap) < mp.mpf(10) ** -40
    assert report.method_agreement is not None
    assert report.method_agreement < mp.mpf("1e-5")
    assert report.direct_terms == 8


def test_identity_without_direct_check(ctx):
    """Test the report drops the cross-check when the direct sum is too long."""
    report = identity_check(SincSequence(a=[1, 1]), ctx, "1e-9")
    assert report.method_agreement is None
    assert report.lhs_direct is None
    assert report.direct_terms is None
    assert report.condition_holds
    assert "use the Poisson evaluation" in report.direct_skipped
    with ctx.activate():
        assert report.direct_tolerance == mp.mpf("1e-9")


def test_identity_reports_skipped_default_check(ctx):
    """Test two unit widths at the default tolerance report why the cross-check is missing."""
    report = identity_check(SincSequence(a=[1, 1]), ctx)
    assert report.direct_skipped is not None
    assert report.method_agreement is None
    with ctx.activate():
        assert report.direct_tolerance == mp.mpf("1e-6")


def test_identity_reports_cross_check_ran(ctx):
    """Test a completed cross-check leaves no skip reason."""
    report = identity_check(constant_sequence(1, 7), ctx)
    assert report.direct_skipped is None
    assert report.direct_terms == 8


def test_out_of_desk_scale(ctx):
    """Test long sequences are refused."""
    with pytest.raises(OutOfDeskScaleError):
        identity_check(odd_reciprocals(40249), ctx)
