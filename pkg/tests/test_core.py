import math

import pytest
from hypothesis import given, settings, strategies as st

from certquad import (
    DegenerateIntervalError,
    DomainError,
    Interval,
    RuleParams,
    SlopeBounds,
    kernel_abs_integral,
    kernel_max,
    peano_kernel,
    secant_slope,
)

from oracles import kernel_abs_integral_numeric, kernel_max_numeric

UNIT = Interval(0.0, 1.0)


@st.composite
def interval_and_params(draw):
    a = draw(st.floats(-50, 50))
    d = draw(st.floats(1e-3, 20))
    iv = Interval(a, a + d)
    h = draw(st.floats(0, 1))
    lo, hi = iv.admissible_range(h)
    w = draw(st.floats(0, 1))
    x = min(max(lo + w * (hi - lo), lo), hi)
    return iv, RuleParams(h, x)


class TestTypes:
    def test_interval_rejects_reversed(self):
        with pytest.raises(DomainError):
            Interval(1.0, 0.0)

    def test_interval_rejects_nan(self):
        with pytest.raises(DomainError):
            Interval(math.nan, 1.0)

    def test_rule_params_h_range(self):
        with pytest.raises(DomainError):
            RuleParams(1.5, 0.0)
        with pytest.raises(DomainError):
            RuleParams(-0.1, 0.0)

    def test_out_of_range_x_is_an_error_not_a_clamp(self):
        with pytest.raises(DomainError):
            RuleParams.for_interval(UNIT, 0.5, 0.1)
        with pytest.raises(DomainError):
            kernel_max(UNIT, RuleParams(0.5, 0.9))

    def test_h_one_admits_only_the_midpoint(self):
        assert RuleParams.for_interval(UNIT, 1.0).x == 0.5
        with pytest.raises(DomainError):
            RuleParams.for_interval(UNIT, 1.0, 0.5 + 1e-9)

    def test_midpoint_admissible_at_h_one_despite_rounding(self):
        iv = Interval(0.1, 0.7)
        RuleParams.for_interval(iv, 1.0, (0.1 + 0.7) / 2)

    def test_slope_bounds(self):
        with pytest.raises(DomainError):
            SlopeBounds(2.0, 1.0)
        assert SlopeBounds(1.0, 1.0).spread == 0.0
        assert SlopeBounds.from_lipschitz(3.0) == SlopeBounds(-3.0, 3.0)
        with pytest.raises(DomainError):
            SlopeBounds.from_lipschitz(-1.0)


class TestKernel:
    def test_left_branch(self):
        assert peano_kernel(UNIT, RuleParams(0.0, 0.5), 0.25) == 0.25

    def test_branch_at_x_is_left(self):
        assert peano_kernel(UNIT, RuleParams(1.0, 0.5), 0.5) == 0.0
        # h = 0: left branch gives t - a, right branch would give t - b.
        assert peano_kernel(UNIT, RuleParams(0.0, 0.5), 0.5) == 0.5

    def test_right_branch(self):
        assert peano_kernel(UNIT, RuleParams(0.5, 0.5), 0.9) == pytest.approx(0.15, abs=1e-15)

    def test_t_outside_interval(self):
        with pytest.raises(DomainError):
            peano_kernel(UNIT, RuleParams(0.0, 0.5), 1.5)

    def test_abs_integral_values(self):
        assert kernel_abs_integral(UNIT, RuleParams(0.0, 0.5)) == 0.25
        assert kernel_abs_integral(UNIT, RuleParams(0.5, 0.5)) == 0.125

    @pytest.mark.parametrize("h,x", [(0.0, 0.2), (0.25, 0.7), (1 / 3, 0.5), (0.9, 0.52), (1.0, 0.5)])
    def test_abs_integral_matches_numeric(self, h, x):
        iv = Interval(-0.3, 1.9)
        x = iv.a + x * iv.width()
        x = min(max(x, iv.admissible_range(h)[0]), iv.admissible_range(h)[1])
        got = kernel_abs_integral(iv, RuleParams(h, x))
        assert got == pytest.approx(kernel_abs_integral_numeric(iv.a, iv.b, h, x), rel=1e-8)

    def test_max_values(self):
        for x in (0.0, 0.3, 0.5, 1.0):
            assert kernel_max(UNIT, RuleParams(0.0, x)) == pytest.approx(0.5 + abs(x - 0.5), abs=1e-15)
        assert kernel_max(UNIT, RuleParams(1.0, 0.5)) == 0.5
        assert kernel_max(UNIT, RuleParams(1 / 3, 0.7)) == pytest.approx(1 / 3 + 0.2, abs=1e-15)

    @settings(max_examples=40, deadline=None)
    @given(interval_and_params())
    def test_max_matches_grid(self, case):
        iv, p = case
        got = kernel_max(iv, p)
        assert abs(got - kernel_max_numeric(iv.a, iv.b, p.h, p.x)) <= 1e-9 * iv.width()

    @settings(max_examples=200, deadline=None)
    @given(interval_and_params())
    def test_closed_form_max_identities(self, case):
        iv, p = case
        d = iv.width()
        # max|p| = d * c(h) + |x - mid| with c = 1/2, 1/4, 1/3 at h = 0, 1/2, 1/3; d/2 at h = 1.
        for h, c in ((0.0, 1 / 2), (0.5, 1 / 4), (1 / 3, 1 / 3), (1.0, 1 / 2)):
            lo, hi = iv.admissible_range(h)
            x = iv.mid if h == 1.0 else min(max(p.x, lo), hi)
            want = d * c + abs(x - iv.mid)
            scale = max(abs(iv.a), abs(iv.b), d)
            assert kernel_max(iv, RuleParams(h, x)) == pytest.approx(want, rel=1e-12, abs=16 * math.ulp(scale))

    def test_abs_integral_minimised_at_half(self):
        iv = Interval(2.0, 5.0)
        values = [kernel_abs_integral(iv, RuleParams(i / 100, iv.mid)) for i in range(101)]
        assert min(values) == values[50]

    def test_degenerate_interval(self):
        iv = Interval(2.0, 2.0)
        p = RuleParams.for_interval(iv, 0.3)
        assert kernel_abs_integral(iv, p) == 0.0
        assert kernel_max(iv, p) == 0.0


class TestSecant:
    def test_values(self):
        assert secant_slope(lambda t: t * t, UNIT) == 1.0
        assert secant_slope(lambda t: 4.2, Interval(-3, 8)) == 0.0
        assert secant_slope(lambda t: 3 * t - 5, Interval(2, 7)) == 3.0

    def test_degenerate(self):
        with pytest.raises(DegenerateIntervalError):
            secant_slope(lambda t: t, Interval(1, 1))
