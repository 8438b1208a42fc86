import math

import numpy as np
import pytest
from scipy import integrate

from certquad import DomainError, InconsistentInputsError, Interval, RuleParams, SlopeBounds, kernel_abs_integral
from certquad.approx import oracle_integral
from certquad.prob import (
    DensityModel,
    cdf_as_lipschitz,
    cdf_constraints,
    cdf_envelope,
    cdf_midpoint_check,
    expectation_constraints,
    expectation_envelope,
)
from certquad.rules import rule_midrange

UNIT = Interval(0.0, 1.0)
_Z = 1 - math.exp(-2)


class Density:
    """A test density with its CDF in closed form."""

    def __init__(self, name, iv, pdf, cdf, m, M):
        self.name, self.iv, self.pdf, self.cdf = name, iv, pdf, cdf
        self.E = integrate.quad(lambda t: t * pdf(t), iv.a, iv.b, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
        self.model = DensityModel(iv, m, M, self.E)


DENSITIES = [
    Density("uniform", UNIT, lambda t: 1.0, lambda x: x, 1.0, 1.0),
    Density("uniform-wide", Interval(-2.0, 3.0), lambda t: 0.2, lambda x: (x + 2) / 5, 0.2, 0.2),
    Density("ramp", UNIT, lambda t: 2 * t, lambda x: x * x, 0.0, 2.0),
    Density("truncexp", Interval(0.0, 2.0), lambda t: math.exp(-t) / _Z,
            lambda x: (1 - math.exp(-x)) / _Z, math.exp(-2) / _Z, 1 / _Z),
    Density("tent", Interval(-1.0, 1.0), lambda t: 1 - abs(t),
            lambda x: (x + 1) ** 2 / 2 if x <= 0 else 1 - (1 - x) ** 2 / 2, 0.0, 1.0),
]


def ramp():
    return DensityModel(UNIT, 0.0, 2.0, 2 / 3)


class TestModel:
    def test_rejects_impossible_bounds(self):
        with pytest.raises(DomainError):
            DensityModel(UNIT, 1.5, 2.0)
        with pytest.raises(DomainError):
            DensityModel(UNIT, 0.0, 0.5)
        with pytest.raises(DomainError):
            DensityModel(UNIT, 2.0, 1.0)
        with pytest.raises(DomainError):
            DensityModel(UNIT, 0.0, 2.0, 1.5)

    def test_truncated_exponential_expectation(self):
        d = DENSITIES[3]
        assert d.E == pytest.approx((1 - 3 * math.exp(-2)) / _Z, rel=1e-13)

    def test_missing_expectation(self):
        with pytest.raises(DomainError):
            cdf_envelope(DensityModel(UNIT, 0.0, 2.0), 0.5)


class TestCdfEnvelope:
    def test_ramp_example(self):
        env = cdf_envelope(ramp(), 0.5, 0.0)
        assert env.lo == pytest.approx(1 / 12, abs=1e-15)
        assert env.hi == pytest.approx(7 / 12, abs=1e-15)
        assert env.contains(0.25)

    def test_ramp_floor_and_ceiling_rows(self):
        rows = {c.name: c for c in cdf_constraints(ramp(), 0.5, 0.0)}
        for name in ("floor", "ceiling"):
            assert rows[name].lo == pytest.approx(-1 / 6, abs=1e-15)
            assert rows[name].hi == pytest.approx(5 / 6, abs=1e-15)

    @pytest.mark.parametrize("x", [0.0, 0.3, 0.5, 0.81, 1.0])
    @pytest.mark.parametrize("h", [0.0, 0.3])
    def test_uniform_collapses(self, x, h):
        dm = DensityModel(UNIT, 1.0, 1.0, 0.5)
        lo, hi = UNIT.admissible_range(h)
        x = min(max(x, lo), hi)
        env = cdf_envelope(dm, x, h)
        assert env.width == 0.0
        assert env.lo == pytest.approx(x, abs=1e-15)

    @pytest.mark.parametrize("dens", DENSITIES, ids=lambda d: d.name)
    def test_endpoints(self, dens):
        assert cdf_envelope(dens.model, dens.iv.a, 0.0).contains(0.0)
        assert cdf_envelope(dens.model, dens.iv.b, 0.0).contains(1.0)

    @pytest.mark.parametrize("dens", DENSITIES, ids=lambda d: d.name)
    def test_contains_true_cdf(self, dens):
        iv = dens.iv
        for h in np.linspace(0.0, 0.95, 20):
            lo, hi = iv.admissible_range(h)
            for w in np.linspace(0.0, 1.0, 9):
                x = min(max(lo + w * (hi - lo), lo), hi)
                env = cdf_envelope(dens.model, x, h)
                assert 0.0 <= env.lo <= env.hi <= 1.0
                assert env.lo - 1e-12 <= dens.cdf(x) <= env.hi + 1e-12, (h, x)

    def test_h_one_rejected(self):
        with pytest.raises(DomainError):
            cdf_envelope(ramp(), 0.5, 1.0)

    def test_inadmissible_x_rejected(self):
        with pytest.raises(DomainError):
            cdf_envelope(ramp(), 0.1, 0.5)

    def test_inconsistent_expectation(self):
        dm = DensityModel(UNIT, 1.0, 1.0, 0.3)
        with pytest.raises(InconsistentInputsError):
            cdf_envelope(dm, 0.9, 0.0)

    def test_width_over_h_at_midpoint(self):
        # The midrange right side is smallest at h = 1/2, but dividing by the
        # Pr coefficient (1 - h) moves the unclipped envelope's narrowest point
        # to 1 - 1/sqrt(2). Clipping to [0, 1] moves it again.
        dm = ramp()
        hs = np.linspace(0.0, 0.99, 991)
        rhs = [0.5 * kernel_abs_integral(UNIT, RuleParams(h, 0.5)) * (dm.M - dm.m) for h in hs]
        raw = []
        for h in hs:
            cs = cdf_constraints(dm, 0.5, h)
            raw.append(min(c.hi for c in cs) - max(c.lo for c in cs))
        clipped = [cdf_envelope(dm, 0.5, h).width for h in hs]
        assert hs[int(np.argmin(rhs))] == pytest.approx(0.5, abs=1e-12)
        assert hs[int(np.argmin(raw))] == pytest.approx(1 - 1 / math.sqrt(2), abs=1e-3)
        assert min(clipped) < cdf_envelope(dm, 0.5, 0.5).width


class TestMidpointCheck:
    def test_uniform_equality(self):
        check = cdf_midpoint_check(DensityModel(UNIT, 1.0, 1.0, 0.5), 0.5)
        assert check.passed
        assert check.rows[0].lhs == 0.0 and check.rows[0].rhs == 0.0

    def test_ramp_rows(self):
        check = cdf_midpoint_check(ramp(), 0.25)
        rows = {r.name: r for r in check.rows}
        assert rows["midrange"].lhs == pytest.approx(1 / 24, abs=1e-15)
        assert rows["midrange"].rhs == pytest.approx(1 / 8, abs=1e-15)
        assert rows["floor"].rhs == pytest.approx(1 / 4, abs=1e-15)
        assert check.passed

    def test_false_claim_fails(self):
        assert not cdf_midpoint_check(ramp(), 1.0).passed

    @pytest.mark.parametrize("dens", DENSITIES, ids=lambda d: d.name)
    def test_true_value_passes(self, dens):
        assert cdf_midpoint_check(dens.model, dens.cdf(dens.iv.mid)).passed

    def test_rejects_bad_probability(self):
        with pytest.raises(DomainError):
            cdf_midpoint_check(ramp(), 1.5)


class TestExpectation:
    def test_ramp_midrange_interval(self):
        rows = {c.name: c for c in expectation_constraints(DensityModel(UNIT, 0.0, 2.0))}
        assert rows["midrange@a"].lo == pytest.approx(1 / 8, abs=1e-15)
        assert rows["midrange@a"].hi == pytest.approx(7 / 8, abs=1e-15)
        env = expectation_envelope(DensityModel(UNIT, 0.0, 2.0))
        assert env.contains(2 / 3)
        assert 1 / 8 - 1e-15 <= env.a and env.b <= 7 / 8 + 1e-15

    def test_uniform_point(self):
        env = expectation_envelope(DensityModel(UNIT, 1.0, 1.0))
        assert env.a == pytest.approx(0.5, abs=1e-15)
        assert env.width() == pytest.approx(0.0, abs=1e-15)
        rows = {c.name: c for c in expectation_constraints(DensityModel(UNIT, 1.0, 1.0))}
        assert abs(0.5 - rows["floor@a"].center) == pytest.approx(0.0, abs=1e-15)
        assert rows["floor@a"].radius == 0.0

    @pytest.mark.parametrize("dens", DENSITIES, ids=lambda d: d.name)
    def test_contains_true_expectation(self, dens):
        iv = Interval(dens.iv.a, dens.iv.b)
        env = expectation_envelope(DensityModel(iv, dens.model.m, dens.model.M))
        assert env.a - 1e-12 <= dens.E <= env.b + 1e-12
        assert iv.a <= env.a <= env.b <= iv.b


class TestLipschitzView:
    def test_slope_bounds(self):
        assert cdf_as_lipschitz(DensityModel(UNIT, 1.0, 1.0)) == SlopeBounds(1.0, 1.0)
        assert cdf_as_lipschitz(ramp()) == SlopeBounds(0.0, 2.0)

    @pytest.mark.parametrize("dens", DENSITIES, ids=lambda d: d.name)
    def test_rule_on_cdf_holds(self, dens):
        s = cdf_as_lipschitz(dens.model)
        exact = oracle_integral(dens.cdf, dens.iv, 10_000)
        for h in (0.0, 0.5, 1.0):
            est = rule_midrange(dens.cdf, dens.iv, RuleParams.for_interval(dens.iv, h), s)
            assert abs(est.value - exact) <= est.bound + 1e-10
            # The integral of F is b - E.
            assert exact == pytest.approx(dens.iv.b - dens.E, abs=1e-6)
