"""Envelopes for the CDF and the expectation of a bounded-density variable.

If a random variable on ``[a, b]`` has a density with ``m <= f <= M``, its
CDF ``F`` has every secant slope in ``[m, M]``. The rules then apply to
``F``, with ``F(a) = 0``, ``F(b) = 1`` and ``int_a^b F = b - E(X)``. Each
rule inequality becomes a linear constraint on ``Pr(X <= x)``, or on
``E(X)`` when ``x`` is an endpoint. The envelopes below intersect all of
those constraints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Interval, RuleParams, SlopeBounds, _abs_integral, _kernel_max, _require_finite
from .errors import DomainError, InconsistentInputsError

# Slack for the total-probability check and for intersecting intervals that
# should touch exactly (e.g. the uniform density, where every envelope is a point).
_RTOL = 1e-12


@dataclass(frozen=True)
class DensityModel:
    support: Interval
    m: float
    M: float
    expectation: float | None = None

    def __post_init__(self):
        iv = self.support
        m = _require_finite("m", self.m)
        M = _require_finite("M", self.M)
        if iv.degenerate:
            raise DomainError("a density needs a support of positive width")
        if not 0 <= m <= M:
            raise DomainError(f"need 0 <= m <= M, got m={m!r}, M={M!r}")
        d = iv.width()
        if m * d > 1 + _RTOL or M * d < 1 - _RTOL:
            raise DomainError(
                f"density bounds cannot integrate to 1: m*(b-a)={m * d!r}, M*(b-a)={M * d!r}"
            )
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "M", M)
        if self.expectation is not None:
            e = _require_finite("expectation", self.expectation)
            if not iv.a <= e <= iv.b:
                raise DomainError(f"expectation {e!r} outside support [{iv.a!r}, {iv.b!r}]")
            object.__setattr__(self, "expectation", e)

    def require_expectation(self) -> float:
        if self.expectation is None:
            raise DomainError("this envelope needs the expectation E(X)")
        return self.expectation


@dataclass(frozen=True)
class Constraint:
    """``|value - center| <= radius`` for one named inequality.

    ``published_radius`` is set when the source formula was printed with a
    different right-hand side than the one derived here.
    """

    name: str
    center: float
    radius: float
    published_radius: float | None = None

    @property
    def lo(self) -> float:
        return self.center - self.radius

    @property
    def hi(self) -> float:
        return self.center + self.radius


@dataclass(frozen=True)
class ProbabilityEnvelope:
    lo: float
    hi: float

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, p: float) -> bool:
        return self.lo <= p <= self.hi


@dataclass(frozen=True)
class CheckRow:
    name: str
    lhs: float
    rhs: float
    passed: bool


@dataclass(frozen=True)
class MidpointCheck:
    rows: tuple[CheckRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)


def _intersect(constraints, lo_clip: float, hi_clip: float, what: str) -> tuple[float, float]:
    lo = max(c.lo for c in constraints)
    hi = min(c.hi for c in constraints)
    slack = _RTOL * max(1.0, abs(lo), abs(hi))
    if lo > hi:
        if lo - hi > slack:
            raise InconsistentInputsError(f"{what}: constraints do not intersect ({lo!r} > {hi!r})")
        lo = hi = 0.5 * (lo + hi)
    lo, hi = max(lo, lo_clip), min(hi, hi_clip)
    if lo > hi:
        if lo - hi > slack:
            raise InconsistentInputsError(f"{what}: envelope [{lo!r}, {hi!r}] falls outside [{lo_clip!r}, {hi_clip!r}]")
        lo = hi = min(max(lo, lo_clip), hi_clip)
    return lo, hi


def cdf_constraints(dm: DensityModel, x: float, h: float) -> list[Constraint]:
    """The three rule inequalities, each solved for ``Pr(X <= x)``."""
    iv = dm.support
    E = dm.require_expectation()
    p = RuleParams.for_interval(iv, h, x)
    if p.h == 1.0:
        raise DomainError("h = 1 removes Pr(X <= x) from every inequality; use h < 1")
    a, b, d = iv.a, iv.b, iv.width()
    m, M = dm.m, dm.M
    u = p.x - iv.mid
    scale = d * (1 - p.h)
    tail = b - E
    kmax = _kernel_max(a, b, p.h, p.x)
    terms = [
        ("midrange", (M + m) / 2, 0.5 * _abs_integral(a, b, p.h, p.x) * (M - m)),
        ("floor", m, d * kmax * max(1 / d - m, 0.0)),
        ("ceiling", M, d * kmax * max(M - 1 / d, 0.0)),
    ]
    return [
        Constraint(name, (tail + d * slope * u * (1 - p.h) - d * p.h / 2) / scale, radius / scale)
        for name, slope, radius in terms
    ]


def cdf_envelope(dm: DensityModel, x: float, h: float = 0.5) -> ProbabilityEnvelope:
    """Interval certain to contain ``Pr(X <= x)``, clipped to ``[0, 1]``."""
    lo, hi = _intersect(cdf_constraints(dm, x, h), 0.0, 1.0, "cdf envelope")
    return ProbabilityEnvelope(lo, hi)


def cdf_midpoint_check(dm: DensityModel, pr_mid: float) -> MidpointCheck:
    """Check a claimed ``Pr(X <= (a+b)/2)`` against the three midpoint inequalities."""
    E = dm.require_expectation()
    pr_mid = _require_finite("pr_mid", pr_mid)
    if not 0 <= pr_mid <= 1:
        raise DomainError(f"probability must lie in [0, 1], got {pr_mid!r}")
    d = dm.support.width()
    lhs = abs(0.5 * pr_mid + 0.25 - (dm.support.b - E) / d)
    rows = []
    for name, rhs in (
        ("midrange", d / 16 * (dm.M - dm.m)),
        ("floor", d / 4 * (1 / d - dm.m)),
        ("ceiling", d / 4 * (dm.M - 1 / d)),
    ):
        rows.append(CheckRow(name, lhs, rhs, lhs <= rhs * (1 + _RTOL) + _RTOL))
    return MidpointCheck(tuple(rows))


def expectation_constraints(dm: DensityModel) -> list[Constraint]:
    """Constraints on ``E(X)`` from the three-point inequalities at ``x = a`` and ``x = b``.

    At ``x = a`` the floor and ceiling radii are ``3/4 (b-a)(1 - m(b-a))``
    and ``3/4 (b-a)(M(b-a) - 1)``; the published versions print
    ``3/4 (b-a)^2 (M-m)`` for both, kept in ``published_radius`` for audit.
    """
    iv = dm.support
    a, b, d = iv.a, iv.b, iv.width()
    m, M = dm.m, dm.M
    printed = 0.75 * d * d * (M - m)
    near_b = (a + 3 * b) / 4
    near_a = (3 * a + b) / 4
    mid_r = 3 / 16 * d * d * (M - m)
    floor_r = 0.75 * d * max(1 - m * d, 0.0)
    ceil_r = 0.75 * d * max(M * d - 1, 0.0)
    return [
        Constraint("midrange@a", near_b - (M + m) * d * d / 8, mid_r),
        Constraint("floor@a", near_b - m * d * d / 4, floor_r, printed),
        Constraint("ceiling@a", near_b - M * d * d / 4, ceil_r, printed),
        Constraint("midrange@b", near_a + (M + m) * d * d / 8, mid_r),
        Constraint("floor@b", near_a + m * d * d / 4, floor_r),
        Constraint("ceiling@b", near_a + M * d * d / 4, ceil_r),
    ]


def expectation_envelope(dm: DensityModel) -> Interval:
    """Interval certain to contain ``E(X)``, clipped to the support."""
    lo, hi = _intersect(expectation_constraints(dm), dm.support.a, dm.support.b, "expectation envelope")
    return Interval(lo, hi)


def cdf_as_lipschitz(dm: DensityModel) -> SlopeBounds:
    """Slope envelope of the CDF: the density bounds themselves."""
    return SlopeBounds(dm.m, dm.M)
