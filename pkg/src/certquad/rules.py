"""Single-interval perturbed Ostrowski rules with certified error bounds.

Every rule evaluates the integrand at ``a``, ``b`` and one interior point
``x`` and returns

    value = (b-a) * { [f(x) - c * (x - (a+b)/2)] * (1-h) + (f(a)+f(b))/2 * h }

for a slope correction ``c`` that depends on the family:

* ``MIDRANGE``  c = (L+l)/2, bound = 1/2 * int|p| * (L-l)
* ``LOWER``     c = l,       bound = (b-a) * max|p| * (S-l)
* ``UPPER``     c = L,       bound = (b-a) * max|p| * (L-S)
* ``LIPSCHITZ`` c = 0,       bound = int|p| * L       (the (-L, L) case)

with ``S`` the secant slope over ``[a, b]``. ``h = 0, 1, 1/2, 1/3`` give
the perturbed midpoint, trapezoid, three-point and Simpson rules.
"""

from __future__ import annotations

import enum
import math
import sys

from .core import (
    CertifiedEstimate,
    Integrand,
    Interval,
    Rule,
    RuleParams,
    SlopeBounds,
    _abs_integral,
    _kernel_max,
    _require_finite,
)
from .errors import DomainError, SlopeConsistencyError

_EPS = sys.float_info.epsilon


class Preset(enum.Enum):
    MIDPOINT = "midpoint"
    TRAPEZOID = "trapezoid"
    THREEPOINT = "threepoint"
    SIMPSON = "simpson"

    @property
    def h(self) -> float:
        return _PRESET_H[self]


_PRESET_H = {
    Preset.MIDPOINT: 0.0,
    Preset.TRAPEZOID: 1.0,
    Preset.THREEPOINT: 0.5,
    Preset.SIMPSON: 1.0 / 3.0,
}

FAMILIES = (Rule.MIDRANGE, Rule.LOWER, Rule.UPPER)


def evaluate(f: Integrand, t: float) -> float:
    y = float(f(t))
    if not math.isfinite(y):
        raise DomainError(f"integrand returned non-finite value {y!r} at t={t!r}")
    return y


def _weighted_value(a, b, h, x, fa, fb, fx, slope):
    u = x - 0.5 * (a + b)
    return (b - a) * ((fx - slope * u) * (1 - h) + (fa + fb) / 2 * h)


def _secant_tolerance(fa, fb, d, slope):
    # Worst-case rounding of the computed secant; below it a mismatch is noise.
    return 4 * _EPS * ((abs(fa) + abs(fb)) / d + abs(slope))


def _cell_estimate(rule, a, b, h, x, fa, fb, fx, l, L, cell=None):
    """Value and bound of one family on ``[a, b]`` from precomputed samples.

    For ``LOWER`` only ``l`` is read, for ``UPPER`` only ``L``; for
    ``LIPSCHITZ`` ``L`` is the Lipschitz constant. Returns
    ``(value, bound, secant)``.
    """
    d = b - a
    S = (fb - fa) / d
    if rule is Rule.MIDRANGE:
        value = _weighted_value(a, b, h, x, fa, fb, fx, (L + l) / 2)
        bound = 0.5 * _abs_integral(a, b, h, x) * (L - l)
    elif rule is Rule.LIPSCHITZ:
        value = d * (fx * (1 - h) + (fa + fb) / 2 * h)
        bound = _abs_integral(a, b, h, x) * L
    elif rule is Rule.LOWER:
        gap = S - l
        if gap < -_secant_tolerance(fa, fb, d, l):
            where = "" if cell is None else f" in cell {cell} [{a!r}, {b!r}]"
            raise SlopeConsistencyError(
                f"secant slope S={S!r} is below declared lower slope l={l!r}{where}",
                secant=S, bound=l, cell=cell,
            )
        value = _weighted_value(a, b, h, x, fa, fb, fx, l)
        bound = d * _kernel_max(a, b, h, x) * max(gap, 0.0)
    elif rule is Rule.UPPER:
        gap = L - S
        if gap < -_secant_tolerance(fa, fb, d, L):
            where = "" if cell is None else f" in cell {cell} [{a!r}, {b!r}]"
            raise SlopeConsistencyError(
                f"secant slope S={S!r} exceeds declared upper slope L={L!r}{where}",
                secant=S, bound=L, cell=cell,
            )
        value = _weighted_value(a, b, h, x, fa, fb, fx, L)
        bound = d * _kernel_max(a, b, h, x) * max(gap, 0.0)
    else:
        raise DomainError(f"unknown rule family {rule!r}")
    return value, bound, S


def _estimate(rule, f, iv, p, l, L):
    p.check(iv)
    if iv.degenerate:
        return CertifiedEstimate(0.0, 0.0, rule, p, None, iv)
    fa, fb, fx = evaluate(f, iv.a), evaluate(f, iv.b), evaluate(f, p.x)
    value, bound, S = _cell_estimate(rule, iv.a, iv.b, p.h, p.x, fa, fb, fx, l, L)
    return CertifiedEstimate(value, bound, rule, p, S, iv)


def rule_midrange(f: Integrand, iv: Interval, p: RuleParams, s: SlopeBounds) -> CertifiedEstimate:
    """Rule corrected by the mid-range slope ``(L+l)/2``; needs both slope bounds."""
    return _estimate(Rule.MIDRANGE, f, iv, p, s.l, s.L)


def rule_lower(f: Integrand, iv: Interval, p: RuleParams, l: float) -> CertifiedEstimate:
    """Rule corrected by the lower slope ``l``; the bound scales with ``S - l``.

    Raises :class:`SlopeConsistencyError` when the endpoint secant is below ``l``.
    """
    return _estimate(Rule.LOWER, f, iv, p, _require_finite("l", l), math.inf)


def rule_upper(f: Integrand, iv: Interval, p: RuleParams, L: float) -> CertifiedEstimate:
    """Mirror of :func:`rule_lower` using the upper slope ``L``."""
    return _estimate(Rule.UPPER, f, iv, p, -math.inf, _require_finite("L", L))


def rule_lipschitz(
    f: Integrand, iv: Interval, p: RuleParams, L: float, variant: str = "kernel"
) -> CertifiedEstimate:
    """Rules for an ``L``-Lipschitz integrand.

    ``variant="kernel"`` gives the uncorrected weighted value with bound
    ``int|p| * L``, identical to :func:`rule_midrange` with ``(-L, L)``.
    ``variant="secant"`` corrects by ``+L (x - (a+b)/2)`` with bound
    ``(b-a) * max|p| * (S + L)``, i.e. the lower family at ``l = -L``.
    """
    L = _require_finite("L", L)
    if L < 0:
        raise DomainError(f"Lipschitz constant must be non-negative, got {L!r}")
    if variant == "kernel":
        return _estimate(Rule.LIPSCHITZ, f, iv, p, -L, L)
    if variant == "secant":
        est = _estimate(Rule.LOWER, f, iv, p, -L, L)
        return CertifiedEstimate(est.value, est.bound, Rule.LIPSCHITZ, p, est.secant, iv)
    raise DomainError(f"unknown Lipschitz variant {variant!r}")


def rule_family(
    family: Rule, f: Integrand, iv: Interval, p: RuleParams, s: SlopeBounds
) -> CertifiedEstimate:
    """Dispatch to one of the three slope-envelope families."""
    if family is Rule.MIDRANGE:
        return rule_midrange(f, iv, p, s)
    if family is Rule.LOWER:
        return rule_lower(f, iv, p, s.l)
    if family is Rule.UPPER:
        return rule_upper(f, iv, p, s.L)
    raise DomainError(f"{family!r} is not a slope-envelope family")


def rule_preset(
    f: Integrand,
    iv: Interval,
    x: float | None,
    s: SlopeBounds,
    preset: Preset,
    family: Rule = Rule.MIDRANGE,
) -> CertifiedEstimate:
    """Perturbed midpoint/trapezoid/three-point/Simpson rule at point ``x``.

    ``x=None`` picks the interval midpoint (the only choice for the trapezoid).
    """
    p = RuleParams.for_interval(iv, preset.h, x)
    return rule_family(family, f, iv, p, s)


def best_rule(f: Integrand, iv: Interval, p: RuleParams, s: SlopeBounds) -> CertifiedEstimate:
    """Tightest of the three families; ties go to MIDRANGE, then LOWER, then UPPER."""
    p.check(iv)
    if iv.degenerate:
        return CertifiedEstimate(0.0, 0.0, Rule.MIDRANGE, p, None, iv)
    fa, fb, fx = evaluate(f, iv.a), evaluate(f, iv.b), evaluate(f, p.x)
    best = None
    for family in FAMILIES:
        value, bound, S = _cell_estimate(family, iv.a, iv.b, p.h, p.x, fa, fb, fx, s.l, s.L)
        if best is None or bound < best.bound:
            best = CertifiedEstimate(value, bound, family, p, S, iv)
    return best
