"""Domain types and Peano-kernel arithmetic shared by the rule modules.

The rules in :mod:`certquad.rules` pair a weighted quadrature value with an
error ceiling. Both come out of the piecewise-linear kernel

    p(x, t) = t - (a + h(b-a)/2)    for t in [a, x]
              t - (b - h(b-a)/2)    for t in (x, b]

whose absolute integral and supremum over ``[a, b]`` have closed forms.
Those closed forms are what the certificates use; numeric integration of the
kernel is only ever used as a test oracle.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from .errors import DegenerateIntervalError, DomainError

Integrand = Callable[[float], float]


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class Interval:
    """Closed integration domain ``[a, b]`` with ``a <= b``."""

    a: float
    b: float

    def __post_init__(self):
        a = _require_finite("a", self.a)
        b = _require_finite("b", self.b)
        if a > b:
            raise DomainError(f"interval endpoints out of order: a={a!r} > b={b!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def width(self) -> float:
        return self.b - self.a

    @property
    def mid(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def degenerate(self) -> bool:
        return self.a == self.b

    def contains(self, t: float) -> bool:
        return self.a <= t <= self.b

    def admissible_range(self, h: float) -> tuple[float, float]:
        """Range of evaluation points ``x`` allowed for weight ``h``."""
        half = h * self.width() / 2
        return self.a + half, self.b - half

    def _slack(self) -> float:
        # Rounding allowance for admissibility tests, e.g. x = (a+b)/2 at h = 1.
        return 8 * math.ulp(max(abs(self.a), abs(self.b), self.width()))


@dataclass(frozen=True)
class RuleParams:
    """The ``(h, x)`` pair selecting a member of the perturbed rule family.

    ``h`` weighs the endpoint (trapezoid) contribution against the interior
    point ``x``. Use :meth:`for_interval` to build params that are checked
    against an interval; rules re-check admissibility on every call.
    """

    h: float
    x: float

    def __post_init__(self):
        h = _require_finite("h", self.h)
        x = _require_finite("x", self.x)
        if not 0.0 <= h <= 1.0:
            raise DomainError(f"h must lie in [0, 1], got {h!r}")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "x", x)

    @classmethod
    def for_interval(cls, iv: Interval, h: float = 0.5, x: float | None = None) -> RuleParams:
        p = cls(h, iv.mid if x is None else x)
        p.check(iv)
        return p

    def admissible(self, iv: Interval) -> bool:
        lo, hi = iv.admissible_range(self.h)
        slack = iv._slack()
        return lo - slack <= self.x <= hi + slack

    def check(self, iv: Interval) -> None:
        if not self.admissible(iv):
            lo, hi = iv.admissible_range(self.h)
            raise DomainError(
                f"x={self.x!r} is not admissible for h={self.h!r} on "
                f"[{iv.a!r}, {iv.b!r}]; need {lo!r} <= x <= {hi!r}"
            )


@dataclass(frozen=True)
class SlopeBounds:
    """Envelope ``l <= (f(y) - f(x)) / (y - x) <= L`` on every secant.

    ``l == L`` is accepted and describes an affine integrand exactly.
    """

    l: float
    L: float

    def __post_init__(self):
        l = _require_finite("l", self.l)
        L = _require_finite("L", self.L)
        if l > L:
            raise DomainError(f"slope bounds out of order: l={l!r} > L={L!r}")
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "L", L)

    @classmethod
    def from_lipschitz(cls, L: float) -> SlopeBounds:
        """Symmetric envelope ``(-L, L)`` of an ``L``-Lipschitz function."""
        L = _require_finite("L", L)
        if L < 0:
            raise DomainError(f"Lipschitz constant must be non-negative, got {L!r}")
        return cls(-L, L)

    @property
    def spread(self) -> float:
        return self.L - self.l

    def contains(self, slope: float) -> bool:
        return self.l <= slope <= self.L


class Rule(str, enum.Enum):
    MIDRANGE = "midrange"
    LOWER = "lower"
    UPPER = "upper"
    LIPSCHITZ = "lipschitz"


@dataclass(frozen=True)
class CertifiedEstimate:
    """Quadrature value with a rigorous ceiling on its absolute error.

    ``secant`` is ``(f(b) - f(a)) / (b - a)``, kept for auditing; it is
    ``None`` on a degenerate interval.
    """

    value: float
    bound: float
    rule: Rule
    params: RuleParams
    secant: float | None
    interval: Interval

    def contains(self, exact: float, rtol: float = 0.0, atol: float = 0.0) -> bool:
        return abs(self.value - exact) <= self.bound * (1 + rtol) + atol


# Float-level kernel formulas. Callers validate; these never raise.

def _kernel(a: float, b: float, h: float, x: float, t: float) -> float:
    half = h * (b - a) / 2
    if t <= x:
        return t - (a + half)
    return t - (b - half)


def _abs_integral(a: float, b: float, h: float, x: float) -> float:
    # Exact for admissible x; for other x in [a, b] it over-estimates,
    # which keeps composite cells with arbitrary interior points sound.
    d = b - a
    u = x - 0.5 * (a + b)
    return d * d / 4 * (h * h + (h - 1) * (h - 1)) + u * u


def _kernel_max(a: float, b: float, h: float, x: float) -> float:
    half = h * (b - a) / 2
    return max(half, x - a - half, b - x - half)


def peano_kernel(iv: Interval, p: RuleParams, t: float) -> float:
    """Evaluate the kernel ``p(x, t)``; the left branch is closed at ``t = x``."""
    p.check(iv)
    t = _require_finite("t", t)
    if not iv.contains(t):
        raise DomainError(f"t={t!r} outside [{iv.a!r}, {iv.b!r}]")
    return _kernel(iv.a, iv.b, p.h, p.x, t)


def kernel_abs_integral(iv: Interval, p: RuleParams) -> float:
    """Closed form of the integral of ``|p(x, t)|`` over ``[a, b]``."""
    p.check(iv)
    if iv.degenerate:
        return 0.0
    return _abs_integral(iv.a, iv.b, p.h, p.x)


def kernel_max(iv: Interval, p: RuleParams) -> float:
    """Supremum of ``|p(x, t)|`` over ``[a, b]``."""
    p.check(iv)
    if iv.degenerate:
        return 0.0
    return _kernel_max(iv.a, iv.b, p.h, p.x)


def secant_slope(f: Integrand, iv: Interval) -> float:
    if iv.degenerate:
        raise DegenerateIntervalError(f"secant slope undefined on degenerate interval [{iv.a!r}, {iv.b!r}]")
    return (f(iv.b) - f(iv.a)) / iv.width()
