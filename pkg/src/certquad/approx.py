"""Heuristic slope estimation and the reference integrator used for checking.

Nothing here is certified. Sampled slopes are inner approximations of the
true envelope, and the Simpson oracle carries no error bound. Both exist
to *check* certificates, never to produce them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .core import Integrand, Interval, SlopeBounds
from .errors import DomainError


@dataclass(frozen=True)
class SlopeEstimate:
    l_hat: float
    L_hat: float
    samples: int
    # Sampling only sees secants between nodes: true l <= l_hat, L_hat <= true L.
    caveat: bool = True

    def as_bounds(self) -> SlopeBounds:
        """Promote to bounds. Only for explicitly heuristic use."""
        return SlopeBounds(self.l_hat, self.L_hat)


def _sample(f: Integrand, ts: np.ndarray) -> np.ndarray:
    ys = np.array([float(f(float(t))) for t in ts])
    bad = ~np.isfinite(ys)
    if bad.any():
        t = float(ts[np.argmax(bad)])
        raise DomainError(f"integrand is not finite at t={t!r}")
    return ys


def estimate_slopes(f: Integrand, iv: Interval, n: int) -> SlopeEstimate:
    """Min and max secant slope over ``n`` equal cells."""
    if n < 2:
        raise DomainError(f"need at least 2 cells to estimate slopes, got {n}")
    if iv.degenerate:
        raise DomainError("cannot estimate slopes on a degenerate interval")
    ts = np.linspace(iv.a, iv.b, n + 1)
    ys = _sample(f, ts)
    secants = np.diff(ys) / np.diff(ts)
    return SlopeEstimate(float(secants.min()), float(secants.max()), n + 1)


def oracle_integral(f: Integrand, iv: Interval, n: int = 10_000) -> float:
    """Classical composite Simpson rule on ``n`` (even) cells."""
    if n < 2 or n % 2:
        raise DomainError(f"Simpson oracle needs an even cell count >= 2, got {n}")
    if iv.degenerate:
        return 0.0
    ts = np.linspace(iv.a, iv.b, n + 1)
    value = float(simpson(_sample(f, ts), x=ts))
    if not math.isfinite(value):
        raise DomainError("oracle integral overflowed")
    return value
