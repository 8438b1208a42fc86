"""Composite perturbed rules over a subdivision, with per-cell certificates.

Each cell ``[x_i, x_{i+1}]`` gets the single-interval rule with interior
point ``xi_i``; the composite value and bound are the index-order sums of
the cell values and bounds. Node values are evaluated once and shared by
the two neighbouring cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import CertifiedEstimate, Integrand, Interval, Rule, RuleParams, SlopeBounds, _require_finite
from .errors import BudgetExceededError, DomainError
from .rules import _cell_estimate, evaluate


def ordered_sum(values: Iterable[float]) -> float:
    """Plain left-to-right float sum (no compensation, fixed order)."""
    total = 0.0
    for v in values:
        total += v
    return total


@dataclass(frozen=True)
class Partition:
    """Nodes ``a = x_0 < ... < x_n = b`` and one interior point per cell."""

    nodes: tuple[float, ...]
    xi: tuple[float, ...]

    def __post_init__(self):
        nodes = tuple(float(t) for t in self.nodes)
        xi = tuple(float(t) for t in self.xi)
        if len(nodes) < 2:
            raise DomainError("a partition needs at least two nodes")
        if not all(math.isfinite(t) for t in nodes + xi):
            raise DomainError("partition nodes and points must be finite")
        for i in range(len(nodes) - 1):
            if not nodes[i] < nodes[i + 1]:
                raise DomainError(f"nodes must be strictly increasing (nodes {i} and {i + 1})")
        if len(xi) != len(nodes) - 1:
            raise DomainError(f"expected {len(nodes) - 1} interior points, got {len(xi)}")
        for i, t in enumerate(xi):
            if not nodes[i] <= t <= nodes[i + 1]:
                raise DomainError(f"point {t!r} of cell {i} lies outside [{nodes[i]!r}, {nodes[i + 1]!r}]")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "xi", xi)

    @classmethod
    def from_nodes(cls, nodes: Sequence[float], xi: Sequence[float] | None = None) -> Partition:
        """Partition on the given nodes; ``xi`` defaults to cell midpoints."""
        nodes = [float(t) for t in nodes]
        if xi is None:
            xi = [0.5 * (nodes[i] + nodes[i + 1]) for i in range(len(nodes) - 1)]
        return cls(tuple(nodes), tuple(xi))

    @classmethod
    def uniform(cls, iv: Interval, n: int, xi: Sequence[float] | None = None) -> Partition:
        if n < 1:
            raise DomainError(f"cell count must be positive, got {n}")
        if iv.degenerate:
            raise DomainError("cannot partition a degenerate interval")
        d = iv.width()
        nodes = [iv.a + d * i / n for i in range(n)] + [iv.b]
        return cls.from_nodes(nodes, xi)

    @property
    def n(self) -> int:
        return len(self.xi)

    @property
    def interval(self) -> Interval:
        return Interval(self.nodes[0], self.nodes[-1])

    @property
    def widths(self) -> tuple[float, ...]:
        return tuple(self.nodes[i + 1] - self.nodes[i] for i in range(self.n))

    def cell(self, i: int) -> Interval:
        return Interval(self.nodes[i], self.nodes[i + 1])


@dataclass(frozen=True)
class CompositeCertificate:
    value: float
    bound: float
    cells: tuple[CertifiedEstimate, ...]
    family: Rule
    h: float

    def contains(self, exact: float, rtol: float = 0.0, atol: float = 0.0) -> bool:
        return abs(self.value - exact) <= self.bound * (1 + rtol) + atol


def _composite(f, part, h, family, l, L, strict):
    cache: dict[float, float] = {}

    def sample(t):
        if t not in cache:
            cache[t] = evaluate(f, t)
        return cache[t]

    cells = []
    for i in range(part.n):
        a, b, x = part.nodes[i], part.nodes[i + 1], part.xi[i]
        iv = Interval(a, b)
        p = RuleParams(h, x)
        if strict and not p.admissible(iv):
            lo, hi = iv.admissible_range(h)
            raise DomainError(
                f"point {x!r} of cell {i} [{a!r}, {b!r}] is not admissible for h={h!r}; "
                f"need {lo!r} <= x <= {hi!r}"
            )
        value, bound, S = _cell_estimate(family, a, b, h, x, sample(a), sample(b), sample(x), l, L, cell=i)
        cells.append(CertifiedEstimate(value, bound, family, p, S, iv))
    return CompositeCertificate(
        value=ordered_sum(c.value for c in cells),
        bound=ordered_sum(c.bound for c in cells),
        cells=tuple(cells),
        family=family,
        h=h,
    )


# The three h = 1/2 composites accept any interior point in each cell. The
# kernel-max closed form holds for every x in the cell and the kernel-integral
# closed form over-estimates outside the admissible range, so the bounds stay
# valid.

def composite_midrange(f: Integrand, part: Partition, s: SlopeBounds) -> CompositeCertificate:
    return _composite(f, part, 0.5, Rule.MIDRANGE, s.l, s.L, strict=False)


def composite_lower(f: Integrand, part: Partition, l: float) -> CompositeCertificate:
    return _composite(f, part, 0.5, Rule.LOWER, _require_finite("l", l), math.inf, strict=False)


def composite_upper(f: Integrand, part: Partition, L: float) -> CompositeCertificate:
    return _composite(f, part, 0.5, Rule.UPPER, -math.inf, _require_finite("L", L), strict=False)


def composite_general(
    f: Integrand, part: Partition, h: float, s: SlopeBounds, family: Rule = Rule.MIDRANGE
) -> CompositeCertificate:
    """Cell-wise rule of ``family`` at weight ``h``.

    Each ``xi_i`` must be admissible for ``h`` in its own cell. ``LIPSCHITZ``
    requires a symmetric envelope ``(-L, L)``.
    """
    h = RuleParams(h, part.nodes[0]).h
    if family is Rule.LIPSCHITZ and s.l != -s.L:
        raise DomainError(f"Lipschitz family needs symmetric slopes, got ({s.l!r}, {s.L!r})")
    return _composite(f, part, h, family, s.l, s.L, strict=True)


def adaptive_partition(
    f: Integrand, iv: Interval, s: SlopeBounds, tol: float, max_cells: int = 4096
) -> Partition:
    """Refine by bisection until the midrange three-point bound is ``<= tol``.

    Each round bisects every cell whose bound contribution ties the current
    maximum (in index order, as far as the budget allows), so equal cells are
    refined together. Raises :class:`BudgetExceededError` with the best
    partition reached when ``max_cells`` would be exceeded.
    """
    tol = float(tol)
    if not tol >= 0:
        raise DomainError(f"tolerance must be non-negative, got {tol!r}")
    if max_cells < 1:
        raise DomainError(f"max_cells must be positive, got {max_cells}")
    if iv.degenerate:
        raise DomainError("cannot partition a degenerate interval")

    def cell_bound(a, b):
        x = 0.5 * (a + b)
        fa, fb, fx = evaluate(f, a), evaluate(f, b), evaluate(f, x)
        return _cell_estimate(Rule.MIDRANGE, a, b, 0.5, x, fa, fb, fx, s.l, s.L)[1]

    cells = [(iv.a, iv.b)]
    bounds = [cell_bound(iv.a, iv.b)]
    while True:
        total = ordered_sum(bounds)
        if total <= tol:
            return Partition.from_nodes([c[0] for c in cells] + [iv.b])
        peak = max(bounds)
        tied = [i for i, bd in enumerate(bounds) if bd >= peak * (1 - 1e-12)]
        room = max_cells - len(cells)
        splittable = [i for i in tied if cells[i][0] < 0.5 * (cells[i][0] + cells[i][1]) < cells[i][1]]
        if room <= 0 or not splittable:
            best = Partition.from_nodes([c[0] for c in cells] + [iv.b])
            raise BudgetExceededError(
                f"bound {total!r} still above tolerance {tol!r} with {len(cells)} cells",
                partition=best,
                bound=total,
            )
        chosen = set(splittable[:room])
        new_cells, new_bounds = [], []
        for i, (a, b) in enumerate(cells):
            if i in chosen:
                m = 0.5 * (a + b)
                new_cells += [(a, m), (m, b)]
                new_bounds += [cell_bound(a, m), cell_bound(m, b)]
            else:
                new_cells.append((a, b))
                new_bounds.append(bounds[i])
        cells, bounds = new_cells, new_bounds
